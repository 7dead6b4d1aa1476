#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>

#include "rvp/geometry.hpp"
#include "rvp/manifest.hpp"

namespace rvp {

// Scribble growth: random directional dilations from a random start pixel,
// truncated to the ground truth, blurred, and re-connected at the start.
struct ScribbleParams {
    int kernel_size_cap = 5;  // s: kernel sizes are sampled odd in [1, 2s+1]
    int iterations = 20;      // T
    double sigma = 2.0;
    double threshold = 0.5;
    std::uint64_t seed = 0;
};

struct BoxShrinkParams {
    double target_area_ratio = 0.10;  // in (0, 1]
    std::uint64_t seed = 0;
};

BinaryMask degrade_mask(const BinaryMask& gt, const ScribbleParams& params);
BBox degrade_box(const BBox& gt, const BoxShrinkParams& params);

enum class BenchmarkMode { ScribbleMask, PartialBox };

struct BenchmarkParams {
    BenchmarkMode mode = BenchmarkMode::ScribbleMask;
    ScribbleParams scribble;
    BoxShrinkParams box;
    std::uint64_t seed = 0;  // global; per-region seeds are hashed from it
    int jobs = 1;
};

// Replace every matching region annotation with its degraded counterpart;
// degraded masks are written under out_dir/masks. Per-region failures land in
// the skip report and never abort the batch.
std::pair<AnnotationManifest, SkipReport> build_benchmark(const AnnotationManifest& manifest,
                                                          const BenchmarkParams& params,
                                                          const std::filesystem::path& out_dir);

}  // namespace rvp
