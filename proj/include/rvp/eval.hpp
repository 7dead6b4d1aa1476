#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rvp/dataset.hpp"
#include "rvp/gateway.hpp"
#include "rvp/manifest.hpp"

namespace rvp {

enum class EvalMode { SegProxy, BoxAccuracy };
enum class PositionStrategy { Center, Random };
enum class VoteAggregator { Summarize, Majority };

struct VoteConfig {
    GridSpec grid;
    VoteAggregator aggregator = VoteAggregator::Majority;
};

struct EvalConfig {
    EvalMode mode = EvalMode::SegProxy;
    PromptTemplate tmpl;
    PromptStyle style;
    Matcher matcher = Matcher::TokenOverlap;
    std::optional<VoteConfig> vote;       // boxes only
    PositionStrategy position = PositionStrategy::Center;  // Random: masks only
    bool gal_enabled = true;              // false: render full region geometry
    std::uint64_t seed = 0;
    int jobs = 1;
    double skip_rate_threshold = 1.0;
};

struct ClassIou {
    int category_id = 0;
    std::string category;
    std::uint64_t intersection_px = 0;
    std::uint64_t union_px = 0;
    double iou = 0.0;
};

struct SampleResult {
    std::string sample_id;
    std::string region_id;
    int predicted = -1;  // index into the manifest category list
    int gold = -1;
    bool correct = false;
};

struct EvalReport {
    std::string overlap_policy = "last-writer-wins in sample order";
    std::vector<ClassIou> per_class;
    double miou = 0.0;
    bool miou_defined = false;
    double accuracy = 0.0;
    int n_samples = 0;
    int n_skipped = 0;
    std::vector<SampleResult> per_sample;
    SkipReport skips;
};

// One vote-based inference over a box region: one rendered image per grid
// point, one model response per image, aggregated to a single answer.
struct VoteSession {
    std::string sample_id;
    std::string region_id;
    std::vector<PixelPoint> points;
    std::vector<std::string> responses;
    std::string aggregated_text;
    int category_index = -1;
};

// Unweighted mean IoU over classes with nonzero union; 0 when no class has one.
double compute_miou(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& accumulators);

// The verbatim summarization instruction sent in Summarize vote mode.
std::string summarize_prompt(const std::vector<std::string>& responses,
                             const std::string& user_instruction);

VoteSession vote_infer(const Raster& image, const std::string& sample_id,
                       const RegionRecord& region, const EvalConfig& cfg,
                       const std::vector<std::string>& category_names, ChatBackend& backend,
                       Embedder* embedder = nullptr);

EvalReport evaluate(const AnnotationManifest& manifest, const EvalConfig& cfg,
                    ChatBackend& backend, Embedder* embedder = nullptr);

void write_report_json(const EvalReport& report, const std::filesystem::path& path);
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);

}  // namespace rvp
