#include "rvp/degrade.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "rvp/error.hpp"
#include "rvp/png_io.hpp"
#include "rvp/rng.hpp"

namespace rvp {

namespace {

BinaryMask intersect(const BinaryMask& a, const BinaryMask& b) {
    BinaryMask out(a.width(), a.height());
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x) out.set(x, y, a.at(x, y) && b.at(x, y));
    return out;
}

std::string scribble_params_string(const ScribbleParams& p) {
    std::ostringstream os;
    os << "scribble(s=" << p.kernel_size_cap << ",T=" << p.iterations << ",sigma=" << p.sigma
       << ",threshold=" << p.threshold << ")";
    return os.str();
}

std::string box_params_string(const BoxShrinkParams& p) {
    std::ostringstream os;
    os << "partial_box(ratio=" << p.target_area_ratio << ")";
    return os.str();
}

// The output manifest lives in a different directory, so paths that keep
// pointing at the source dataset are rewritten to resolved form.
std::string resolve_against(const std::filesystem::path& base, const std::string& rel) {
    return (base / rel).lexically_normal().string();
}

}  // namespace

BinaryMask degrade_mask(const BinaryMask& gt, const ScribbleParams& params) {
    Rng rng(params.seed);

    // Start pixel drawn uniformly from the foreground, row-major order.
    std::vector<PixelPoint> foreground;
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x)
            if (gt.at(x, y)) foreground.push_back({x, y});
    if (foreground.empty()) throw EmptyRegion("degrade_mask: ground-truth mask is empty");
    const PixelPoint start =
        foreground[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(
                                                                   foreground.size()) - 1))];

    BinaryMask grown(gt.width(), gt.height());
    grown.set(start.x, start.y, true);
    for (int t = 0; t < params.iterations; ++t) {
        const int size = static_cast<int>(rng.uniform_int(0, params.kernel_size_cap)) * 2 + 1;
        const int direction = static_cast<int>(rng.uniform_int(0, 7));
        grown = dilate(grown, make_kernel(size, direction));
    }

    grown = intersect(grown, gt);
    BinaryMask smoothed = gaussian_blur_threshold(grown, params.sigma, params.threshold);

    // Blur can leak outside gt or sever the stroke; clamp back, re-anchor the
    // start pixel, and keep only its component.
    smoothed = intersect(smoothed, gt);
    smoothed.set(start.x, start.y, true);
    return connected_component(smoothed, start);
}

BBox degrade_box(const BBox& gt, const BoxShrinkParams& params) {
    const double ratio = params.target_area_ratio;
    if (ratio <= 0.0 || ratio > 1.0) throw Error("degrade_box: ratio must be in (0, 1]");
    if (gt.w < 1 || gt.h < 1) throw InvalidBox("degrade_box: empty box");
    const double min_area = std::ceil(1.0 / ratio);
    if (static_cast<double>(gt.area()) < min_area)
        throw BoxTooSmall("degrade_box: box area " + std::to_string(gt.area()) +
                          " cannot hold an integer sub-box at ratio " + std::to_string(ratio));

    Rng rng(params.seed);
    const double rw = rng.uniform_real(ratio, 1.0);
    int w = static_cast<int>(std::llround(rw * gt.w));
    w = std::clamp(w, 1, gt.w);
    int h = static_cast<int>(std::llround(ratio * gt.w * gt.h / w));
    h = std::clamp(h, 1, gt.h);

    const int x = gt.x + static_cast<int>(rng.uniform_int(0, gt.w - w));
    const int y = gt.y + static_cast<int>(rng.uniform_int(0, gt.h - h));
    return {x, y, w, h};
}

std::pair<AnnotationManifest, SkipReport> build_benchmark(const AnnotationManifest& manifest,
                                                          const BenchmarkParams& params,
                                                          const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir / "masks");

    AnnotationManifest out = manifest;
    out.base_dir = out_dir;
    SkipReport skips;

    struct RegionSlot {
        std::size_t sample_idx;
        std::size_t region_idx;
        std::optional<RegionRecord> result;  // nullopt = drop (skipped)
        std::optional<SkipEntry> skip;
        std::optional<std::pair<std::string, BinaryMask>> mask_to_write;  // rel path
    };

    std::vector<RegionSlot> slots;
    for (std::size_t si = 0; si < manifest.samples.size(); ++si)
        for (std::size_t ri = 0; ri < manifest.samples[si].regions.size(); ++ri)
            slots.push_back({si, ri, std::nullopt, std::nullopt, std::nullopt});

    auto process = [&](RegionSlot& slot) {
        const SampleRecord& sample = manifest.samples[slot.sample_idx];
        const RegionRecord& region = sample.regions[slot.region_idx];
        const std::uint64_t seed = hash_seed(params.seed, sample.id, region.region_id);
        RegionRecord result = region;
        if (result.geometry.kind == RegionGeometry::Kind::Mask)
            result.geometry.mask_path =
                resolve_against(manifest.base_dir, result.geometry.mask_path);
        try {
            if (params.mode == BenchmarkMode::ScribbleMask &&
                region.geometry.kind == RegionGeometry::Kind::Mask) {
                const BinaryMask gt = read_mask_png(manifest.base_dir / region.geometry.mask_path);
                ScribbleParams sp = params.scribble;
                sp.seed = seed;
                const BinaryMask degraded = degrade_mask(gt, sp);
                const std::string rel =
                    "masks/" + sample.id + "_" + region.region_id + "_scribble.png";
                result.provenance = RegionProvenance{result.geometry, seed,
                                                     scribble_params_string(params.scribble)};
                result.geometry.mask_path = rel;
                slot.mask_to_write = {rel, degraded};
            } else if (params.mode == BenchmarkMode::PartialBox &&
                       region.geometry.kind == RegionGeometry::Kind::Box) {
                BoxShrinkParams bp = params.box;
                bp.seed = seed;
                const BBox degraded = degrade_box(region.geometry.box, bp);
                result.provenance =
                    RegionProvenance{region.geometry, seed, box_params_string(params.box)};
                result.geometry.box = degraded;
            }
            // Regions of non-matching type pass through unchanged.
            slot.result = std::move(result);
        } catch (const Error& e) {
            slot.skip = SkipEntry{sample.id, region.region_id, e.what()};
        }
    };

    const int jobs = std::max(1, params.jobs);
    if (jobs == 1 || slots.size() < 2) {
        for (auto& slot : slots) process(slot);
    } else {
        std::vector<std::thread> workers;
        std::atomic<std::size_t> next{0};
        for (int j = 0; j < jobs; ++j) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < slots.size(); i = next.fetch_add(1))
                    process(slots[i]);
            });
        }
        for (auto& w : workers) w.join();
    }

    // Merge in deterministic order regardless of scheduling.
    for (auto& s : out.samples) {
        s.regions.clear();
        s.image_path = resolve_against(manifest.base_dir, s.image_path);
    }
    for (auto& slot : slots) {
        if (slot.skip) skips.entries.push_back(*slot.skip);
        if (slot.result) out.samples[slot.sample_idx].regions.push_back(std::move(*slot.result));
        if (slot.mask_to_write)
            write_mask_png(out_dir / slot.mask_to_write->first, slot.mask_to_write->second);
    }
    return {std::move(out), std::move(skips)};
}

}  // namespace rvp
