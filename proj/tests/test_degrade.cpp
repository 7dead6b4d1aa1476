#include <doctest.h>

#include <fstream>
#include <sstream>

#include "rvp/degrade.hpp"
#include "rvp/error.hpp"
#include "fixture.hpp"

using namespace rvp;
using namespace rvp::test;

namespace {

bool is_single_component(const BinaryMask& m) {
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m.at(x, y)) return connected_component(m, {x, y}) == m;
    return false;  // empty
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("degrade_mask: T=0 yields a single foreground pixel of gt") {
    const auto gt = disk_mask(32, 32, 16, 16, 8);
    ScribbleParams params;
    params.iterations = 0;
    params.seed = 9;
    const auto out = degrade_mask(gt, params);
    CHECK(out.count() == 1);
    CHECK(out.subset_of(gt));
}

TEST_CASE("degrade_mask: single-pixel gt is absorbing") {
    BinaryMask gt(16, 16);
    gt.set(5, 9, true);
    ScribbleParams params;
    params.seed = 3;
    const auto out = degrade_mask(gt, params);
    CHECK(out == gt);
}

TEST_CASE("degrade_mask: empty gt throws") {
    CHECK_THROWS_AS(degrade_mask(BinaryMask(8, 8), ScribbleParams{}), EmptyRegion);
}

TEST_CASE("degrade_mask: invariants over seeds on a 64x64 disk") {
    const auto gt = disk_mask(64, 64, 32, 32, 24);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        ScribbleParams params;
        params.seed = seed;
        const auto out = degrade_mask(gt, params);
        CHECK(out.count() >= 1);
        CHECK(out.count() < gt.count());
        CHECK(out.subset_of(gt));
        CHECK(is_single_component(out));
    }
}

TEST_CASE("degrade_mask: determinism given seed") {
    const auto gt = disk_mask(40, 40, 20, 20, 14);
    ScribbleParams params;
    params.seed = 777;
    CHECK(degrade_mask(gt, params) == degrade_mask(gt, params));
}

TEST_CASE("degrade_mask: mean area grows with T") {
    const auto gt = disk_mask(64, 64, 32, 32, 24);
    auto mean_area = [&](int iterations) {
        double total = 0.0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            ScribbleParams params;
            params.iterations = iterations;
            params.seed = seed;
            total += static_cast<double>(degrade_mask(gt, params).count());
        }
        return total / 100.0;
    };
    CHECK(mean_area(40) >= mean_area(5));
}

TEST_CASE("degrade_box: area bounds on a 100x100 box at ratio 0.10") {
    const BBox gt{0, 0, 100, 100};
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        BoxShrinkParams params;
        params.seed = seed;
        const auto out = degrade_box(gt, params);
        CHECK(gt.contains_box(out));
        CHECK(out.area() >= 900);
        CHECK(out.area() <= 1100);
    }
}

TEST_CASE("degrade_box: ratio 1.0 is the identity") {
    const BBox gt{5, 7, 30, 20};
    BoxShrinkParams params;
    params.target_area_ratio = 1.0;
    params.seed = 11;
    CHECK(degrade_box(gt, params) == gt);
}

TEST_CASE("degrade_box: small boxes stay contained") {
    const BBox gt{0, 0, 4, 4};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        BoxShrinkParams params;
        params.seed = seed;
        const auto out = degrade_box(gt, params);
        CHECK(gt.contains_box(out));
        CHECK(out.area() >= 1);
        CHECK(out.area() <= 4);
    }
}

TEST_CASE("degrade_box: determinism and too-small error") {
    BoxShrinkParams params;
    params.seed = 1234;
    CHECK(degrade_box({0, 0, 50, 50}, params) == degrade_box({0, 0, 50, 50}, params));
    CHECK_THROWS_AS(degrade_box({0, 0, 1, 1}, params), BoxTooSmall);
}

TEST_CASE("build_benchmark: scribble mode degrades every mask region") {
    TempDir src;
    TempDir dst;
    const auto manifest = make_fixture_manifest(src.path, 3, true, false);

    BenchmarkParams params;
    params.mode = BenchmarkMode::ScribbleMask;
    params.seed = 5;
    const auto [degraded, skips] = build_benchmark(manifest, params, dst.path);
    CHECK(skips.entries.empty());
    REQUIRE(degraded.samples.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(degraded.samples[i].regions.size() == 1);
        const auto& region = degraded.samples[i].regions[0];
        REQUIRE(region.provenance.has_value());
        const auto out_mask = read_mask_png(dst.path / region.geometry.mask_path);
        const auto gt_mask =
            read_mask_png(src.path / manifest.samples[i].regions[0].geometry.mask_path);
        CHECK(out_mask.subset_of(gt_mask));
        CHECK(region.category_id == manifest.samples[i].regions[0].category_id);
    }
}

TEST_CASE("build_benchmark: empty manifest") {
    TempDir dst;
    AnnotationManifest empty;
    empty.dataset_name = "empty";
    const auto [out, skips] = build_benchmark(empty, BenchmarkParams{}, dst.path);
    CHECK(out.samples.empty());
    CHECK(skips.entries.empty());
}

TEST_CASE("build_benchmark: too-small box lands in the skip report") {
    TempDir src;
    TempDir dst;
    auto manifest = make_fixture_manifest(src.path, 1, false, true);
    manifest.samples[0].regions[0].geometry.box = {0, 0, 1, 1};

    BenchmarkParams params;
    params.mode = BenchmarkMode::PartialBox;
    const auto [out, skips] = build_benchmark(manifest, params, dst.path);
    REQUIRE(skips.entries.size() == 1);
    CHECK(skips.entries[0].sample_id == "s0");
    CHECK(out.samples[0].regions.empty());
}

TEST_CASE("build_benchmark: byte-identical reruns and jobs-independence") {
    TempDir src;
    const auto manifest = make_fixture_manifest(src.path, 4, true, true);

    auto run = [&](int jobs) {
        TempDir dst;
        BenchmarkParams params;
        params.mode = BenchmarkMode::ScribbleMask;
        params.seed = 99;
        params.jobs = jobs;
        const auto [out, skips] = build_benchmark(manifest, params, dst.path);
        std::string blob = manifest_to_json(out);
        for (const auto& s : out.samples)
            for (const auto& r : s.regions)
                if (r.geometry.kind == RegionGeometry::Kind::Mask)
                    blob += slurp(dst.path / r.geometry.mask_path);
        return blob;
    };
    const auto serial = run(1);
    CHECK(serial == run(1));
    CHECK(serial == run(8));
}
