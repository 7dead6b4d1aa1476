#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "rvp/manifest.hpp"
#include "rvp/png_io.hpp"
#include "test_util.hpp"

namespace rvp::test {

// Small two-class dataset in `dir`: each sample has one image plus mask
// and/or box regions on alternating categories ("cat" id 0, "dog" id 1).
inline AnnotationManifest make_fixture_manifest(const std::filesystem::path& dir,
                                                int n_samples, bool mask_regions,
                                                bool box_regions, int image_size = 48) {
    std::filesystem::create_directories(dir / "masks");
    std::filesystem::create_directories(dir / "images");

    AnnotationManifest m;
    m.dataset_name = "fixture";
    m.categories = {{0, "cat"}, {1, "dog"}};
    m.base_dir = dir;

    Rng rng(424242);
    for (int i = 0; i < n_samples; ++i) {
        SampleRecord sample;
        sample.id = "s" + std::to_string(i);
        sample.image_path = "images/" + sample.id + ".png";

        Raster img(image_size, image_size);
        for (auto& px : img.pixels())
            px = {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                  static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                  static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
        write_image_png(dir / sample.image_path, img);

        if (mask_regions) {
            RegionRecord r;
            r.region_id = "m" + std::to_string(i);
            r.category_id = i % 2;
            r.geometry.kind = RegionGeometry::Kind::Mask;
            r.geometry.mask_path = "masks/" + sample.id + "_m.png";
            const int cx = 10 + static_cast<int>(rng.uniform_int(0, image_size - 25));
            const int cy = 10 + static_cast<int>(rng.uniform_int(0, image_size - 25));
            write_mask_png(dir / r.geometry.mask_path,
                           disk_mask(image_size, image_size, cx, cy, 7));
            sample.regions.push_back(std::move(r));
        }
        if (box_regions) {
            RegionRecord r;
            r.region_id = "b" + std::to_string(i);
            r.category_id = (i + 1) % 2;
            r.geometry.kind = RegionGeometry::Kind::Box;
            r.geometry.box = {static_cast<int>(rng.uniform_int(0, 8)),
                              static_cast<int>(rng.uniform_int(0, 8)), 24, 20};
            sample.regions.push_back(std::move(r));
        }
        m.samples.push_back(std::move(sample));
    }
    return m;
}

// Answer key where every request gets the gold category name: a perfect
// oracle for the full pipeline. Covers plain, vote-point, and summarize ids.
inline std::map<std::string, std::string> perfect_answer_key(const AnnotationManifest& m,
                                                             int vote_points = 5) {
    std::map<std::string, std::string> key;
    for (const auto& sample : m.samples) {
        for (const auto& region : sample.regions) {
            const Category* cat = m.find_category(region.category_id);
            const std::string base = sample.id + "#" + region.region_id;
            key[base] = cat->name;
            key[base + "#summarize"] = cat->name;
            for (int k = 0; k < vote_points; ++k)
                key[base + "#p" + std::to_string(k)] = cat->name;
        }
    }
    return key;
}

}  // namespace rvp::test
