#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rvp/geometry.hpp"

namespace rvp {

struct Category {
    int id = 0;
    std::string name;
    bool operator==(const Category&) const = default;
};

// Geometry as stored in the manifest; masks are referenced by PNG path so the
// manifest itself stays small.
struct RegionGeometry {
    enum class Kind { Point, Box, Mask };
    Kind kind = Kind::Point;
    PixelPoint point;
    BBox box;
    std::string mask_path;  // relative to the manifest file
    bool operator==(const RegionGeometry&) const = default;
};

struct RegionProvenance {
    RegionGeometry original;
    std::uint64_t seed = 0;
    std::string params;  // serialized degradation parameters
    bool operator==(const RegionProvenance&) const = default;
};

struct RegionRecord {
    std::string region_id;
    int category_id = 0;
    RegionGeometry geometry;
    std::optional<RegionProvenance> provenance;
    bool operator==(const RegionRecord&) const = default;
};

struct SampleRecord {
    std::string id;
    std::string image_path;  // relative to the manifest file
    std::vector<RegionRecord> regions;
    bool operator==(const SampleRecord&) const = default;
};

struct AnnotationManifest {
    std::string dataset_name;
    std::string region_merge_policy = "connected-components";
    std::vector<Category> categories;
    std::vector<SampleRecord> samples;

    // Directory the relative paths resolve against (not serialized).
    std::filesystem::path base_dir;

    const Category* find_category(int id) const;
    bool operator==(const AnnotationManifest& o) const {
        return dataset_name == o.dataset_name && region_merge_policy == o.region_merge_policy &&
               categories == o.categories && samples == o.samples;
    }
};

struct SkipEntry {
    std::string sample_id;
    std::string region_id;
    std::string reason;
};

struct SkipReport {
    std::vector<SkipEntry> entries;
};

AnnotationManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const AnnotationManifest& manifest, const std::filesystem::path& path);
std::string manifest_to_json(const AnnotationManifest& manifest);

void save_skip_report(const SkipReport& report, const std::filesystem::path& path);

// Ingest a directory of (image, label-map) PNG pairs: each palette/gray index
// in the label map is a category id and each 8-connected component of that
// index becomes one region with a mask PNG written under `out_dir`.
AnnotationManifest convert_label_maps(const std::string& dataset_name,
                                      const std::vector<Category>& categories,
                                      const std::vector<std::pair<std::string, std::string>>&
                                          image_and_label_paths,
                                      const std::filesystem::path& out_dir);

}  // namespace rvp
