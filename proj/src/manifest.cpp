#include "rvp/manifest.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "rvp/error.hpp"
#include "rvp/png_io.hpp"

namespace rvp {

using nlohmann::json;

namespace {

json geometry_to_json(const RegionGeometry& g) {
    switch (g.kind) {
        case RegionGeometry::Kind::Point:
            return {{"type", "point"}, {"x", g.point.x}, {"y", g.point.y}};
        case RegionGeometry::Kind::Box:
            return {{"type", "box"}, {"x", g.box.x}, {"y", g.box.y}, {"w", g.box.w},
                    {"h", g.box.h}};
        case RegionGeometry::Kind::Mask:
            return {{"type", "mask"}, {"mask_path", g.mask_path}};
    }
    throw Error("unreachable geometry kind");
}

RegionGeometry geometry_from_json(const json& j) {
    RegionGeometry g;
    const std::string type = j.at("type").get<std::string>();
    if (type == "point") {
        g.kind = RegionGeometry::Kind::Point;
        g.point = {j.at("x").get<int>(), j.at("y").get<int>()};
    } else if (type == "box") {
        g.kind = RegionGeometry::Kind::Box;
        g.box = {j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(),
                 j.at("h").get<int>()};
    } else if (type == "mask") {
        g.kind = RegionGeometry::Kind::Mask;
        g.mask_path = j.at("mask_path").get<std::string>();
    } else {
        throw DecodeError("unknown annotation type: " + type);
    }
    return g;
}

}  // namespace

const Category* AnnotationManifest::find_category(int id) const {
    for (const auto& c : categories)
        if (c.id == id) return &c;
    return nullptr;
}

std::string manifest_to_json(const AnnotationManifest& m) {
    json j;
    j["dataset_name"] = m.dataset_name;
    j["region_merge_policy"] = m.region_merge_policy;
    j["categories"] = json::array();
    for (const auto& c : m.categories) j["categories"].push_back({{"id", c.id}, {"name", c.name}});
    j["samples"] = json::array();
    for (const auto& s : m.samples) {
        json js{{"id", s.id}, {"image_path", s.image_path}, {"regions", json::array()}};
        for (const auto& r : s.regions) {
            json jr{{"region_id", r.region_id},
                    {"category_id", r.category_id},
                    {"annotation", geometry_to_json(r.geometry)}};
            if (r.provenance) {
                jr["provenance"] = {{"original", geometry_to_json(r.provenance->original)},
                                    {"seed", r.provenance->seed},
                                    {"params", r.provenance->params}};
            }
            js["regions"].push_back(std::move(jr));
        }
        j["samples"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

void save_manifest(const AnnotationManifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << manifest_to_json(m);
}

AnnotationManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read manifest " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DecodeError("manifest parse error in " + path.string() + ": " + e.what());
    }

    AnnotationManifest m;
    m.base_dir = path.parent_path();
    try {
        m.dataset_name = j.at("dataset_name").get<std::string>();
        m.region_merge_policy = j.value("region_merge_policy", std::string("connected-components"));
        std::set<int> seen_ids;
        for (const auto& jc : j.at("categories")) {
            Category c{jc.at("id").get<int>(), jc.at("name").get<std::string>()};
            if (!seen_ids.insert(c.id).second)
                throw DecodeError("duplicate category id " + std::to_string(c.id));
            m.categories.push_back(std::move(c));
        }
        for (const auto& js : j.at("samples")) {
            SampleRecord s;
            s.id = js.at("id").get<std::string>();
            s.image_path = js.at("image_path").get<std::string>();
            for (const auto& jr : js.at("regions")) {
                RegionRecord r;
                r.region_id = jr.at("region_id").get<std::string>();
                r.category_id = jr.at("category_id").get<int>();
                if (!seen_ids.contains(r.category_id))
                    throw DecodeError("region " + r.region_id + " references unknown category " +
                                      std::to_string(r.category_id));
                r.geometry = geometry_from_json(jr.at("annotation"));
                if (jr.contains("provenance")) {
                    RegionProvenance p;
                    p.original = geometry_from_json(jr.at("provenance").at("original"));
                    p.seed = jr.at("provenance").at("seed").get<std::uint64_t>();
                    p.params = jr.at("provenance").value("params", std::string{});
                    r.provenance = std::move(p);
                }
                s.regions.push_back(std::move(r));
            }
            m.samples.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw DecodeError("manifest schema error in " + path.string() + ": " + e.what());
    }
    return m;
}

void save_skip_report(const SkipReport& report, const std::filesystem::path& path) {
    json j = json::array();
    for (const auto& e : report.entries)
        j.push_back({{"sample_id", e.sample_id}, {"region_id", e.region_id}, {"reason", e.reason}});
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write skip report " + path.string());
    out << j.dump(2) << "\n";
}

AnnotationManifest convert_label_maps(
    const std::string& dataset_name, const std::vector<Category>& categories,
    const std::vector<std::pair<std::string, std::string>>& image_and_label_paths,
    const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir / "masks");

    AnnotationManifest m;
    m.dataset_name = dataset_name;
    m.categories = categories;
    m.base_dir = out_dir;

    std::set<int> known_ids;
    for (const auto& c : categories) known_ids.insert(c.id);

    int sample_idx = 0;
    for (const auto& [image_path, label_path] : image_and_label_paths) {
        SampleRecord sample;
        sample.id = std::filesystem::path(image_path).stem().string();
        if (sample.id.empty()) sample.id = "sample_" + std::to_string(sample_idx);
        ++sample_idx;
        sample.image_path = image_path;

        const LabelMap lm = read_label_map_png(label_path);
        // One pass per present label; each 8-connected component is a region.
        std::set<std::uint8_t> present(lm.labels.begin(), lm.labels.end());
        for (std::uint8_t label : present) {
            if (!known_ids.contains(label)) continue;  // unannotated / ignore index
            BinaryMask class_mask(lm.width, lm.height);
            for (int y = 0; y < lm.height; ++y)
                for (int x = 0; x < lm.width; ++x)
                    class_mask.set(x, y, lm.at(x, y) == label);

            BinaryMask remaining = class_mask;
            int comp_idx = 0;
            for (int y = 0; y < lm.height; ++y) {
                for (int x = 0; x < lm.width; ++x) {
                    if (!remaining.at(x, y)) continue;
                    const BinaryMask comp = connected_component(remaining, {x, y});
                    for (int yy = 0; yy < lm.height; ++yy)
                        for (int xx = 0; xx < lm.width; ++xx)
                            if (comp.at(xx, yy)) remaining.set(xx, yy, false);

                    RegionRecord region;
                    region.region_id = sample.id + "_c" + std::to_string(label) + "_" +
                                       std::to_string(comp_idx++);
                    region.category_id = label;
                    region.geometry.kind = RegionGeometry::Kind::Mask;
                    region.geometry.mask_path = "masks/" + region.region_id + ".png";
                    write_mask_png(out_dir / region.geometry.mask_path, comp);
                    sample.regions.push_back(std::move(region));
                }
            }
        }
        m.samples.push_back(std::move(sample));
    }
    return m;
}

}  // namespace rvp
