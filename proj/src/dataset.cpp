#include "rvp/dataset.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "rvp/error.hpp"
#include "rvp/png_io.hpp"
#include "rvp/rng.hpp"

namespace rvp {

using nlohmann::json;

namespace {

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

json style_to_json(const PromptStyle& s) {
    return {{"shape", shape_name(s.shape)},
            {"color", {s.color.r, s.color.g, s.color.b}},
            {"radius", s.radius},
            {"stroke", s.stroke}};
}

PromptStyle style_from_json(const json& j) {
    PromptStyle s;
    const auto shape = shape_from_name(j.at("shape").get<std::string>());
    if (!shape) throw DecodeError("unknown marker shape in style");
    s.shape = *shape;
    const auto& c = j.at("color");
    s.color = {c.at(0).get<std::uint8_t>(), c.at(1).get<std::uint8_t>(),
               c.at(2).get<std::uint8_t>()};
    s.radius = j.at("radius").get<int>();
    s.stroke = j.at("stroke").get<int>();
    return s;
}

}  // namespace

std::string region_descriptor(const PromptStyle& style) {
    const auto name = color_name(style.color);
    if (!name)
        throw UnnamedColor("no registered name for color (" + std::to_string(style.color.r) +
                           "," + std::to_string(style.color.g) + "," +
                           std::to_string(style.color.b) + ")");
    return *name + " " + shape_name(style.shape);
}

std::string resolve_question(const PromptTemplate& tmpl, const PromptStyle& style) {
    const auto name = color_name(style.color);
    if (!name) throw UnnamedColor("style color has no registered name");
    std::string q = replace_all(tmpl.question, "{color}", *name);
    return replace_all(q, "{form}", shape_name(style.shape));
}

std::string resolve_answer(const PromptTemplate& tmpl, const std::string& category) {
    return replace_all(tmpl.answer, "{category}", category);
}

std::pair<std::vector<InstructionSample>, SkipReport> build_dataset(
    const AnnotationManifest& manifest, const BuildParams& params,
    const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir / "images");

    const std::string question = resolve_question(params.tmpl, params.style);
    const std::string user_text = "<img> " + question;

    struct RegionTask {
        std::size_t sample_idx;
        std::size_t region_idx;
        std::vector<InstructionSample> results;
        std::vector<std::pair<std::string, Raster>> images_to_write;  // rel path
        std::optional<SkipEntry> skip;
    };
    std::vector<RegionTask> tasks;
    for (std::size_t si = 0; si < manifest.samples.size(); ++si)
        for (std::size_t ri = 0; ri < manifest.samples[si].regions.size(); ++ri)
            tasks.push_back({si, ri, {}, {}, std::nullopt});

    auto process = [&](RegionTask& task) {
        const SampleRecord& sample = manifest.samples[task.sample_idx];
        const RegionRecord& region = sample.regions[task.region_idx];
        try {
            const Category* cat = manifest.find_category(region.category_id);
            if (!cat)
                throw DecodeError("unknown category id " + std::to_string(region.category_id));
            const Raster image = read_image_png(manifest.base_dir / sample.image_path);

            RegionAnnotation annotation = PixelPoint{};
            switch (region.geometry.kind) {
                case RegionGeometry::Kind::Point:
                    annotation = region.geometry.point;
                    break;
                case RegionGeometry::Kind::Box:
                    annotation = region.geometry.box;
                    break;
                case RegionGeometry::Kind::Mask:
                    annotation = read_mask_png(manifest.base_dir / region.geometry.mask_path);
                    break;
            }
            const std::vector<PixelPoint> points =
                disentangle(annotation, image.width(), image.height(), params.grid);

            for (std::size_t k = 0; k < points.size(); ++k) {
                InstructionSample out;
                out.id = sample.id + "#" + region.region_id + "#" + std::to_string(k);
                out.prompt_style = params.style;
                out.source_sample_id = sample.id;
                out.source_region_id = region.region_id;
                out.point = points[k];
                out.conversations = {
                    {"user", user_text},
                    {"assistant", resolve_answer(params.tmpl, cat->name)}};

                const std::string rel = "images/" + sample.id + "_" + region.region_id + "_" +
                                        std::to_string(k) + ".png";
                out.rendered_image_path = rel;
                task.images_to_write.emplace_back(rel,
                                                  render_marker(image, points[k], params.style));
                task.results.push_back(std::move(out));
            }
        } catch (const Error& e) {
            task.skip = SkipEntry{sample.id, region.region_id, e.what()};
        } catch (const std::exception& e) {
            task.skip = SkipEntry{sample.id, region.region_id, e.what()};
        }
    };

    const int jobs = std::max(1, params.jobs);
    if (jobs == 1 || tasks.size() < 2) {
        for (auto& t : tasks) process(t);
    } else {
        std::vector<std::thread> workers;
        std::atomic<std::size_t> next{0};
        for (int j = 0; j < jobs; ++j) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                    process(tasks[i]);
            });
        }
        for (auto& w : workers) w.join();
    }

    std::vector<InstructionSample> samples;
    SkipReport skips;
    for (auto& task : tasks) {
        if (task.skip) skips.entries.push_back(*task.skip);
        for (std::size_t i = 0; i < task.images_to_write.size(); ++i) {
            const auto& [rel, img] = task.images_to_write[i];
            write_image_png(out_dir / rel, img);
            // Sidecar records what was rendered where, for auditability.
            const InstructionSample& s = task.results[i];
            json sidecar{{"point", {{"x", s.point.x}, {"y", s.point.y}}},
                         {"style", style_to_json(s.prompt_style)}};
            std::ofstream side(out_dir / (rel + ".json"), std::ios::binary);
            side << sidecar.dump(2) << "\n";
        }
        for (auto& s : task.results) samples.push_back(std::move(s));
    }
    return {std::move(samples), std::move(skips)};
}

std::string instruction_sample_to_json(const InstructionSample& s) {
    json j;
    j["id"] = s.id;
    j["rendered_image_path"] = s.rendered_image_path;
    j["prompt_style"] = style_to_json(s.prompt_style);
    j["conversations"] = json::array();
    for (const auto& turn : s.conversations)
        j["conversations"].push_back({{"role", turn.role}, {"text", turn.text}});
    j["meta"] = {{"sample_id", s.source_sample_id},
                 {"region_id", s.source_region_id},
                 {"point", {{"x", s.point.x}, {"y", s.point.y}}}};
    return j.dump();
}

InstructionSample instruction_sample_from_json(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw DecodeError(std::string("instruction sample parse error: ") + e.what());
    }
    InstructionSample s;
    s.id = j.at("id").get<std::string>();
    s.rendered_image_path = j.at("rendered_image_path").get<std::string>();
    s.prompt_style = style_from_json(j.at("prompt_style"));
    for (const auto& turn : j.at("conversations"))
        s.conversations.push_back(
            {turn.at("role").get<std::string>(), turn.at("text").get<std::string>()});
    const auto& meta = j.at("meta");
    s.source_sample_id = meta.at("sample_id").get<std::string>();
    s.source_region_id = meta.at("region_id").get<std::string>();
    s.point = {meta.at("point").at("x").get<int>(), meta.at("point").at("y").get<int>()};
    return s;
}

void write_jsonl(const std::vector<InstructionSample>& samples,
                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& s : samples) out << instruction_sample_to_json(s) << "\n";
}

std::vector<InstructionSample> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<InstructionSample> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        samples.push_back(instruction_sample_from_json(line));
    }
    return samples;
}

}  // namespace rvp
