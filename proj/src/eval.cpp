#include "rvp/eval.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "rvp/error.hpp"
#include "rvp/png_io.hpp"
#include "rvp/rng.hpp"

namespace rvp {

using nlohmann::json;

double compute_miou(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& accumulators) {
    double sum = 0.0;
    int n = 0;
    for (const auto& [inter, uni] : accumulators) {
        if (uni == 0) continue;  // absent class, excluded by convention
        sum += static_cast<double>(inter) / static_cast<double>(uni);
        ++n;
    }
    return n == 0 ? 0.0 : sum / n;
}

std::string summarize_prompt(const std::vector<std::string>& responses,
                             const std::string& user_instruction) {
    std::string list;
    for (std::size_t i = 0; i < responses.size(); ++i) {
        if (i > 0) list += ", ";
        list += responses[i];
    }
    return "Here is a list of responses: [" + list + "]. The instruction from the user is " +
           user_instruction + " Please summarize these responses and answer the instruction "
           "from the user.";
}

namespace {

RegionAnnotation to_annotation(const RegionRecord& region,
                               const std::filesystem::path& base_dir) {
    switch (region.geometry.kind) {
        case RegionGeometry::Kind::Point: return region.geometry.point;
        case RegionGeometry::Kind::Box: return region.geometry.box;
        case RegionGeometry::Kind::Mask:
            return read_mask_png(base_dir / region.geometry.mask_path);
    }
    throw Error("unreachable geometry kind");
}

PixelPoint random_foreground_pixel(const BinaryMask& mask, Rng& rng) {
    std::vector<PixelPoint> fg;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask.at(x, y)) fg.push_back({x, y});
    if (fg.empty()) throw EmptyRegion("random position: mask has no foreground");
    return fg[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(fg.size()) - 1))];
}

}  // namespace

VoteSession vote_infer(const Raster& image, const std::string& sample_id,
                       const RegionRecord& region, const EvalConfig& cfg,
                       const std::vector<std::string>& category_names, ChatBackend& backend,
                       Embedder* embedder) {
    if (!cfg.vote) throw Error("vote_infer: no vote config");
    if (region.geometry.kind != RegionGeometry::Kind::Box)
        throw Error("vote_infer: vote mode requires a box annotation");

    const std::string instruction = resolve_question(cfg.tmpl, cfg.style);
    const auto grid_points = box_grid_points(region.geometry.box, cfg.vote->grid);

    VoteSession session;
    session.sample_id = sample_id;
    session.region_id = region.region_id;

    for (std::size_t k = 0; k < grid_points.size(); ++k) {
        try {
            const Raster rendered = render_marker(image, grid_points[k], cfg.style);
            const ChatResponse reply =
                backend.chat({encode_png(rendered), instruction,
                              sample_id + "#" + region.region_id + "#p" + std::to_string(k)});
            session.points.push_back(grid_points[k]);
            session.responses.push_back(reply.text);
        } catch (const BackendError&) {
            // Per-point failures degrade gracefully; the aggregator tolerates
            // missing votes.
        }
    }
    if (session.responses.empty())
        throw BackendError("vote_infer: all grid-point queries failed");

    if (cfg.vote->aggregator == VoteAggregator::Majority) {
        std::map<int, int> counts;
        for (const auto& text : session.responses)
            ++counts[match_category(text, category_names, cfg.matcher, embedder)];
        int best = -1;
        int best_count = 0;
        for (const auto& [idx, count] : counts) {  // map order: smallest index wins ties
            if (count > best_count) {
                best = idx;
                best_count = count;
            }
        }
        session.category_index = best;
        session.aggregated_text = category_names[static_cast<std::size_t>(best)];
    } else {
        const ChatResponse reply =
            backend.chat({encode_png(image), summarize_prompt(session.responses, instruction),
                          sample_id + "#" + region.region_id + "#summarize"});
        session.aggregated_text = reply.text;
        session.category_index =
            match_category(session.aggregated_text, category_names, cfg.matcher, embedder);
    }
    return session;
}

EvalReport evaluate(const AnnotationManifest& manifest, const EvalConfig& cfg,
                    ChatBackend& backend, Embedder* embedder) {
    std::vector<std::string> category_names;
    std::map<int, int> id_to_index;
    for (const auto& c : manifest.categories) {
        id_to_index[c.id] = static_cast<int>(category_names.size());
        category_names.push_back(c.name);
    }
    const std::string instruction = resolve_question(cfg.tmpl, cfg.style);

    struct SampleWork {
        std::vector<SampleResult> results;
        std::vector<SkipEntry> skips;
        // per-category (intersection, union) for this sample
        std::vector<std::pair<std::uint64_t, std::uint64_t>> accum;
    };
    std::vector<SampleWork> work(manifest.samples.size());

    auto process_sample = [&](std::size_t si) {
        const SampleRecord& sample = manifest.samples[si];
        SampleWork& w = work[si];
        w.accum.assign(category_names.size(), {0, 0});

        Raster image;
        try {
            image = read_image_png(manifest.base_dir / sample.image_path);
        } catch (const std::exception& e) {
            for (const auto& r : sample.regions)
                w.skips.push_back({sample.id, r.region_id, e.what()});
            return;
        }

        // SegProxy label maps: -1 = unpainted. Regions paint in order, so
        // overlaps resolve last-writer-wins.
        std::vector<int> gt_map;
        std::vector<int> pred_map;
        if (cfg.mode == EvalMode::SegProxy) {
            gt_map.assign(static_cast<std::size_t>(image.width()) * image.height(), -1);
            pred_map.assign(gt_map.size(), -1);
        }

        for (const auto& region : sample.regions) {
            try {
                const auto gold_it = id_to_index.find(region.category_id);
                if (gold_it == id_to_index.end())
                    throw DecodeError("unknown category id " +
                                      std::to_string(region.category_id));
                const int gold = gold_it->second;

                int predicted = -1;
                if (cfg.vote && region.geometry.kind == RegionGeometry::Kind::Box &&
                    cfg.gal_enabled) {
                    predicted = vote_infer(image, sample.id, region, cfg, category_names,
                                           backend, embedder)
                                    .category_index;
                } else {
                    Raster rendered;
                    if (!cfg.gal_enabled) {
                        // Ablation: render the raw region geometry.
                        switch (region.geometry.kind) {
                            case RegionGeometry::Kind::Mask:
                                rendered = render_mask_overlay(
                                    image,
                                    read_mask_png(manifest.base_dir / region.geometry.mask_path),
                                    cfg.style.color);
                                break;
                            case RegionGeometry::Kind::Box:
                                rendered = render_box_outline(
                                    image, region.geometry.box.x, region.geometry.box.y,
                                    region.geometry.box.w, region.geometry.box.h,
                                    cfg.style.color, 2);
                                break;
                            case RegionGeometry::Kind::Point:
                                rendered =
                                    render_marker(image, region.geometry.point, cfg.style);
                                break;
                        }
                    } else {
                        PixelPoint point;
                        if (cfg.position == PositionStrategy::Random &&
                            region.geometry.kind == RegionGeometry::Kind::Mask) {
                            Rng rng(hash_seed(cfg.seed, sample.id, region.region_id));
                            point = random_foreground_pixel(
                                read_mask_png(manifest.base_dir / region.geometry.mask_path),
                                rng);
                        } else {
                            const auto points =
                                disentangle(to_annotation(region, manifest.base_dir),
                                            image.width(), image.height());
                            point = points.front();
                        }
                        rendered = render_marker(image, point, cfg.style);
                    }
                    const ChatResponse reply = backend.chat(
                        {encode_png(rendered), instruction,
                         sample.id + "#" + region.region_id});
                    predicted = match_category(reply.text, category_names, cfg.matcher,
                                               embedder);
                }

                w.results.push_back(
                    {sample.id, region.region_id, predicted, gold, predicted == gold});

                if (cfg.mode == EvalMode::SegProxy &&
                    region.geometry.kind == RegionGeometry::Kind::Mask) {
                    const BinaryMask mask =
                        read_mask_png(manifest.base_dir / region.geometry.mask_path);
                    for (int y = 0; y < mask.height(); ++y) {
                        for (int x = 0; x < mask.width(); ++x) {
                            if (!mask.at(x, y)) continue;
                            const std::size_t i =
                                static_cast<std::size_t>(y) * image.width() + x;
                            gt_map[i] = gold;
                            pred_map[i] = predicted;
                        }
                    }
                }
            } catch (const std::exception& e) {
                w.skips.push_back({sample.id, region.region_id, e.what()});
            }
        }

        if (cfg.mode == EvalMode::SegProxy) {
            for (std::size_t i = 0; i < gt_map.size(); ++i) {
                const int g = gt_map[i];
                const int p = pred_map[i];
                if (g < 0 && p < 0) continue;
                if (g == p) {
                    ++w.accum[static_cast<std::size_t>(g)].first;
                    ++w.accum[static_cast<std::size_t>(g)].second;
                } else {
                    if (g >= 0) ++w.accum[static_cast<std::size_t>(g)].second;
                    if (p >= 0) ++w.accum[static_cast<std::size_t>(p)].second;
                }
            }
        }
    };

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || manifest.samples.size() < 2) {
        for (std::size_t i = 0; i < manifest.samples.size(); ++i) process_sample(i);
    } else {
        std::vector<std::thread> workers;
        std::atomic<std::size_t> next{0};
        for (int j = 0; j < jobs; ++j) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < manifest.samples.size();
                     i = next.fetch_add(1))
                    process_sample(i);
            });
        }
        for (auto& t : workers) t.join();
    }

    EvalReport report;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> accum(category_names.size(), {0, 0});
    for (const auto& w : work) {
        for (const auto& r : w.results) report.per_sample.push_back(r);
        for (const auto& s : w.skips) report.skips.entries.push_back(s);
        for (std::size_t c = 0; c < w.accum.size(); ++c) {
            accum[c].first += w.accum[c].first;
            accum[c].second += w.accum[c].second;
        }
    }

    report.n_samples = static_cast<int>(report.per_sample.size());
    report.n_skipped = static_cast<int>(report.skips.entries.size());
    int correct = 0;
    for (const auto& r : report.per_sample) correct += r.correct ? 1 : 0;
    report.accuracy = report.n_samples == 0
                          ? 0.0
                          : static_cast<double>(correct) / report.n_samples;

    if (cfg.mode == EvalMode::SegProxy) {
        for (std::size_t c = 0; c < accum.size(); ++c) {
            if (accum[c].second == 0) continue;
            ClassIou ci;
            ci.category_id = manifest.categories[c].id;
            ci.category = manifest.categories[c].name;
            ci.intersection_px = accum[c].first;
            ci.union_px = accum[c].second;
            ci.iou = static_cast<double>(ci.intersection_px) / ci.union_px;
            report.per_class.push_back(std::move(ci));
        }
        report.miou_defined = !report.per_class.empty();
        report.miou = compute_miou(accum);
    }
    return report;
}

void write_report_json(const EvalReport& report, const std::filesystem::path& path) {
    json j;
    j["overlap_policy"] = report.overlap_policy;
    j["miou"] = report.miou;
    j["miou_defined"] = report.miou_defined;
    j["accuracy"] = report.accuracy;
    j["n_samples"] = report.n_samples;
    j["n_skipped"] = report.n_skipped;
    j["per_class"] = json::array();
    for (const auto& c : report.per_class)
        j["per_class"].push_back({{"category_id", c.category_id},
                                  {"category", c.category},
                                  {"intersection_px", c.intersection_px},
                                  {"union_px", c.union_px},
                                  {"iou", c.iou}});
    j["per_sample"] = json::array();
    for (const auto& s : report.per_sample)
        j["per_sample"].push_back({{"sample_id", s.sample_id},
                                   {"region_id", s.region_id},
                                   {"predicted", s.predicted},
                                   {"gold", s.gold},
                                   {"correct", s.correct}});
    j["skips"] = json::array();
    for (const auto& e : report.skips.entries)
        j["skips"].push_back(
            {{"sample_id", e.sample_id}, {"region_id", e.region_id}, {"reason", e.reason}});
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report " + path.string());
    out << j.dump(2) << "\n";
}

void write_report_csv(const EvalReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report " + path.string());
    out << "category,intersection_px,union_px,iou\n";
    for (const auto& c : report.per_class)
        out << c.category << "," << c.intersection_px << "," << c.union_px << "," << c.iou
            << "\n";
    out << "summary,miou=" << report.miou << ",accuracy=" << report.accuracy
        << ",n_samples=" << report.n_samples << "\n";
}

}  // namespace rvp
