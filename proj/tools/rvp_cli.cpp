// rvp: referring-visual-prompt pipeline CLI.
//
// Subcommands: render, degrade, build, eval, vote, convert.
// Exit codes: 0 success, 1 runtime/backend failure, 2 validation error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rvp/dataset.hpp"
#include "rvp/degrade.hpp"
#include "rvp/error.hpp"
#include "rvp/eval.hpp"
#include "rvp/gateway.hpp"
#include "rvp/manifest.hpp"
#include "rvp/png_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct StyleFlags {
    std::string shape = "dot";
    std::string color = "red";
    int radius = 0;  // 0 = image-relative default
    int stroke = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--shape", shape, "Marker shape: dot|circle|square|cross");
        cmd->add_option("--color", color, "Marker color name (red, green, blue, purple, ...)");
        cmd->add_option("--radius", radius, "Marker radius in pixels (0 = image-relative)");
        cmd->add_option("--stroke", stroke, "Ring/arm thickness in pixels");
    }

    rvp::PromptStyle resolve(int image_width, int image_height) const {
        const auto s = rvp::shape_from_name(shape);
        if (!s) throw CLI::ValidationError("--shape", "unknown shape '" + shape + "'");
        const auto c = rvp::color_from_name(color);
        if (!c) throw CLI::ValidationError("--color", "unknown color '" + color + "'");
        rvp::PromptStyle style;
        style.shape = *s;
        style.color = *c;
        style.radius =
            radius > 0 ? radius : rvp::default_marker_radius(image_width, image_height);
        style.stroke = stroke;
        return style;
    }
};

std::optional<rvp::GridSpec> parse_grid(const std::string& vote, double margin) {
    if (vote.empty()) return std::nullopt;
    rvp::GridSpec grid;
    grid.margin_fraction = margin;
    if (vote == "five-corner") {
        grid.layout = rvp::GridLayout::FiveCorner;
        return grid;
    }
    int rows = 0;
    int cols = 0;
    char sep = 0;
    std::istringstream is(vote);
    if (is >> rows >> sep >> cols && sep == 'x' && rows >= 1 && cols >= 1) {
        grid.layout = rvp::GridLayout::UniformGrid;
        grid.rows = rows;
        grid.cols = cols;
        return grid;
    }
    throw CLI::ValidationError("--vote", "expected 'five-corner' or ROWSxCOLS");
}

rvp::BBox parse_box(const std::string& txt) {
    rvp::BBox b;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream is(txt);
    if (!(is >> b.x >> c1 >> b.y >> c2 >> b.w >> c3 >> b.h) || c1 != ',' || c2 != ',' ||
        c3 != ',')
        throw CLI::ValidationError("--box", "expected x,y,w,h");
    return b;
}

rvp::PixelPoint parse_point(const std::string& txt) {
    rvp::PixelPoint p;
    char c = 0;
    std::istringstream is(txt);
    if (!(is >> p.x >> c >> p.y) || c != ',')
        throw CLI::ValidationError("--point", "expected x,y");
    return p;
}

void log_config(const std::string& cmd, const json& resolved) {
    std::cerr << "[rvp] " << cmd << " config: " << resolved.dump() << "\n";
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

std::unique_ptr<rvp::ChatBackend> make_backend(const std::string& mock_path,
                                               const std::string& model_url) {
    if (!mock_path.empty())
        return std::make_unique<rvp::AnswerKeyChatBackend>(
            rvp::AnswerKeyChatBackend::from_file(mock_path));
    const std::string url = !model_url.empty() ? model_url : env_or("MODEL_URL", "");
    if (url.empty())
        throw CLI::ValidationError("--mock/--model-url",
                                   "need either --mock FILE or a model URL "
                                   "(--model-url or MODEL_URL)");
    return std::make_unique<rvp::HttpChatBackend>(url, env_or("API_KEY", ""));
}

std::unique_ptr<rvp::Embedder> make_embedder(const std::string& matcher,
                                             const std::string& embed_url) {
    if (matcher != "embedding") return nullptr;
    const std::string url = !embed_url.empty() ? embed_url : env_or("EMBED_URL", "");
    if (url.empty()) return std::make_unique<rvp::HashedBagEmbedder>();
    return std::make_unique<rvp::HttpEmbedder>(url, env_or("API_KEY", ""));
}

// ---------------------------------------------------------------- render ---

int cmd_render(const std::string& image_path, const std::string& point_txt,
               const std::string& box_txt, const std::string& mask_path,
               const StyleFlags& style_flags, const std::string& vote, double margin,
               std::string out_prefix) {
    const rvp::Raster image = rvp::read_image_png(image_path);
    const rvp::PromptStyle style = style_flags.resolve(image.width(), image.height());

    rvp::RegionAnnotation annotation = rvp::PixelPoint{};
    const int given = (!point_txt.empty()) + (!box_txt.empty()) + (!mask_path.empty());
    if (given != 1)
        throw CLI::ValidationError("--point/--box/--mask",
                                   "exactly one region annotation is required");
    if (!point_txt.empty()) annotation = parse_point(point_txt);
    if (!box_txt.empty()) annotation = parse_box(box_txt);
    if (!mask_path.empty()) annotation = rvp::read_mask_png(mask_path);

    const auto grid = parse_grid(vote, margin);
    const auto points = rvp::disentangle(annotation, image.width(), image.height(), grid);

    if (out_prefix.empty()) {
        fs::path p(image_path);
        out_prefix = (p.parent_path() / p.stem()).string() + ".rendered";
    }
    log_config("render", {{"image", image_path},
                          {"points", points.size()},
                          {"shape", rvp::shape_name(style.shape)},
                          {"radius", style.radius},
                          {"out_prefix", out_prefix}});

    for (std::size_t k = 0; k < points.size(); ++k) {
        const rvp::Raster rendered = rvp::render_marker(image, points[k], style);
        const std::string path = points.size() == 1
                                     ? out_prefix + ".png"
                                     : out_prefix + "." + std::to_string(k) + ".png";
        rvp::write_image_png(path, rendered);
        json sidecar{{"point", {{"x", points[k].x}, {"y", points[k].y}}},
                     {"style",
                      {{"shape", rvp::shape_name(style.shape)},
                       {"color", {style.color.r, style.color.g, style.color.b}},
                       {"radius", style.radius},
                       {"stroke", style.stroke}}}};
        std::ofstream side(path + ".json", std::ios::binary);
        side << sidecar.dump(2) << "\n";
        std::cout << path << "\n";
    }
    return 0;
}

// --------------------------------------------------------------- degrade ---

int cmd_degrade(const std::string& manifest_path, const std::string& mode_txt,
                const std::string& out_dir, rvp::BenchmarkParams params) {
    if (mode_txt == "scribble") {
        params.mode = rvp::BenchmarkMode::ScribbleMask;
    } else if (mode_txt == "box") {
        params.mode = rvp::BenchmarkMode::PartialBox;
    } else {
        throw CLI::ValidationError("--mode", "expected 'scribble' or 'box'");
    }
    log_config("degrade", {{"manifest", manifest_path},
                           {"mode", mode_txt},
                           {"seed", params.seed},
                           {"jobs", params.jobs},
                           {"iterations", params.scribble.iterations},
                           {"kernel_cap", params.scribble.kernel_size_cap},
                           {"sigma", params.scribble.sigma},
                           {"threshold", params.scribble.threshold},
                           {"ratio", params.box.target_area_ratio},
                           {"out", out_dir}});

    const auto manifest = rvp::load_manifest(manifest_path);
    const auto [degraded, skips] = rvp::build_benchmark(manifest, params, out_dir);
    rvp::save_manifest(degraded, fs::path(out_dir) / "manifest.json");
    rvp::save_skip_report(skips, fs::path(out_dir) / "skip_report.json");

    std::size_t n_regions = 0;
    for (const auto& s : degraded.samples) n_regions += s.regions.size();
    std::cout << "degraded manifest: " << degraded.samples.size() << " samples, " << n_regions
              << " regions, " << skips.entries.size() << " skipped\n";
    for (const auto& e : skips.entries)
        std::cout << "  skipped " << e.sample_id << "/" << e.region_id << ": " << e.reason
                  << "\n";
    return 0;
}

// ----------------------------------------------------------------- build ---

int cmd_build(const std::string& manifest_path, const std::string& out_dir,
              const StyleFlags& style_flags, const std::string& question,
              const std::string& answer, const std::string& vote, double margin,
              std::uint64_t seed, int jobs) {
    const auto manifest = rvp::load_manifest(manifest_path);

    rvp::BuildParams params;
    params.style = style_flags.resolve(1024, 1024);
    if (style_flags.radius > 0) params.style.radius = style_flags.radius;
    params.tmpl.question = question;
    params.tmpl.answer = answer;
    params.grid = parse_grid(vote, margin);
    params.seed = seed;
    params.jobs = jobs;

    log_config("build", {{"manifest", manifest_path},
                         {"out", out_dir},
                         {"question", question},
                         {"seed", seed},
                         {"jobs", jobs}});

    const auto [samples, skips] = rvp::build_dataset(manifest, params, out_dir);
    rvp::write_jsonl(samples, fs::path(out_dir) / "dataset.jsonl");
    rvp::save_skip_report(skips, fs::path(out_dir) / "skip_report.json");
    std::cout << "wrote " << samples.size() << " instruction samples, "
              << skips.entries.size() << " skipped\n";
    return 0;
}

// ------------------------------------------------------------------ eval ---

int cmd_eval(const std::string& manifest_path, const std::string& mode_txt,
             const std::string& out_dir, const StyleFlags& style_flags,
             const std::string& question, const std::string& matcher_txt,
             const std::string& vote, const std::string& aggregator_txt, double margin,
             const std::string& position_txt, bool no_gal, const std::string& mock_path,
             const std::string& model_url, const std::string& embed_url, std::uint64_t seed,
             int jobs, double max_skip_rate) {
    rvp::EvalConfig cfg;
    if (mode_txt == "seg") {
        cfg.mode = rvp::EvalMode::SegProxy;
    } else if (mode_txt == "box") {
        cfg.mode = rvp::EvalMode::BoxAccuracy;
    } else {
        throw CLI::ValidationError("--mode", "expected 'seg' or 'box'");
    }
    cfg.style = style_flags.resolve(1024, 1024);
    if (style_flags.radius > 0) cfg.style.radius = style_flags.radius;
    cfg.tmpl.question = question;
    if (matcher_txt == "token") {
        cfg.matcher = rvp::Matcher::TokenOverlap;
    } else if (matcher_txt == "embedding") {
        cfg.matcher = rvp::Matcher::Embedding;
    } else {
        throw CLI::ValidationError("--matcher", "expected 'token' or 'embedding'");
    }
    if (const auto grid = parse_grid(vote, margin)) {
        rvp::VoteConfig vc;
        vc.grid = *grid;
        if (aggregator_txt == "majority") {
            vc.aggregator = rvp::VoteAggregator::Majority;
        } else if (aggregator_txt == "summarize") {
            vc.aggregator = rvp::VoteAggregator::Summarize;
        } else {
            throw CLI::ValidationError("--aggregator", "expected 'majority' or 'summarize'");
        }
        cfg.vote = vc;
    }
    if (position_txt == "center") {
        cfg.position = rvp::PositionStrategy::Center;
    } else if (position_txt == "random") {
        cfg.position = rvp::PositionStrategy::Random;
    } else {
        throw CLI::ValidationError("--position", "expected 'center' or 'random'");
    }
    cfg.gal_enabled = !no_gal;
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.skip_rate_threshold = max_skip_rate;

    log_config("eval", {{"manifest", manifest_path},
                        {"mode", mode_txt},
                        {"matcher", matcher_txt},
                        {"vote", vote},
                        {"position", position_txt},
                        {"gal", cfg.gal_enabled},
                        {"seed", seed},
                        {"jobs", jobs},
                        {"out", out_dir}});

    const auto manifest = rvp::load_manifest(manifest_path);
    const auto backend = make_backend(mock_path, model_url);
    auto embedder = make_embedder(matcher_txt, embed_url);

    const rvp::EvalReport report = rvp::evaluate(manifest, cfg, *backend, embedder.get());

    fs::create_directories(out_dir);
    rvp::write_report_json(report, fs::path(out_dir) / "report.json");
    rvp::write_report_csv(report, fs::path(out_dir) / "report.csv");

    std::cout << "samples: " << report.n_samples << "  skipped: " << report.n_skipped << "\n";
    std::cout << "accuracy: " << report.accuracy << "\n";
    if (report.miou_defined) {
        std::cout << "mIoU: " << report.miou << "\n";
        for (const auto& c : report.per_class)
            std::cout << "  " << c.category << ": IoU " << c.iou << " (" << c.intersection_px
                      << "/" << c.union_px << ")\n";
    }

    const int total = report.n_samples + report.n_skipped;
    const double skip_rate = total == 0 ? 0.0 : static_cast<double>(report.n_skipped) / total;
    if (skip_rate > max_skip_rate) {
        std::cerr << "skip rate " << skip_rate << " exceeds threshold " << max_skip_rate
                  << "\n";
        return kExitRuntime;
    }
    return 0;
}

// ------------------------------------------------------------------ vote ---

int cmd_vote(const std::string& image_path, const std::string& box_txt,
             const std::string& categories_txt, const StyleFlags& style_flags,
             const std::string& question, const std::string& aggregator_txt, double margin,
             const std::string& mock_path, const std::string& model_url,
             const std::string& matcher_txt, const std::string& embed_url) {
    const rvp::Raster image = rvp::read_image_png(image_path);

    rvp::EvalConfig cfg;
    cfg.style = style_flags.resolve(image.width(), image.height());
    cfg.tmpl.question = question;
    cfg.matcher = matcher_txt == "embedding" ? rvp::Matcher::Embedding
                                             : rvp::Matcher::TokenOverlap;
    rvp::VoteConfig vc;
    vc.grid.layout = rvp::GridLayout::FiveCorner;
    vc.grid.margin_fraction = margin;
    vc.aggregator = aggregator_txt == "summarize" ? rvp::VoteAggregator::Summarize
                                                  : rvp::VoteAggregator::Majority;
    cfg.vote = vc;

    std::vector<std::string> categories;
    std::istringstream is(categories_txt);
    std::string item;
    while (std::getline(is, item, ','))
        if (!item.empty()) categories.push_back(item);
    if (categories.empty())
        throw CLI::ValidationError("--categories", "need a comma-separated category list");

    rvp::RegionRecord region;
    region.region_id = "box";
    region.geometry.kind = rvp::RegionGeometry::Kind::Box;
    region.geometry.box = parse_box(box_txt);

    log_config("vote", {{"image", image_path},
                        {"box", box_txt},
                        {"aggregator", aggregator_txt},
                        {"categories", categories.size()}});

    const auto backend = make_backend(mock_path, model_url);
    auto embedder = make_embedder(matcher_txt, embed_url);
    const rvp::VoteSession session =
        rvp::vote_infer(image, "cli", region, cfg, categories, *backend, embedder.get());

    for (std::size_t k = 0; k < session.responses.size(); ++k)
        std::cout << "point (" << session.points[k].x << "," << session.points[k].y
                  << "): " << session.responses[k] << "\n";
    std::cout << "aggregated: " << session.aggregated_text << " (category "
              << categories[static_cast<std::size_t>(session.category_index)] << ")\n";
    return 0;
}

// --------------------------------------------------------------- convert ---

int cmd_convert(const std::string& dataset_name, const std::string& categories_path,
                const std::vector<std::string>& pairs, const std::string& out_dir) {
    std::ifstream in(categories_path, std::ios::binary);
    if (!in) throw rvp::IoError("cannot read categories " + categories_path);
    json j;
    in >> j;
    std::vector<rvp::Category> categories;
    for (const auto& jc : j)
        categories.push_back({jc.at("id").get<int>(), jc.at("name").get<std::string>()});

    std::vector<std::pair<std::string, std::string>> image_label_pairs;
    for (const auto& p : pairs) {
        const auto comma = p.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--pair", "expected IMAGE.png,LABELS.png");
        image_label_pairs.emplace_back(p.substr(0, comma), p.substr(comma + 1));
    }

    log_config("convert", {{"dataset", dataset_name},
                           {"pairs", image_label_pairs.size()},
                           {"out", out_dir}});

    const auto manifest =
        rvp::convert_label_maps(dataset_name, categories, image_label_pairs, out_dir);
    rvp::save_manifest(manifest, fs::path(out_dir) / "manifest.json");
    std::size_t n_regions = 0;
    for (const auto& s : manifest.samples) n_regions += s.regions.size();
    std::cout << "converted " << manifest.samples.size() << " samples into " << n_regions
              << " regions\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Referring-visual-prompt pipeline: marker rendering, benchmark degradation, "
                 "instruction dataset generation, and region-recognition evaluation"};
    app.require_subcommand(1);

    const std::string default_question =
        "What is the category of the object under the {color} {form}?";

    // render
    auto* render = app.add_subcommand("render", "Render a point marker for a region");
    std::string r_image, r_point, r_box, r_mask, r_vote, r_out;
    double r_margin = 0.1;
    StyleFlags r_style;
    render->add_option("--image", r_image, "Input RGB PNG")->required();
    render->add_option("--point", r_point, "Point annotation x,y");
    render->add_option("--box", r_box, "Box annotation x,y,w,h");
    render->add_option("--mask", r_mask, "Mask annotation PNG path");
    render->add_option("--vote", r_vote, "Grid fan-out for boxes: five-corner or ROWSxCOLS");
    render->add_option("--margin", r_margin, "Grid margin fraction");
    render->add_option("--out", r_out, "Output path prefix");
    r_style.attach(render);

    // degrade
    auto* degrade = app.add_subcommand("degrade", "Degrade a benchmark manifest");
    std::string d_manifest, d_mode, d_out;
    rvp::BenchmarkParams d_params;
    degrade->add_option("--manifest", d_manifest, "Input manifest JSON")->required();
    degrade->add_option("--mode", d_mode, "scribble | box")->required();
    degrade->add_option("--out", d_out, "Output directory")->required();
    degrade->add_option("--seed", d_params.seed, "Global seed");
    degrade->add_option("--jobs", d_params.jobs, "Worker threads")
        ->default_val(static_cast<int>(std::thread::hardware_concurrency()));
    degrade->add_option("--iterations", d_params.scribble.iterations, "Dilation iterations T");
    degrade->add_option("--kernel-cap", d_params.scribble.kernel_size_cap,
                        "Kernel size cap s (sizes drawn odd in [1, 2s+1])");
    degrade->add_option("--sigma", d_params.scribble.sigma, "Gaussian blur sigma");
    degrade->add_option("--threshold", d_params.scribble.threshold,
                        "Blur re-binarization threshold");
    degrade->add_option("--ratio", d_params.box.target_area_ratio, "Box target area ratio");

    // build
    auto* build = app.add_subcommand("build", "Build an instruction-tuning dataset");
    std::string b_manifest, b_out, b_question = default_question, b_answer = "{category}",
                b_vote;
    double b_margin = 0.1;
    std::uint64_t b_seed = 0;
    int b_jobs = static_cast<int>(std::thread::hardware_concurrency());
    StyleFlags b_style;
    build->add_option("--manifest", b_manifest, "Input manifest JSON")->required();
    build->add_option("--out", b_out, "Output directory")->required();
    build->add_option("--question", b_question, "Question template ({color}, {form})");
    build->add_option("--answer", b_answer, "Answer template ({category})");
    build->add_option("--vote", b_vote, "Grid fan-out for boxes");
    build->add_option("--margin", b_margin, "Grid margin fraction");
    build->add_option("--seed", b_seed, "Global seed");
    build->add_option("--jobs", b_jobs, "Worker threads");
    b_style.attach(build);

    // eval
    auto* eval = app.add_subcommand("eval", "Run region-recognition evaluation");
    std::string e_manifest, e_mode = "seg", e_out = "eval_out",
                e_question = default_question, e_matcher = "token", e_vote,
                e_aggregator = "majority", e_position = "center", e_mock, e_model_url,
                e_embed_url;
    double e_margin = 0.1, e_max_skip = 1.0;
    bool e_no_gal = false;
    std::uint64_t e_seed = 0;
    int e_jobs = static_cast<int>(std::thread::hardware_concurrency());
    StyleFlags e_style;
    eval->add_option("--manifest", e_manifest, "Benchmark manifest JSON")->required();
    eval->add_option("--mode", e_mode, "seg | box");
    eval->add_option("--out", e_out, "Report output directory");
    eval->add_option("--question", e_question, "Question template");
    eval->add_option("--matcher", e_matcher, "token | embedding");
    eval->add_option("--vote", e_vote, "Vote grid for boxes (five-corner or ROWSxCOLS)");
    eval->add_option("--aggregator", e_aggregator, "majority | summarize");
    eval->add_option("--margin", e_margin, "Grid margin fraction");
    eval->add_option("--position", e_position, "center | random (masks)");
    eval->add_flag("--no-gal", e_no_gal, "Render raw region geometry instead of a point");
    eval->add_option("--mock", e_mock, "Answer-key JSON for offline evaluation");
    eval->add_option("--model-url", e_model_url, "Model endpoint (default: MODEL_URL)");
    eval->add_option("--embed-url", e_embed_url, "Embedder endpoint (default: EMBED_URL)");
    eval->add_option("--seed", e_seed, "Global seed");
    eval->add_option("--jobs", e_jobs, "Worker threads");
    eval->add_option("--max-skip-rate", e_max_skip, "Fail (exit 1) above this skip rate");
    e_style.attach(eval);

    // vote
    auto* vote = app.add_subcommand("vote", "Vote-based inference over one box");
    std::string v_image, v_box, v_categories, v_question = default_question,
                v_aggregator = "majority", v_mock, v_model_url, v_matcher = "token",
                v_embed_url;
    double v_margin = 0.1;
    StyleFlags v_style;
    vote->add_option("--image", v_image, "Input RGB PNG")->required();
    vote->add_option("--box", v_box, "Box annotation x,y,w,h")->required();
    vote->add_option("--categories", v_categories, "Comma-separated category list")
        ->required();
    vote->add_option("--question", v_question, "Question template");
    vote->add_option("--aggregator", v_aggregator, "majority | summarize");
    vote->add_option("--margin", v_margin, "Grid margin fraction");
    vote->add_option("--mock", v_mock, "Answer-key JSON");
    vote->add_option("--model-url", v_model_url, "Model endpoint");
    vote->add_option("--matcher", v_matcher, "token | embedding");
    vote->add_option("--embed-url", v_embed_url, "Embedder endpoint");
    v_style.attach(vote);

    // convert
    auto* convert =
        app.add_subcommand("convert", "Convert label-map PNGs into an annotation manifest");
    std::string c_name, c_categories, c_out;
    std::vector<std::string> c_pairs;
    convert->add_option("--name", c_name, "Dataset name")->required();
    convert->add_option("--categories", c_categories, "Category table JSON [{id,name},...]")
        ->required();
    convert->add_option("--pair", c_pairs, "IMAGE.png,LABELS.png (repeatable)")->required();
    convert->add_option("--out", c_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*render)
            return cmd_render(r_image, r_point, r_box, r_mask, r_style, r_vote, r_margin,
                              r_out);
        if (*degrade) return cmd_degrade(d_manifest, d_mode, d_out, d_params);
        if (*build)
            return cmd_build(b_manifest, b_out, b_style, b_question, b_answer, b_vote,
                             b_margin, b_seed, b_jobs);
        if (*eval)
            return cmd_eval(e_manifest, e_mode, e_out, e_style, e_question, e_matcher, e_vote,
                            e_aggregator, e_margin, e_position, e_no_gal, e_mock, e_model_url,
                            e_embed_url, e_seed, e_jobs, e_max_skip);
        if (*vote)
            return cmd_vote(v_image, v_box, v_categories, v_style, v_question, v_aggregator,
                            v_margin, v_mock, v_model_url, v_matcher, v_embed_url);
        if (*convert) return cmd_convert(c_name, c_categories, c_pairs, c_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const rvp::OutOfBounds& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const rvp::InvalidBox& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const rvp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
