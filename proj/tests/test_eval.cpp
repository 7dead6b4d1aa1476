#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "rvp/eval.hpp"
#include "rvp/error.hpp"
#include "fixture.hpp"

using namespace rvp;
using namespace rvp::test;
using nlohmann::json;

TEST_CASE("compute_miou") {
    CHECK(compute_miou({{1, 1}, {1, 2}}) == doctest::Approx(0.75));
    // Classes with an empty union are excluded, not counted as zero.
    CHECK(compute_miou({{1, 1}, {0, 0}, {1, 2}}) == doctest::Approx(0.75));
    CHECK(compute_miou({}) == doctest::Approx(0.0));
    CHECK(compute_miou({{0, 0}}) == doctest::Approx(0.0));
    CHECK(compute_miou({{0, 4}, {2, 4}}) == doctest::Approx(0.25));
}

TEST_CASE("summarize prompt wording") {
    CHECK(summarize_prompt({"a cat", "a dog"}, "What is it?") ==
          "Here is a list of responses: [a cat, a dog]. The instruction from the user is "
          "What is it? Please summarize these responses and answer the instruction from the "
          "user.");
}

TEST_CASE("evaluate: perfect oracle") {
    TempDir dir;
    const auto manifest = make_fixture_manifest(dir.path, 4, true, true);
    AnswerKeyChatBackend backend(perfect_answer_key(manifest));

    EvalConfig cfg;
    cfg.mode = EvalMode::SegProxy;
    const EvalReport report = evaluate(manifest, cfg, backend);

    CHECK(report.n_samples == 8);  // 4 masks + 4 boxes
    CHECK(report.n_skipped == 0);
    CHECK(report.accuracy == doctest::Approx(1.0));
    CHECK(report.miou_defined);
    CHECK(report.miou == doctest::Approx(1.0));
    for (const auto& c : report.per_class) CHECK(c.iou == doctest::Approx(1.0));
}

TEST_CASE("evaluate: constant prediction gives the hand-computed confusion") {
    TempDir dir;
    // Two mask-only samples with equal-area disks, alternating classes.
    const auto manifest = make_fixture_manifest(dir.path, 2, true, false);
    CallbackChatBackend backend(
        [](const ChatRequest& req) { return ChatResponse{req.request_id, "cat"}; });

    EvalConfig cfg;
    cfg.mode = EvalMode::SegProxy;
    const EvalReport report = evaluate(manifest, cfg, backend);

    // Gold: one "cat" disk, one "dog" disk of area A each; predicted always
    // "cat". cat: I=A, U=2A -> 0.5; dog: I=0, U=A -> 0. mIoU = 0.25.
    CHECK(report.n_samples == 2);
    CHECK(report.accuracy == doctest::Approx(0.5));
    REQUIRE(report.per_class.size() == 2);
    CHECK(report.per_class[0].category == "cat");
    CHECK(report.per_class[0].iou == doctest::Approx(0.5));
    CHECK(report.per_class[1].category == "dog");
    CHECK(report.per_class[1].iou == doctest::Approx(0.0));
    CHECK(report.miou == doctest::Approx(0.25));
}

TEST_CASE("evaluate: empty manifest") {
    AnnotationManifest manifest;
    manifest.categories = {{0, "cat"}};
    AnswerKeyChatBackend backend({});

    EvalConfig cfg;
    const EvalReport report = evaluate(manifest, cfg, backend);
    CHECK(report.n_samples == 0);
    CHECK(report.accuracy == doctest::Approx(0.0));
    CHECK_FALSE(report.miou_defined);
    CHECK(report.miou == doctest::Approx(0.0));
}

TEST_CASE("evaluate: box accuracy mode") {
    TempDir dir;
    const auto manifest = make_fixture_manifest(dir.path, 3, false, true);
    AnswerKeyChatBackend backend(perfect_answer_key(manifest));

    EvalConfig cfg;
    cfg.mode = EvalMode::BoxAccuracy;
    const EvalReport report = evaluate(manifest, cfg, backend);
    CHECK(report.n_samples == 3);
    CHECK(report.accuracy == doctest::Approx(1.0));
    CHECK(report.per_class.empty());
    CHECK_FALSE(report.miou_defined);
}

TEST_CASE("evaluate: missing image lands in the skip report") {
    TempDir dir;
    auto manifest = make_fixture_manifest(dir.path, 2, true, false);
    manifest.samples[0].image_path = "images/nonexistent.png";
    AnswerKeyChatBackend backend(perfect_answer_key(manifest));

    EvalConfig cfg;
    const EvalReport report = evaluate(manifest, cfg, backend);
    CHECK(report.n_samples == 1);
    CHECK(report.n_skipped == 1);
    CHECK(report.skips.entries[0].sample_id == "s0");
    CHECK(report.accuracy == doctest::Approx(1.0));
}

TEST_CASE("evaluate: ablation without markers still runs end to end") {
    TempDir dir;
    const auto manifest = make_fixture_manifest(dir.path, 2, true, true);
    AnswerKeyChatBackend backend(perfect_answer_key(manifest));

    EvalConfig cfg;
    cfg.gal_enabled = false;
    const EvalReport report = evaluate(manifest, cfg, backend);
    CHECK(report.n_samples == 4);
    CHECK(report.accuracy == doctest::Approx(1.0));
}

TEST_CASE("evaluate: random mask position is seeded and deterministic") {
    TempDir dir;
    const auto manifest = make_fixture_manifest(dir.path, 3, true, false);
    AnswerKeyChatBackend backend(perfect_answer_key(manifest));

    EvalConfig cfg;
    cfg.position = PositionStrategy::Random;
    cfg.seed = 7;
    const EvalReport a = evaluate(manifest, cfg, backend);
    const EvalReport b = evaluate(manifest, cfg, backend);
    CHECK(a.n_samples == b.n_samples);
    CHECK(a.accuracy == doctest::Approx(b.accuracy));
    CHECK(a.accuracy == doctest::Approx(1.0));
}

TEST_CASE("evaluate: jobs do not change the report") {
    TempDir dir;
    const auto manifest = make_fixture_manifest(dir.path, 6, true, true);
    AnswerKeyChatBackend backend(perfect_answer_key(manifest));

    EvalConfig cfg1;
    cfg1.jobs = 1;
    EvalConfig cfg8 = cfg1;
    cfg8.jobs = 8;
    const EvalReport r1 = evaluate(manifest, cfg1, backend);
    const EvalReport r8 = evaluate(manifest, cfg8, backend);

    REQUIRE(r1.per_sample.size() == r8.per_sample.size());
    for (std::size_t i = 0; i < r1.per_sample.size(); ++i) {
        CHECK(r1.per_sample[i].sample_id == r8.per_sample[i].sample_id);
        CHECK(r1.per_sample[i].region_id == r8.per_sample[i].region_id);
        CHECK(r1.per_sample[i].predicted == r8.per_sample[i].predicted);
    }
    CHECK(r1.miou == doctest::Approx(r8.miou));
    CHECK(r1.accuracy == doctest::Approx(r8.accuracy));
}

namespace {

// Box region plus a config/backend pair suitable for vote_infer tests. The
// backend answers each grid point from a fixed list, keyed by the #pK suffix.
RegionRecord vote_region() {
    RegionRecord r;
    r.region_id = "b0";
    r.category_id = 0;
    r.geometry.kind = RegionGeometry::Kind::Box;
    r.geometry.box = {10, 10, 80, 80};
    return r;
}

EvalConfig vote_config(VoteAggregator agg) {
    EvalConfig cfg;
    cfg.vote = VoteConfig{GridSpec{GridLayout::FiveCorner, 1, 1, 0.1}, agg};
    return cfg;
}

int point_index(const std::string& request_id) {
    const auto pos = request_id.rfind("#p");
    REQUIRE(pos != std::string::npos);
    return std::stoi(request_id.substr(pos + 2));
}

}  // namespace

TEST_CASE("vote_infer: majority aggregation") {
    Raster image(120, 120);
    const std::vector<std::string> cats{"cat", "dog", "bird"};

    SUBCASE("clear majority") {
        const std::vector<std::string> answers{"cat", "cat", "dog", "cat", "bird"};
        CallbackChatBackend backend([&](const ChatRequest& req) {
            return ChatResponse{req.request_id,
                                answers[static_cast<std::size_t>(point_index(req.request_id))]};
        });
        const auto cfg = vote_config(VoteAggregator::Majority);
        const VoteSession s =
            vote_infer(image, "s0", vote_region(), cfg, cats, backend);
        CHECK(s.responses.size() == 5);
        CHECK(s.category_index == 0);
        CHECK(s.aggregated_text == "cat");
    }
    SUBCASE("ties break toward the smaller category index") {
        const std::vector<std::string> answers{"dog", "cat", "dog", "cat", "bird"};
        CallbackChatBackend backend([&](const ChatRequest& req) {
            return ChatResponse{req.request_id,
                                answers[static_cast<std::size_t>(point_index(req.request_id))]};
        });
        const auto cfg = vote_config(VoteAggregator::Majority);
        CHECK(vote_infer(image, "s0", vote_region(), cfg, cats, backend).category_index == 0);
    }
    SUBCASE("failed points are dropped, not fatal") {
        CallbackChatBackend backend([&](const ChatRequest& req) -> ChatResponse {
            if (point_index(req.request_id) == 0) throw BackendError("boom");
            return {req.request_id, "dog"};
        });
        const auto cfg = vote_config(VoteAggregator::Majority);
        const VoteSession s =
            vote_infer(image, "s0", vote_region(), cfg, cats, backend);
        CHECK(s.responses.size() == 4);
        CHECK(s.category_index == 1);
    }
    SUBCASE("all points failing is fatal") {
        CallbackChatBackend backend(
            [](const ChatRequest&) -> ChatResponse { throw BackendError("boom"); });
        const auto cfg = vote_config(VoteAggregator::Majority);
        CHECK_THROWS_AS(vote_infer(image, "s0", vote_region(), cfg, cats, backend),
                        BackendError);
    }
}

TEST_CASE("vote_infer: summarize aggregation sends the exact summary prompt") {
    Raster image(120, 120);
    const std::vector<std::string> cats{"cat", "dog"};
    const auto cfg = vote_config(VoteAggregator::Summarize);
    const std::string instruction = resolve_question(cfg.tmpl, cfg.style);

    std::string seen_summary_prompt;
    CallbackChatBackend backend([&](const ChatRequest& req) -> ChatResponse {
        if (req.request_id.ends_with("#summarize")) {
            seen_summary_prompt = req.prompt;
            return {req.request_id, "they all said dog"};
        }
        return {req.request_id, "dog"};
    });

    const VoteSession s = vote_infer(image, "s0", vote_region(), cfg, cats, backend);
    CHECK(s.aggregated_text == "they all said dog");
    CHECK(s.category_index == 1);
    CHECK(seen_summary_prompt ==
          "Here is a list of responses: [dog, dog, dog, dog, dog]. The instruction from the "
          "user is " +
              instruction +
              " Please summarize these responses and answer the instruction from the user.");
}

TEST_CASE("vote mode drives box regions inside evaluate") {
    TempDir dir;
    const auto manifest = make_fixture_manifest(dir.path, 2, false, true);
    AnswerKeyChatBackend backend(perfect_answer_key(manifest));

    EvalConfig cfg = vote_config(VoteAggregator::Majority);
    cfg.mode = EvalMode::BoxAccuracy;
    const EvalReport report = evaluate(manifest, cfg, backend);
    CHECK(report.n_samples == 2);
    CHECK(report.accuracy == doctest::Approx(1.0));
}

TEST_CASE("report writers") {
    TempDir dir;
    EvalReport report;
    report.per_class = {{0, "cat", 10, 20, 0.5}};
    report.miou = 0.5;
    report.miou_defined = true;
    report.accuracy = 0.75;
    report.n_samples = 4;
    report.per_sample = {{"s0", "m0", 0, 0, true}};
    report.skips.entries = {{"s1", "m1", "missing image"}};
    report.n_skipped = 1;

    const auto json_path = dir.path / "report.json";
    write_report_json(report, json_path);
    std::ifstream in(json_path);
    const json j = json::parse(in);
    CHECK(j.at("miou").get<double>() == doctest::Approx(0.5));
    CHECK(j.at("accuracy").get<double>() == doctest::Approx(0.75));
    CHECK(j.at("n_samples").get<int>() == 4);
    CHECK(j.at("n_skipped").get<int>() == 1);
    CHECK(j.at("per_class").size() == 1);
    CHECK(j.at("per_class")[0].at("category") == "cat");
    CHECK(j.at("per_sample")[0].at("correct").get<bool>());
    CHECK(j.at("skips")[0].at("reason") == "missing image");

    const auto csv_path = dir.path / "report.csv";
    write_report_csv(report, csv_path);
    std::ifstream csv(csv_path);
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "category,intersection_px,union_px,iou");
    REQUIRE(std::getline(csv, line));
    CHECK(line == "cat,10,20,0.5");
    REQUIRE(std::getline(csv, line));
    CHECK(line.rfind("summary,", 0) == 0);
}
