#include <doctest.h>

#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rvp/error.hpp"
#include "rvp/gateway.hpp"
#include "fixture.hpp"

using namespace rvp;
using namespace rvp::test;
using nlohmann::json;

TEST_CASE("answer-key mock") {
    AnswerKeyChatBackend mock({{"id1", "cat"}, {"id2", "dog"}});
    CHECK(mock.chat({{}, "prompt", "id1"}).text == "cat");
    CHECK(mock.chat({{}, "prompt", "id1"}).request_id == "id1");
    CHECK_THROWS_AS(mock.chat({{}, "prompt", "missing"}), BackendError);

    AnswerKeyChatBackend failing({{"id1", "cat"}}, 1.0);
    CHECK_THROWS_AS(failing.chat({{}, "prompt", "id1"}), BackendError);
}

TEST_CASE("hashed bag embedder") {
    HashedBagEmbedder embedder;
    SUBCASE("identical texts embed identically") {
        const auto vs = embedder.embed({"car", "car"});
        CHECK(vs[0] == vs[1]);
    }
    SUBCASE("empty list is an error") {
        CHECK_THROWS_AS(embedder.embed({}), BackendError);
    }
    SUBCASE("shared tokens raise similarity") {
        const auto vs = embedder.embed({"red car", "car", "person"});
        CHECK(cosine_similarity(vs[0], vs[1]) > cosine_similarity(vs[0], vs[2]));
    }
}

TEST_CASE("tokenize") {
    CHECK(tokenize("A red-Car!") == std::vector<std::string>{"a", "red", "car"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("  42 cats ") == std::vector<std::string>{"42", "cats"});
}

TEST_CASE("match_category: token overlap") {
    SUBCASE("substring token run wins") {
        CHECK(match_category("a red car", {"person", "car"}, Matcher::TokenOverlap) == 1);
    }
    SUBCASE("exact category name matches under both matchers") {
        HashedBagEmbedder embedder;
        const std::vector<std::string> cats{"person", "car", "bicycle"};
        CHECK(match_category("bicycle", cats, Matcher::TokenOverlap) == 2);
        CHECK(match_category("bicycle", cats, Matcher::Embedding, &embedder) == 2);
    }
    SUBCASE("Jaccard tie breaks to the smaller index") {
        // "traffic signal" vs both categories: intersection {traffic}, union
        // of 3 tokens each -> 1/3 tie -> index 0.
        CHECK(match_category("traffic signal", {"traffic light", "traffic sign"},
                             Matcher::TokenOverlap) == 0);
    }
    SUBCASE("longer token-run match beats a shorter one") {
        CHECK(match_category("a red car parked", {"car", "red car"}, Matcher::TokenOverlap) ==
              1);
    }
    SUBCASE("total even with no overlap") {
        CHECK(match_category("zebra", {"person", "car"}, Matcher::TokenOverlap) == 0);
    }
    SUBCASE("deterministic") {
        for (int i = 0; i < 5; ++i)
            CHECK(match_category("some ambiguous text", {"a b", "b c", "c d"},
                                 Matcher::TokenOverlap) ==
                  match_category("some ambiguous text", {"a b", "b c", "c d"},
                                 Matcher::TokenOverlap));
    }
}

TEST_CASE("match_category: embedding mode agrees with token overlap on clean responses") {
    HashedBagEmbedder embedder;
    const std::vector<std::string> voc{"aeroplane", "bicycle", "bird",  "boat",   "bottle",
                                       "bus",       "car",     "cat",   "chair",  "cow",
                                       "dog",       "horse",   "person", "sheep", "train"};
    int agree = 0;
    int total = 0;
    const std::vector<std::string> patterns{"a photo of a {}", "{}", "the {} in the image",
                                            "it looks like a {}", "probably a {}"};
    for (const auto& cat : voc) {
        for (const auto& pattern : patterns) {
            std::string response = pattern;
            const auto pos = response.find("{}");
            response.replace(pos, 2, cat);
            const int t = match_category(response, voc, Matcher::TokenOverlap);
            const int e = match_category(response, voc, Matcher::Embedding, &embedder);
            ++total;
            if (t == e) ++agree;
        }
    }
    CHECK(total == 75);
    CHECK(static_cast<double>(agree) / total >= 0.95);
}

TEST_CASE("HTTP backends against an in-process server") {
    httplib::Server server;
    server.Post("/v1/describe", [](const httplib::Request& req, httplib::Response& res) {
        const auto body = json::parse(req.body);
        res.set_content(json{{"request_id", body.at("request_id")},
                             {"text", "echo:" + body.at("prompt").get<std::string>()}}
                            .dump(),
                        "application/json");
    });
    server.Post("/v1/embed", [](const httplib::Request& req, httplib::Response& res) {
        const auto body = json::parse(req.body);
        json vectors = json::array();
        for (const auto& t : body.at("texts"))
            vectors.push_back({static_cast<double>(t.get<std::string>().size()), 1.0});
        res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
    });
    server.Post("/v1/bad", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("not json", "application/json");
    });

    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    const std::string url = "http://127.0.0.1:" + std::to_string(port);

    SUBCASE("chat round-trip") {
        HttpChatBackend backend(url);
        const auto reply = backend.chat({{1, 2, 3}, "hello", "r1"});
        CHECK(reply.request_id == "r1");
        CHECK(reply.text == "echo:hello");
    }
    SUBCASE("embed round-trip preserves order") {
        HttpEmbedder embedder(url);
        const auto vs = embedder.embed({"ab", "xyz"});
        REQUIRE(vs.size() == 2);
        CHECK(vs[0] == EmbeddingVector{2.0, 1.0});
        CHECK(vs[1] == EmbeddingVector{3.0, 1.0});
    }
    SUBCASE("unknown route fails with BackendError, no hang") {
        RetryPolicy policy;
        policy.max_retries = 1;
        policy.initial_backoff = std::chrono::milliseconds(1);
        HttpChatBackend backend(url + "/missing", "", policy);
        CHECK_THROWS_AS(backend.chat({{}, "p", "r"}), BackendError);
    }

    server.stop();
    server_thread.join();
}

TEST_CASE("malformed backend JSON raises DecodeError") {
    httplib::Server server;
    server.Post("/v1/describe", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{{{", "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    RetryPolicy policy;
    policy.max_retries = 0;
    HttpChatBackend backend("http://127.0.0.1:" + std::to_string(port), "", policy);
    CHECK_THROWS_AS(backend.chat({{}, "p", "r"}), DecodeError);

    server.stop();
    server_thread.join();
}

TEST_CASE("retries recover from transient 5xx") {
    std::atomic<int> calls{0};
    httplib::Server server;
    server.Post("/v1/describe", [&](const httplib::Request& req, httplib::Response& res) {
        if (calls.fetch_add(1) == 0) {
            res.status = 503;
            return;
        }
        const auto body = json::parse(req.body);
        res.set_content(
            json{{"request_id", body.at("request_id")}, {"text", "ok"}}.dump(),
            "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    RetryPolicy policy;
    policy.max_retries = 2;
    policy.initial_backoff = std::chrono::milliseconds(1);
    HttpChatBackend backend("http://127.0.0.1:" + std::to_string(port), "", policy);
    CHECK(backend.chat({{}, "p", "r"}).text == "ok");
    CHECK(calls.load() == 2);

    server.stop();
    server_thread.join();
}

TEST_CASE("base64 encoding") {
    CHECK(base64_encode({}) == "");
    CHECK(base64_encode({'M'}) == "TQ==");
    CHECK(base64_encode({'M', 'a'}) == "TWE=");
    CHECK(base64_encode({'M', 'a', 'n'}) == "TWFu");
}
