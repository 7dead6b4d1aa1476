#include "rvp/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <semaphore>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rvp/error.hpp"
#include "rvp/rng.hpp"

namespace rvp {

using nlohmann::json;

std::string base64_encode(const std::vector<std::uint8_t>& data) {
    static constexpr char kAlphabet[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        std::uint32_t chunk = static_cast<std::uint32_t>(data[i]) << 16;
        if (i + 1 < data.size()) chunk |= static_cast<std::uint32_t>(data[i + 1]) << 8;
        if (i + 2 < data.size()) chunk |= data[i + 2];
        out.push_back(kAlphabet[(chunk >> 18) & 0x3f]);
        out.push_back(kAlphabet[(chunk >> 12) & 0x3f]);
        out.push_back(i + 1 < data.size() ? kAlphabet[(chunk >> 6) & 0x3f] : '=');
        out.push_back(i + 2 < data.size() ? kAlphabet[chunk & 0x3f] : '=');
    }
    return out;
}

namespace {

// POST with retries and exponential backoff; returns the parsed JSON body.
json post_with_retries(httplib::Client& client, const std::string& path, const json& body,
                       const RetryPolicy& policy) {
    auto backoff = policy.initial_backoff;
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(static_cast<long long>(
                static_cast<double>(backoff.count()) * policy.backoff_multiplier));
        }
        auto res = client.Post(path, body.dump(), "application/json");
        if (!res) {
            if (res.error() == httplib::Error::ConnectionTimeout ||
                res.error() == httplib::Error::Read || res.error() == httplib::Error::Write) {
                last_error = "timeout talking to backend (" + httplib::to_string(res.error()) + ")";
                continue;
            }
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "backend returned status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw BackendError("backend returned status " + std::to_string(res->status),
                               res->status);
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            throw DecodeError(std::string("malformed backend response: ") + e.what());
        }
    }
    if (last_error.find("timeout") != std::string::npos) throw BackendTimeout(last_error);
    throw BackendError(last_error);
}

std::unique_ptr<httplib::Client> make_client(const std::string& base_url,
                                             const std::string& api_key,
                                             const RetryPolicy& policy) {
    auto client = std::make_unique<httplib::Client>(base_url);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(policy.timeout);
    client->set_connection_timeout(secs.count() > 0 ? secs.count() : 1, 0);
    client->set_read_timeout(secs.count() > 0 ? secs.count() : 1, 0);
    client->set_write_timeout(secs.count() > 0 ? secs.count() : 1, 0);
    if (!api_key.empty()) client->set_default_headers({{"Authorization", "Bearer " + api_key}});
    return client;
}

}  // namespace

struct HttpChatBackend::Impl {
    std::string base_url;
    std::string api_key;
    RetryPolicy policy;
    std::counting_semaphore<> limiter;

    Impl(std::string url, std::string key, RetryPolicy p, int max_in_flight)
        : base_url(std::move(url)), api_key(std::move(key)), policy(p),
          limiter(std::max(1, max_in_flight)) {}
};

HttpChatBackend::HttpChatBackend(std::string base_url, std::string api_key, RetryPolicy policy,
                                 int max_in_flight)
    : impl_(std::make_unique<Impl>(std::move(base_url), std::move(api_key), policy,
                                   max_in_flight)) {}

HttpChatBackend::~HttpChatBackend() = default;

ChatResponse HttpChatBackend::chat(const ChatRequest& req) {
    impl_->limiter.acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{impl_->limiter};

    // One client per call: httplib clients are not safe for concurrent reuse.
    auto client = make_client(impl_->base_url, impl_->api_key, impl_->policy);
    const json body{{"request_id", req.request_id},
                    {"image_b64", base64_encode(req.image_png)},
                    {"prompt", req.prompt}};
    const json reply = post_with_retries(*client, "/v1/describe", body, impl_->policy);
    try {
        return {reply.at("request_id").get<std::string>(), reply.at("text").get<std::string>()};
    } catch (const json::exception& e) {
        throw DecodeError(std::string("chat response missing fields: ") + e.what());
    }
}

struct HttpEmbedder::Impl {
    std::string base_url;
    std::string api_key;
    RetryPolicy policy;
};

HttpEmbedder::HttpEmbedder(std::string base_url, std::string api_key, RetryPolicy policy)
    : impl_(std::make_unique<Impl>(Impl{std::move(base_url), std::move(api_key), policy})) {}

HttpEmbedder::~HttpEmbedder() = default;

std::vector<EmbeddingVector> HttpEmbedder::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw BackendError("embed: empty text list");
    auto client = make_client(impl_->base_url, impl_->api_key, impl_->policy);
    const json reply =
        post_with_retries(*client, "/v1/embed", json{{"texts", texts}}, impl_->policy);
    try {
        std::vector<EmbeddingVector> out;
        for (const auto& v : reply.at("vectors")) out.push_back(v.get<EmbeddingVector>());
        if (out.size() != texts.size())
            throw DecodeError("embed: vector count does not match text count");
        return out;
    } catch (const json::exception& e) {
        throw DecodeError(std::string("embed response missing fields: ") + e.what());
    }
}

AnswerKeyChatBackend::AnswerKeyChatBackend(std::map<std::string, std::string> answers,
                                           double error_rate)
    : answers_(std::move(answers)), error_rate_(error_rate) {}

AnswerKeyChatBackend AnswerKeyChatBackend::from_file(const std::string& path, double error_rate) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read answer key " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DecodeError(std::string("answer key parse error: ") + e.what());
    }
    std::map<std::string, std::string> answers;
    for (const auto& [key, value] : j.items()) answers[key] = value.get<std::string>();
    return AnswerKeyChatBackend(std::move(answers), error_rate);
}

ChatResponse AnswerKeyChatBackend::chat(const ChatRequest& req) {
    if (error_rate_ > 0.0) {
        const double u = static_cast<double>(hash_seed(0, req.request_id) >> 11) * 0x1.0p-53;
        if (u < error_rate_) throw BackendError("mock failure for " + req.request_id, 500);
    }
    const auto it = answers_.find(req.request_id);
    if (it == answers_.end())
        throw BackendError("no answer registered for request " + req.request_id, 404);
    return {req.request_id, it->second};
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<EmbeddingVector> HashedBagEmbedder::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw BackendError("embed: empty text list");
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        EmbeddingVector v(static_cast<std::size_t>(dimension_), 0.0);
        for (const auto& token : tokenize(text))
            v[hash_seed(0, token) % static_cast<std::uint64_t>(dimension_)] += 1.0;
        const double norm = std::sqrt(
            std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        if (norm > 0.0)
            for (auto& x : v) x /= norm;
        out.push_back(std::move(v));
    }
    return out;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.size() != b.size()) throw Error("cosine: dimension mismatch");
    const double dot = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    const double na = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
    const double nb = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (na * nb);
}

namespace {

// Category tokens appearing as a contiguous token run in the response.
bool token_subsequence(const std::vector<std::string>& haystack,
                       const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i)
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<long>(i)))
            return true;
    return false;
}

int match_token_overlap(const std::string& response, const std::vector<std::string>& categories) {
    const auto resp_tokens = tokenize(response);

    // Exact token-run match short-circuits; the longest match wins so that
    // "red car" beats "car" when both are listed.
    int best_sub = -1;
    std::size_t best_sub_len = 0;
    std::vector<std::vector<std::string>> cat_tokens(categories.size());
    for (std::size_t i = 0; i < categories.size(); ++i) {
        cat_tokens[i] = tokenize(categories[i]);
        if (token_subsequence(resp_tokens, cat_tokens[i]) &&
            cat_tokens[i].size() > best_sub_len) {
            best_sub = static_cast<int>(i);
            best_sub_len = cat_tokens[i].size();
        }
    }
    if (best_sub >= 0) return best_sub;

    const std::set<std::string> resp_set(resp_tokens.begin(), resp_tokens.end());
    int best = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < categories.size(); ++i) {
        const std::set<std::string> cat_set(cat_tokens[i].begin(), cat_tokens[i].end());
        std::size_t inter = 0;
        for (const auto& t : cat_set) inter += resp_set.count(t);
        const std::size_t uni = resp_set.size() + cat_set.size() - inter;
        const double score = uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

int match_category(const std::string& response, const std::vector<std::string>& categories,
                   Matcher matcher, Embedder* embedder) {
    if (categories.empty()) throw Error("match_category: empty category list");
    if (matcher == Matcher::TokenOverlap) return match_token_overlap(response, categories);

    if (!embedder) throw Error("match_category: Embedding matcher needs an embedder");
    std::vector<std::string> texts;
    texts.reserve(categories.size() + 1);
    texts.push_back(response);
    texts.insert(texts.end(), categories.begin(), categories.end());
    const auto vectors = embedder->embed(texts);

    int best = 0;
    double best_score = -2.0;
    for (std::size_t i = 0; i < categories.size(); ++i) {
        const double score = cosine_similarity(vectors[0], vectors[i + 1]);
        if (score > best_score) {
            best_score = score;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace rvp
