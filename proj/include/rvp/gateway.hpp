#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace rvp {

struct ChatRequest {
    std::vector<std::uint8_t> image_png;
    std::string prompt;
    std::string request_id;
};

struct ChatResponse {
    std::string request_id;
    std::string text;
};

using EmbeddingVector = std::vector<double>;

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse chat(const ChatRequest& req) = 0;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
};

struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{100};
    double backoff_multiplier = 2.0;
    std::chrono::milliseconds timeout{30000};
};

// HTTP backend speaking POST /v1/describe {request_id, image_b64, prompt}
// -> {request_id, text}. Bounded concurrent in-flight requests.
class HttpChatBackend : public ChatBackend {
public:
    HttpChatBackend(std::string base_url, std::string api_key = {}, RetryPolicy policy = {},
                    int max_in_flight = 8);
    ~HttpChatBackend() override;
    ChatResponse chat(const ChatRequest& req) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// POST /v1/embed {texts} -> {vectors}.
class HttpEmbedder : public Embedder {
public:
    HttpEmbedder(std::string base_url, std::string api_key = {}, RetryPolicy policy = {});
    ~HttpEmbedder() override;
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Deterministic test double keyed by request_id. With error_rate = 1.0 every
// call fails; fractional rates fail a stable hash-selected subset.
class AnswerKeyChatBackend : public ChatBackend {
public:
    explicit AnswerKeyChatBackend(std::map<std::string, std::string> answers,
                                  double error_rate = 0.0);
    static AnswerKeyChatBackend from_file(const std::string& path, double error_rate = 0.0);
    ChatResponse chat(const ChatRequest& req) override;

private:
    std::map<std::string, std::string> answers_;
    double error_rate_;
};

// Arbitrary in-process behavior for tests.
class CallbackChatBackend : public ChatBackend {
public:
    explicit CallbackChatBackend(std::function<ChatResponse(const ChatRequest&)> fn)
        : fn_(std::move(fn)) {}
    ChatResponse chat(const ChatRequest& req) override { return fn_(req); }

private:
    std::function<ChatResponse(const ChatRequest&)> fn_;
};

// Offline embedding provider: tokens hashed into a fixed-size bag-of-words
// vector, L2-normalized. Deterministic and dependency-free.
class HashedBagEmbedder : public Embedder {
public:
    explicit HashedBagEmbedder(int dimension = 128) : dimension_(dimension) {}
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;

private:
    int dimension_;
};

enum class Matcher { Embedding, TokenOverlap };

// Lowercase alphanumeric token runs.
std::vector<std::string> tokenize(const std::string& text);
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// Map a free-form model response onto the closest category name. Ties break
// toward the smallest category index. Embedding mode requires an embedder.
int match_category(const std::string& response, const std::vector<std::string>& categories,
                   Matcher matcher, Embedder* embedder = nullptr);

std::string base64_encode(const std::vector<std::uint8_t>& data);

}  // namespace rvp
