#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sftta/error.hpp"

namespace sftta {

struct ChatMessage {
    std::string role;  // system | user | assistant
    std::string content;
    bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
    std::string model_id;
    std::vector<ChatMessage> messages;
    double temperature = 0.7;
    std::optional<long> seed;
    std::optional<int> max_tokens;

    void validate() const;  // non-empty messages, first role system|user
};

struct TokenUsage {
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
};

struct ChatResponse {
    std::string content;
    std::string backend_id;
    TokenUsage usage;
    bool cached = false;
};

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_id;
};

/// Stable content hash over model_id, messages, temperature and seed.
/// Identical requests map to identical keys across process restarts.
std::string cache_key(const ChatRequest& request);

std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

class Backend {
public:
    virtual ~Backend() = default;
    virtual ChatResponse complete_chat(const ChatRequest& request) = 0;
    virtual EmbeddingVector embed_text(const std::string& text, const std::string& model_id) = 0;
    virtual std::string backend_id() const = 0;
};

/// Deterministic offline backend. Scripted responses (a queue and
/// substring-triggered rules) take precedence; with no script match it
/// synthesizes structurally valid pipeline outputs from the request
/// text, so a full run works without any network.
class MockBackend : public Backend {
public:
    ChatResponse complete_chat(const ChatRequest& request) override;
    EmbeddingVector embed_text(const std::string& text, const std::string& model_id) override;
    std::string backend_id() const override { return "mock"; }

    /// Next call answers with `content` regardless of request.
    void push_response(std::string content);
    /// Requests whose user content contains `pattern` answer `content`.
    void add_rule(std::string pattern, std::string content);
    /// Disable rule-based synthesis (unmatched requests then error).
    void set_synthesis(bool enabled) { synthesize_ = enabled; }

    static constexpr std::size_t kEmbeddingDim = 256;

private:
    std::deque<std::string> queue_;
    std::vector<std::pair<std::string, std::string>> rules_;
    bool synthesize_ = true;
    std::mutex mutex_;
};

struct RetryPolicy {
    int max_attempts = 3;
    int base_delay_ms = 1000;  // doubled per attempt: 1s/2s/4s
};

/// OpenAI-compatible REST backend: POST /v1/chat/completions and
/// POST /v1/embeddings. Retries transport errors and HTTP 429/5xx.
class HttpBackend : public Backend {
public:
    HttpBackend(std::string base_url, std::string api_key, RetryPolicy retry = {});

    ChatResponse complete_chat(const ChatRequest& request) override;
    EmbeddingVector embed_text(const std::string& text, const std::string& model_id) override;
    std::string backend_id() const override { return "http:" + base_url_; }

private:
    std::string post_json(const std::string& path, const std::string& body);

    std::string base_url_;
    std::string api_key_;
    RetryPolicy retry_;
};

enum class CassetteMode { record, replay };

/// Record/replay cache around another backend. Cassette files are
/// JSON-lines of (cache_key, response content). In replay mode no
/// inner backend is needed and a miss is an error.
class ReplayCache : public Backend {
public:
    ReplayCache(std::shared_ptr<Backend> inner, std::string cassette_path, CassetteMode mode);

    ChatResponse complete_chat(const ChatRequest& request) override;
    EmbeddingVector embed_text(const std::string& text, const std::string& model_id) override;
    std::string backend_id() const override;

    std::size_t size() const { return entries_.size(); }

private:
    std::string lookup_or_fetch(const std::string& key,
                                const std::function<std::string()>& fetch);

    std::shared_ptr<Backend> inner_;
    std::string path_;
    CassetteMode mode_;
    std::map<std::string, std::string> entries_;
    mutable std::mutex mutex_;
};

}  // namespace sftta
