#pragma once

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ramt/detail/rng.hpp"
#include "ramt/text.hpp"
#include "ramt/vectors.hpp"

namespace ramt::backends {

// Temperature presets: deterministic decoding by default, provider-default
// sampling where a model is run that way.
inline constexpr double kTemperatureGreedy = 0.0;
inline constexpr double kTemperatureSampling = 0.7;

struct BackoffPolicy {
    std::chrono::milliseconds initial{500};
    double multiplier = 2.0;
};

struct BackendConfig {
    std::string endpoint_url;  // base URL, e.g. https://api.example.com/v1
    std::string model_name;
    std::string api_key_env = "RAMT_API_KEY";
    double temperature = kTemperatureGreedy;
    int max_retries = 3;
    BackoffPolicy backoff;
    int max_in_flight = 4;
    std::chrono::milliseconds request_timeout{60000};
    int embed_batch_size = 64;
    double requests_per_second = 0.0;  // 0 disables client-side rate limiting

    void validate() const {
        if (temperature < 0)
            throw std::invalid_argument("temperature must be >= 0");
        if (max_retries < 0)
            throw std::invalid_argument("max_retries must be >= 0");
        if (max_in_flight < 1)
            throw std::invalid_argument("max_in_flight must be >= 1");
        if (embed_batch_size < 1)
            throw std::invalid_argument("embed_batch_size must be >= 1");
        if (backoff.multiplier < 1.0)
            throw std::invalid_argument("backoff multiplier must be >= 1");
    }
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

// No response at all (connection refused, timeout, DNS failure).
struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BackendError : std::runtime_error {
    BackendError(const std::string& what, int status, int attempts)
        : std::runtime_error(what), status(status), attempts(attempts) {}
    int status;
    int attempts;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const std::string& path, const std::string& body) = 0;
};

namespace detail {

// Runtime-sized concurrency gate (std::counting_semaphore needs a
// compile-time ceiling).
class Gate {
public:
    explicit Gate(int limit) : available_(limit) {}

    void acquire() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return available_ > 0; });
        --available_;
    }

    void release() {
        {
            std::lock_guard lock(mu_);
            ++available_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    int available_;
};

struct GatePass {
    explicit GatePass(Gate& g) : gate(g) { gate.acquire(); }
    ~GatePass() { gate.release(); }
    GatePass(const GatePass&) = delete;
    GatePass& operator=(const GatePass&) = delete;
    Gate& gate;
};

// Token bucket with an injectable clock so the schedule is testable.
class TokenBucket {
public:
    using NowFn = std::function<int64_t()>;  // microseconds, monotonic

    TokenBucket(double rate_per_sec, NowFn now = {})
        : rate_(rate_per_sec),
          burst_(rate_per_sec > 0 ? std::max(1.0, rate_per_sec) : 0),
          tokens_(burst_),
          now_(now ? std::move(now) : default_now) {
        last_ = now_();
    }

    // Microseconds the caller must wait before its request may proceed.
    std::chrono::microseconds reserve() {
        if (rate_ <= 0) return std::chrono::microseconds::zero();
        std::lock_guard lock(mu_);
        const int64_t t = now_();
        tokens_ = std::min(burst_, tokens_ + rate_ * double(t - last_) / 1e6);
        last_ = t;
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return std::chrono::microseconds::zero();
        }
        const double deficit = 1.0 - tokens_;
        tokens_ = 0.0;
        return std::chrono::microseconds(
            static_cast<int64_t>(deficit / rate_ * 1e6) + 1);
    }

private:
    static int64_t default_now() {
        return std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    }

    std::mutex mu_;
    double rate_;
    double burst_;
    double tokens_;
    int64_t last_;
    NowFn now_;
};

}  // namespace detail

inline constexpr std::string_view kChatPath = "/chat/completions";
inline constexpr std::string_view kEmbeddingsPath = "/embeddings";

// OpenAI-compatible chat/embeddings client: retries transient failures with
// exponential backoff, bounds in-flight requests, optionally rate-limits and
// logs redacted transcripts.
class Client {
public:
    using SleepFn = std::function<void(std::chrono::microseconds)>;

    Client(BackendConfig cfg, std::shared_ptr<Transport> transport)
        : cfg_(std::move(cfg)),
          transport_(std::move(transport)),
          gate_(cfg_.max_in_flight),
          bucket_(cfg_.requests_per_second) {
        cfg_.validate();
        if (!transport_) throw std::invalid_argument("transport must be set");
    }

    const BackendConfig& config() const { return cfg_; }

    void set_sleep_hook(SleepFn fn) { sleep_ = std::move(fn); }

    void set_transcript_path(const std::string& path) {
        std::lock_guard lock(transcript_mu_);
        transcript_.open(path, std::ios::app);
        if (!transcript_)
            throw std::runtime_error("cannot open transcript file: " + path);
    }

    // Sends one prompt as a single user message and returns the assistant
    // text, whitespace-trimmed. Provider reasoning fields are ignored.
    std::string chat(const std::string& prompt) {
        nlohmann::json body = {
            {"model", cfg_.model_name},
            {"messages",
             nlohmann::json::array(
                 {nlohmann::json{{"role", "user"}, {"content", prompt}}})},
            {"temperature", cfg_.temperature},
        };
        const HttpResponse resp =
            post_with_retry(std::string(kChatPath), body.dump());
        nlohmann::json j = parse_body(resp, "chat completion");
        if (!j.contains("choices") || !j["choices"].is_array() ||
            j["choices"].empty())
            throw BackendError("chat response has no choices", resp.status, 1);
        const auto& msg = j["choices"][0].contains("message")
                              ? j["choices"][0]["message"]
                              : nlohmann::json::object();
        std::string content;
        if (msg.contains("content") && msg["content"].is_string())
            content = msg["content"].get<std::string>();
        return text::trim(content);
    }

    // Embeds texts in configured batches; output order matches input order.
    std::vector<vectors::EmbeddingVector> embed(
        const std::vector<std::string>& texts) {
        if (texts.empty())
            throw std::invalid_argument("embed: texts must be non-empty");
        std::vector<vectors::EmbeddingVector> out;
        out.reserve(texts.size());
        size_t dim = 0;
        for (size_t begin = 0; begin < texts.size();
             begin += static_cast<size_t>(cfg_.embed_batch_size)) {
            const size_t end = std::min(
                texts.size(), begin + static_cast<size_t>(cfg_.embed_batch_size));
            nlohmann::json input = nlohmann::json::array();
            for (size_t i = begin; i < end; ++i) input.push_back(texts[i]);
            nlohmann::json body = {{"model", cfg_.model_name}, {"input", input}};
            const HttpResponse resp =
                post_with_retry(std::string(kEmbeddingsPath), body.dump());
            nlohmann::json j = parse_body(resp, "embeddings");
            if (!j.contains("data") || !j["data"].is_array())
                throw BackendError("embeddings response has no data array",
                                   resp.status, 1);
            std::vector<nlohmann::json> rows(j["data"].begin(), j["data"].end());
            std::stable_sort(rows.begin(), rows.end(),
                             [](const nlohmann::json& a, const nlohmann::json& b) {
                                 return a.value("index", 0) < b.value("index", 0);
                             });
            if (rows.size() != end - begin)
                throw BackendError("embeddings batch returned " +
                                       std::to_string(rows.size()) +
                                       " vectors for " +
                                       std::to_string(end - begin) + " inputs",
                                   resp.status, 1);
            for (const auto& row : rows) {
                std::vector<float> v;
                for (const auto& x : row.at("embedding")) v.push_back(x.get<float>());
                if (dim == 0) dim = v.size();
                if (v.size() != dim)
                    throw BackendError(
                        "inconsistent embedding dim: " + std::to_string(v.size()) +
                            " vs " + std::to_string(dim),
                        resp.status, 1);
                out.emplace_back(std::move(v));
            }
        }
        return out;
    }

private:
    nlohmann::json parse_body(const HttpResponse& resp, const char* what) {
        try {
            return nlohmann::json::parse(resp.body);
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(std::string(what) + ": unparseable response: " +
                                   e.what(),
                               resp.status, 1);
        }
    }

    HttpResponse post_with_retry(const std::string& path,
                                 const std::string& body) {
        detail::GatePass pass(gate_);
        auto delay = std::chrono::duration_cast<std::chrono::microseconds>(
            cfg_.backoff.initial);
        int attempts = 0;
        for (;;) {
            const auto wait = bucket_.reserve();
            if (wait.count() > 0) sleep(wait);
            ++attempts;
            std::string failure;
            int status = 0;
            try {
                HttpResponse resp = transport_->post(path, body);
                status = resp.status;
                if (resp.status >= 200 && resp.status < 300) {
                    log_transcript(path, body, resp);
                    return resp;
                }
                if (resp.status == 401 || resp.status == 403)
                    throw BackendError("authentication rejected with status " +
                                           std::to_string(resp.status),
                                       resp.status, attempts);
                const bool retryable = resp.status >= 500 ||
                                       resp.status == 408 || resp.status == 429;
                if (!retryable)
                    throw BackendError("request failed with status " +
                                           std::to_string(resp.status),
                                       resp.status, attempts);
                failure = "status " + std::to_string(resp.status);
            } catch (const TransportError& e) {
                failure = e.what();
            }
            if (attempts > cfg_.max_retries)
                throw BackendError("retries exhausted after " +
                                       std::to_string(attempts) + " attempts (" +
                                       failure + ")",
                                   status, attempts);
            sleep(delay);
            delay = std::chrono::microseconds(static_cast<int64_t>(
                double(delay.count()) * cfg_.backoff.multiplier));
        }
    }

    void sleep(std::chrono::microseconds d) {
        if (sleep_)
            sleep_(d);
        else
            std::this_thread::sleep_for(d);
    }

    void log_transcript(const std::string& path, const std::string& request,
                        const HttpResponse& resp) {
        std::lock_guard lock(transcript_mu_);
        if (!transcript_.is_open()) return;
        // Bodies only; credentials live in transport headers and never appear.
        nlohmann::json line = {{"path", path},
                               {"request", request},
                               {"status", resp.status},
                               {"response", resp.body}};
        transcript_ << line.dump() << '\n';
        transcript_.flush();
    }

    BackendConfig cfg_;
    std::shared_ptr<Transport> transport_;
    detail::Gate gate_;
    detail::TokenBucket bucket_;
    SleepFn sleep_;
    std::mutex transcript_mu_;
    std::ofstream transcript_;
};

// ---------------------------------------------------------------------------
// Empty-output policies.
// ---------------------------------------------------------------------------

enum class EmptyMode { replace_with_dash, retry_generation };

struct EmptyPolicy {
    EmptyMode mode = EmptyMode::replace_with_dash;
    int retry_limit = 1;

    void validate() const {
        if (mode == EmptyMode::retry_generation && retry_limit < 1)
            throw std::invalid_argument(
                "retry_generation requires retry_limit >= 1");
    }
};

struct EmptyTranslationError : std::runtime_error {
    explicit EmptyTranslationError(int generations)
        : std::runtime_error("translation still empty after " +
                             std::to_string(generations) + " regenerations"),
          generations(generations) {}
    int generations;
};

inline std::string apply_empty_policy(
    const std::string& output, const std::function<std::string()>& regenerate,
    const EmptyPolicy& policy) {
    policy.validate();
    if (!text::is_blank(output)) return output;
    if (policy.mode == EmptyMode::replace_with_dash) return "-";
    if (!regenerate)
        throw std::invalid_argument(
            "retry_generation policy requires a regenerate callable");
    for (int i = 0; i < policy.retry_limit; ++i) {
        std::string next = regenerate();
        if (!text::is_blank(next)) return next;
    }
    throw EmptyTranslationError(policy.retry_limit);
}

// ---------------------------------------------------------------------------
// Deterministic mock backend: answers both wire paths without a network.
// Chat returns the query with its code points reversed; embeddings hash the
// text into a fixed unit vector.
// ---------------------------------------------------------------------------

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : std::string_view(s)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::vector<float> mock_embedding(std::string_view content, size_t dim,
                                         uint64_t seed) {
    detail::SplitMix64 rng(fnv1a64(content) ^ seed);
    std::vector<float> v(dim);
    for (auto& x : v) x = static_cast<float>(rng.symmetric());
    if (vectors::norm(v) == 0.0) v[0] = 1.0f;
    vectors::normalize_in_place(v);
    return v;
}

inline std::string mock_translation(std::string_view prompt) {
    static constexpr std::string_view kMarker = "Phrase to translate: ";
    std::string_view query = prompt;
    if (const auto pos = prompt.find(kMarker); pos != std::string_view::npos) {
        query = prompt.substr(pos + kMarker.size());
        if (const auto end = query.find(" \n\n"); end != std::string_view::npos)
            query = query.substr(0, end);
    }
    std::u32string cps = text::decode_utf8(query);
    std::reverse(cps.begin(), cps.end());
    return text::encode_utf8(cps);
}

class MockBackendTransport final : public Transport {
public:
    explicit MockBackendTransport(size_t embed_dim = 384, uint64_t seed = 0)
        : dim_(embed_dim), seed_(seed) {}

    HttpResponse post(const std::string& path, const std::string& body) override {
        nlohmann::json req = nlohmann::json::parse(body);
        if (path == kChatPath) {
            const std::string prompt =
                req.at("messages").at(0).at("content").get<std::string>();
            nlohmann::json resp = {
                {"choices",
                 nlohmann::json::array(
                     {nlohmann::json{{"message",
                                      {{"role", "assistant"},
                                       {"content", mock_translation(prompt)}}}}})}};
            return {200, resp.dump()};
        }
        if (path == kEmbeddingsPath) {
            nlohmann::json data = nlohmann::json::array();
            int index = 0;
            for (const auto& t : req.at("input")) {
                data.push_back(
                    {{"index", index++},
                     {"embedding", mock_embedding(t.get<std::string>(), dim_, seed_)}});
            }
            return {200, nlohmann::json{{"data", data}}.dump()};
        }
        return {404, R"({"error":"unknown path"})"};
    }

private:
    size_t dim_;
    uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Translation backend handle used by corpus pseudolabeling.
// ---------------------------------------------------------------------------

class Translator {
public:
    virtual ~Translator() = default;
    virtual std::string name() const = 0;
    // Returns the translation of text from `from` into `to`; empty result
    // means the backend produced nothing usable this attempt.
    virtual std::string translate(const std::string& text,
                                  const std::string& from,
                                  const std::string& to) = 0;
};

// Appends "|{lang}" per hop; deterministic stand-in for wire translators.
class SuffixMockTranslator final : public Translator {
public:
    std::string name() const override { return "mock"; }
    std::string translate(const std::string& text, const std::string&,
                          const std::string& to) override {
        return text + "|" + to;
    }
};

}  // namespace ramt::backends
