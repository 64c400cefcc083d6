#pragma once

// Completion providers: OpenAI-compatible HTTP, scripted rules, record/replay cassettes.

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

namespace netplay {

struct ChatMessage {
    std::string role;  // system | assistant | user
    std::string content;
    bool operator==(const ChatMessage&) const = default;
};

struct CompletionOptions {
    double temperature = 0.0;
    bool structured_output = true;
    int max_tokens = 512;
};

class BackendError : public std::runtime_error {
public:
    enum class Kind { Unavailable, RateLimited, Malformed, ReplayMismatch, Misconfigured };
    BackendError(Kind kind, std::string detail, int status = 0);
    Kind kind() const { return kind_; }
    int status() const { return status_; }

private:
    Kind kind_;
    int status_;
};

std::string_view backend_error_name(BackendError::Kind k);

class Backend {
public:
    virtual ~Backend() = default;
    // Returns the completion text or throws BackendError.
    virtual std::string complete(const std::vector<ChatMessage>& messages, const CompletionOptions& options) = 0;
    virtual std::string name() const = 0;
};

// Stable hash of the role/content sequence with runs of whitespace collapsed.
std::string request_digest(const std::vector<ChatMessage>& messages);

// ------------------------------------------------------------------ http

struct HttpConfig {
    std::string endpoint;  // base URL, e.g. https://api.openai.com/v1
    std::string api_key;
    std::string model = "gpt-4-1106-preview";
    int max_attempts = 3;
    std::chrono::milliseconds backoff{500};  // doubled after every failed attempt
    std::chrono::seconds timeout{120};

    // NETPLAY_LLM_ENDPOINT, NETPLAY_LLM_API_KEY, NETPLAY_LLM_MODEL
    static std::optional<HttpConfig> from_env();
};

class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpConfig config);
    std::string complete(const std::vector<ChatMessage>& messages, const CompletionOptions& options) override;
    std::string name() const override { return "http:" + config_.model; }
    int attempts_made() const { return attempts_; }

private:
    HttpConfig config_;
    int attempts_ = 0;
};

// ------------------------------------------------------------------ scripted

// Rule file, one rule per line ('#' starts a comment line):
//   retry /RE/       repeat the previous answer when the latest memory message matches
//   when /RE/: JSON  answer when the observation matches; $1..$9 expand to capture groups
//   step N: JSON     answer for the N-th call (1-based)
//   seq: JSON        answers used one after another
//   always: JSON     answer once the seq list is used up
//   default: JSON    answer when nothing else applies (finish_task unless given)
// Priority: retry, when, step, seq, always, default.
class ScriptedBackend : public Backend {
public:
    struct Rule {
        enum class Kind { Retry, When, Step, Seq, Always, Default };
        Kind kind = Kind::Seq;
        std::string pattern;
        int step = 0;
        std::string response;
    };

    explicit ScriptedBackend(std::vector<Rule> rules);
    static std::vector<Rule> parse_rules(std::string_view text);  // throws std::invalid_argument
    static std::unique_ptr<ScriptedBackend> from_text(std::string_view text);

    std::string complete(const std::vector<ChatMessage>& messages, const CompletionOptions& options) override;
    std::string name() const override { return "scripted"; }
    int calls() const;

private:
    struct Compiled {
        Rule rule;
        std::optional<std::regex> re;
    };
    std::vector<Compiled> rules_;
    mutable std::mutex mu_;
    int calls_ = 0;
    size_t seq_next_ = 0;
    std::string last_response_;
};

// ------------------------------------------------------------------ cassette

struct CassetteEntry {
    std::string request_digest;
    std::string response;
};

struct Cassette {
    std::vector<CassetteEntry> entries;

    std::string to_jsonl() const;
    static Cassette from_jsonl(std::string_view text);  // throws std::invalid_argument
    static Cassette load(const std::string& path);
    void save(const std::string& path) const;
};

class CassetteBackend : public Backend {
public:
    enum class Mode { Record, Replay };
    // Record needs an inner backend; Replay never touches it.
    CassetteBackend(std::shared_ptr<Backend> inner, Cassette cassette, Mode mode);

    std::string complete(const std::vector<ChatMessage>& messages, const CompletionOptions& options) override;
    std::string name() const override;
    const Cassette& cassette() const { return cassette_; }
    int inner_calls() const { return inner_calls_; }

private:
    std::shared_ptr<Backend> inner_;
    Cassette cassette_;
    Mode mode_;
    size_t cursor_ = 0;
    int inner_calls_ = 0;
    std::mutex mu_;
};

}  // namespace netplay
