#include "netplay/backends.hpp"

#include "netplay/core.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace netplay {

using nlohmann::json;

BackendError::BackendError(Kind kind, std::string detail, int status)
    : std::runtime_error(std::string(backend_error_name(kind)) + ": " + detail), kind_(kind), status_(status) {}

std::string_view backend_error_name(BackendError::Kind k) {
    switch (k) {
        case BackendError::Kind::Unavailable: return "Unavailable";
        case BackendError::Kind::RateLimited: return "RateLimited";
        case BackendError::Kind::Malformed: return "Malformed";
        case BackendError::Kind::ReplayMismatch: return "ReplayMismatch";
        case BackendError::Kind::Misconfigured: return "Misconfigured";
    }
    return "?";
}

namespace {

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = !out.empty();
            continue;
        }
        if (pending) out.push_back(' ');
        pending = false;
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string request_digest(const std::vector<ChatMessage>& messages) {
    std::string buf;
    for (const auto& m : messages) {
        buf += m.role;
        buf.push_back('\x1f');
        buf += collapse_whitespace(m.content);
        buf.push_back('\x1e');
    }
    return hex64(fnv1a64(buf));
}

// ------------------------------------------------------------------ http

std::optional<HttpConfig> HttpConfig::from_env() {
    const char* endpoint = std::getenv("NETPLAY_LLM_ENDPOINT");
    if (!endpoint || !*endpoint) return std::nullopt;
    HttpConfig c;
    c.endpoint = endpoint;
    if (const char* key = std::getenv("NETPLAY_LLM_API_KEY")) c.api_key = key;
    if (const char* model = std::getenv("NETPLAY_LLM_MODEL"); model && *model) c.model = model;
    return c;
}

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) throw BackendError(BackendError::Kind::Misconfigured, "no endpoint configured");
}

namespace {

struct Url {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Url split_url(const std::string& endpoint) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(endpoint, m, re)) {
        throw BackendError(BackendError::Kind::Misconfigured, "bad endpoint URL '" + endpoint + "'");
    }
    std::string path = m[2].matched ? m[2].str() : "";
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {m[1].str(), path + "/chat/completions"};
}

bool transient(int status) { return status == 429 || status == 500 || status == 502 || status == 503 || status == 504; }

}  // namespace

std::string HttpBackend::complete(const std::vector<ChatMessage>& messages, const CompletionOptions& options) {
    const Url url = split_url(config_.endpoint);
    json body;
    body["model"] = config_.model;
    body["temperature"] = options.temperature;
    body["max_tokens"] = options.max_tokens;
    if (options.structured_output) body["response_format"] = {{"type", "json_object"}};
    body["messages"] = json::array();
    for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    auto delay = config_.backoff;
    for (int attempt = 1;; ++attempt) {
        ++attempts_;
        httplib::Client client(url.origin);
        client.set_connection_timeout(config_.timeout);
        client.set_read_timeout(config_.timeout);
        client.set_write_timeout(config_.timeout);
        auto res = client.Post(url.path, headers, payload, "application/json");
        const bool last = attempt >= config_.max_attempts;
        if (!res) {
            if (last) throw BackendError(BackendError::Kind::Unavailable, "request failed: " + httplib::to_string(res.error()));
        } else if (res->status == 200) {
            try {
                const json reply = json::parse(res->body);
                const auto& content = reply.at("choices").at(0).at("message").at("content");
                if (!content.is_string()) throw std::runtime_error("content is not a string");
                return content.get<std::string>();
            } catch (const std::exception& e) {
                throw BackendError(BackendError::Kind::Malformed, e.what(), res->status);
            }
        } else if (!transient(res->status)) {
            throw BackendError(BackendError::Kind::Unavailable, "HTTP status " + std::to_string(res->status), res->status);
        } else if (last) {
            const auto kind = res->status == 429 ? BackendError::Kind::RateLimited : BackendError::Kind::Unavailable;
            throw BackendError(kind, "HTTP status " + std::to_string(res->status) + " after " + std::to_string(attempt) + " attempts",
                               res->status);
        }
        auto wait = delay;
        if (res && res->status == 429 && res->has_header("Retry-After")) {
            try {
                const auto secs = std::chrono::seconds(std::stoi(res->get_header_value("Retry-After")));
                wait = std::min<std::chrono::milliseconds>(std::max<std::chrono::milliseconds>(wait, secs), std::chrono::seconds(60));
            } catch (const std::exception&) {
                // an HTTP-date Retry-After falls back to the backoff delay
            }
        }
        std::this_thread::sleep_for(wait);
        delay *= 2;
    }
}

// ------------------------------------------------------------------ scripted

namespace {

std::string expand_captures(const std::string& response, const std::smatch& m) {
    std::string out;
    for (size_t i = 0; i < response.size(); ++i) {
        if (response[i] == '$' && i + 1 < response.size() && std::isdigit(static_cast<unsigned char>(response[i + 1]))) {
            const size_t g = static_cast<size_t>(response[i + 1] - '0');
            if (g < m.size()) out += m[g].str();
            ++i;
            continue;
        }
        out.push_back(response[i]);
    }
    return out;
}

const char* kDefaultResponse = R"({"thoughts":"Nothing left to do.","skill":"finish_task","params":{}})";

}  // namespace

ScriptedBackend::ScriptedBackend(std::vector<Rule> rules) {
    bool has_default = false;
    for (auto& r : rules) {
        Compiled c{r, std::nullopt};
        if (r.kind == Rule::Kind::Retry || r.kind == Rule::Kind::When) c.re.emplace(r.pattern, std::regex::ECMAScript);
        has_default = has_default || r.kind == Rule::Kind::Default;
        rules_.push_back(std::move(c));
    }
    if (!has_default) rules_.push_back({{Rule::Kind::Default, "", 0, kDefaultResponse}, std::nullopt});
}

std::vector<ScriptedBackend::Rule> ScriptedBackend::parse_rules(std::string_view text) {
    std::vector<Rule> rules;
    int line_no = 0;
    for (const std::string& raw : split_lines(text)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("script line " + std::to_string(line_no) + ": " + why);
        };
        auto slash_pattern = [&](size_t start, size_t& end) {
            if (start >= line.size() || line[start] != '/') fail("expected /regex/");
            const size_t close = line.rfind('/');
            if (close == start) fail("unterminated regex");
            end = close + 1;
            return line.substr(start + 1, close - start - 1);
        };
        auto json_after_colon = [&](size_t from) {
            const size_t colon = line.find(':', from);
            if (colon == std::string::npos) fail("expected ':' before the response");
            std::string resp = trim(line.substr(colon + 1));
            if (resp.empty()) fail("empty response");
            return resp;
        };
        Rule r;
        if (line.starts_with("retry ")) {
            size_t end = 0;
            r.kind = Rule::Kind::Retry;
            r.pattern = slash_pattern(6, end);
        } else if (line.starts_with("when ")) {
            r.kind = Rule::Kind::When;
            // The regex ends at the last "/:" so the JSON may contain slashes.
            const size_t sep = line.rfind("/:");
            if (line.size() < 6 || line[5] != '/' || sep == std::string::npos || sep <= 5) fail("expected when /regex/: response");
            r.pattern = line.substr(6, sep - 6);
            r.response = trim(line.substr(sep + 2));
        } else if (line.starts_with("step ")) {
            r.kind = Rule::Kind::Step;
            try {
                r.step = std::stoi(line.substr(5));
            } catch (const std::exception&) {
                fail("bad step number");
            }
            r.response = json_after_colon(5);
        } else if (line.starts_with("seq:")) {
            r.kind = Rule::Kind::Seq;
            r.response = json_after_colon(0);
        } else if (line.starts_with("always:")) {
            r.kind = Rule::Kind::Always;
            r.response = json_after_colon(0);
        } else if (line.starts_with("default:")) {
            r.kind = Rule::Kind::Default;
            r.response = json_after_colon(0);
        } else {
            fail("unknown rule '" + line + "'");
        }
        try {
            if (r.kind == Rule::Kind::Retry || r.kind == Rule::Kind::When) std::regex check(r.pattern, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            fail(std::string("bad regex: ") + e.what());
        }
        rules.push_back(std::move(r));
    }
    return rules;
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_text(std::string_view text) {
    return std::make_unique<ScriptedBackend>(parse_rules(text));
}

int ScriptedBackend::calls() const {
    std::lock_guard lock(mu_);
    return calls_;
}

std::string ScriptedBackend::complete(const std::vector<ChatMessage>& messages, const CompletionOptions&) {
    std::lock_guard lock(mu_);
    ++calls_;
    // Prompt layout: memory..., observation, task.
    const std::string observation = messages.size() >= 2 ? messages[messages.size() - 2].content : "";
    const std::string latest_memory = messages.size() >= 3 ? messages[messages.size() - 3].content : "";

    auto answer = [&](std::string r) {
        last_response_ = r;
        return r;
    };
    if (!last_response_.empty()) {
        for (const auto& c : rules_) {
            if (c.rule.kind == Rule::Kind::Retry && std::regex_search(latest_memory, *c.re)) return last_response_;
        }
    }
    for (const auto& c : rules_) {
        std::smatch m;
        if (c.rule.kind == Rule::Kind::When && std::regex_search(observation, m, *c.re)) {
            return answer(expand_captures(c.rule.response, m));
        }
    }
    for (const auto& c : rules_) {
        if (c.rule.kind == Rule::Kind::Step && c.rule.step == calls_) return answer(c.rule.response);
    }
    size_t seq_index = 0;
    for (const auto& c : rules_) {
        if (c.rule.kind != Rule::Kind::Seq) continue;
        if (seq_index++ == seq_next_) {
            ++seq_next_;
            return answer(c.rule.response);
        }
    }
    for (const auto& c : rules_) {
        if (c.rule.kind == Rule::Kind::Always) return answer(c.rule.response);
    }
    for (const auto& c : rules_) {
        if (c.rule.kind == Rule::Kind::Default) return answer(c.rule.response);
    }
    return answer(kDefaultResponse);
}

// ------------------------------------------------------------------ cassette

std::string Cassette::to_jsonl() const {
    std::string out;
    for (const auto& e : entries) {
        out += json{{"request_digest", e.request_digest}, {"response", e.response}}.dump();
        out.push_back('\n');
    }
    return out;
}

Cassette Cassette::from_jsonl(std::string_view text) {
    Cassette c;
    int line_no = 0;
    for (const std::string& line : split_lines(text)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const json j = json::parse(line);
            c.entries.push_back({j.at("request_digest").get<std::string>(), j.at("response").get<std::string>()});
        } catch (const std::exception& e) {
            throw std::invalid_argument("cassette line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return c;
}

Cassette Cassette::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open cassette " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_jsonl(ss.str());
}

void Cassette::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write cassette " + path);
    out << to_jsonl();
}

CassetteBackend::CassetteBackend(std::shared_ptr<Backend> inner, Cassette cassette, Mode mode)
    : inner_(std::move(inner)), cassette_(std::move(cassette)), mode_(mode) {
    if (mode_ == Mode::Record && !inner_) throw BackendError(BackendError::Kind::Misconfigured, "recording needs an inner backend");
}

std::string CassetteBackend::name() const {
    return std::string(mode_ == Mode::Record ? "record:" : "replay") + (mode_ == Mode::Record ? inner_->name() : "");
}

std::string CassetteBackend::complete(const std::vector<ChatMessage>& messages, const CompletionOptions& options) {
    std::lock_guard lock(mu_);
    const std::string digest = request_digest(messages);
    if (mode_ == Mode::Record) {
        ++inner_calls_;
        std::string response = inner_->complete(messages, options);
        cassette_.entries.push_back({digest, response});
        return response;
    }
    if (cursor_ >= cassette_.entries.size()) {
        throw BackendError(BackendError::Kind::ReplayMismatch, "cassette exhausted; request " + digest);
    }
    const CassetteEntry& e = cassette_.entries[cursor_];
    if (e.request_digest != digest) {
        throw BackendError(BackendError::Kind::ReplayMismatch, "expected request " + e.request_digest + ", got " + digest);
    }
    ++cursor_;
    return e.response;
}

}  // namespace netplay
