#include "netplay/backends.hpp"

#include <httplib.h>
#include <json.hpp>

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>

using namespace netplay;
using nlohmann::json;

namespace {

// Local OpenAI-style endpoint. `handler` gets the parsed request and the 1-based hit count.
class StubServer {
public:
    using Handler = std::function<void(const json&, int, httplib::Response&)>;

    explicit StubServer(Handler handler) : handler_(std::move(handler)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            const int n = ++hits_;
            last_auth_ = req.get_header_value("Authorization");
            handler_(json::parse(req.body), n, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    HttpConfig config() const {
        HttpConfig c;
        c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
        c.api_key = "test-key";
        c.backoff = std::chrono::milliseconds(1);
        c.timeout = std::chrono::seconds(5);
        return c;
    }
    int hits() const { return hits_; }
    std::string last_auth() const { return last_auth_; }

private:
    Handler handler_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> hits_{0};
    std::string last_auth_;
};

json completion(const std::string& content) { return {{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}; }

const std::vector<ChatMessage> kPrompt{{"system", "memory"}, {"system", "Current observation:\nobs"}, {"user", "task"}};

std::vector<ChatMessage> prompt_with(const std::string& observation, const std::string& memory = "memory") {
    return {{"system", memory}, {"system", observation}, {"user", "task"}};
}

}  // namespace

TEST_CASE("http: request body and reply content") {
    json seen;
    StubServer srv([&](const json& body, int, httplib::Response& res) {
        seen = body;
        res.set_content(completion(body["messages"].back()["content"].get<std::string>() + "!").dump(), "application/json");
    });
    HttpBackend b(srv.config());
    CompletionOptions o;
    o.temperature = 0.25;
    o.max_tokens = 77;
    CHECK(b.complete(kPrompt, o) == "task!");
    CHECK(srv.hits() == 1);
    CHECK(srv.last_auth() == "Bearer test-key");
    CHECK(seen["model"] == "gpt-4-1106-preview");
    CHECK(seen["temperature"] == 0.25);
    CHECK(seen["max_tokens"] == 77);
    CHECK(seen["response_format"]["type"] == "json_object");
    REQUIRE(seen["messages"].size() == 3);
    CHECK(seen["messages"][1]["role"] == "system");
    CHECK(seen["messages"][1]["content"] == "Current observation:\nobs");
    o.structured_output = false;
    b.complete(kPrompt, o);
    CHECK_FALSE(seen.contains("response_format"));
}

TEST_CASE("http: 429 twice, then success") {
    StubServer srv([](const json&, int n, httplib::Response& res) {
        if (n <= 2) {
            res.status = 429;
            return;
        }
        res.set_content(completion("ok").dump(), "application/json");
    });
    HttpBackend b(srv.config());
    CHECK(b.complete(kPrompt, {}) == "ok");
    CHECK(srv.hits() == 3);
    CHECK(b.attempts_made() == 3);
}

TEST_CASE("http: rate limited on every attempt") {
    StubServer srv([](const json&, int, httplib::Response& res) { res.status = 429; });
    HttpBackend b(srv.config());
    try {
        b.complete(kPrompt, {});
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.kind() == BackendError::Kind::RateLimited);
        CHECK(e.status() == 429);
    }
    CHECK(srv.hits() == 3);
}

TEST_CASE("http: client errors are not retried") {
    StubServer srv([](const json&, int, httplib::Response& res) { res.status = 401; });
    HttpBackend b(srv.config());
    CHECK_THROWS_AS(b.complete(kPrompt, {}), BackendError);
    CHECK(srv.hits() == 1);
}

TEST_CASE("http: malformed reply") {
    const json numeric{{"choices", {{{"message", {{"content", 5}}}}}}};
    for (const std::string body : {std::string("not json"), json{{"choices", json::array()}}.dump(), numeric.dump()}) {
        CAPTURE(body);
        StubServer srv([&](const json&, int, httplib::Response& res) { res.set_content(body, "application/json"); });
        HttpBackend b(srv.config());
        try {
            b.complete(kPrompt, {});
            FAIL("expected BackendError");
        } catch (const BackendError& e) {
            CHECK(e.kind() == BackendError::Kind::Malformed);
        }
        CHECK(srv.hits() == 1);
    }
}

TEST_CASE("http: unreachable endpoint and bad config") {
    HttpConfig c;
    c.endpoint = "http://127.0.0.1:1/v1";
    c.backoff = std::chrono::milliseconds(1);
    c.timeout = std::chrono::seconds(2);
    HttpBackend b(c);
    try {
        b.complete(kPrompt, {});
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.kind() == BackendError::Kind::Unavailable);
    }
    CHECK(b.attempts_made() == 3);
    CHECK_THROWS_AS(HttpBackend(HttpConfig{}), BackendError);
    c.endpoint = "ftp://nowhere";
    CHECK_THROWS_AS(HttpBackend(c).complete(kPrompt, {}), BackendError);
}

TEST_CASE("request_digest ignores whitespace runs but not content or roles") {
    const auto a = request_digest({{"system", "a  b\n c"}});
    CHECK(a == request_digest({{"system", "a b c"}}));
    CHECK(a == request_digest({{"system", "  a b c  "}}));
    CHECK(a != request_digest({{"user", "a b c"}}));
    CHECK(a != request_digest({{"system", "a b d"}}));
    CHECK(request_digest({{"system", "ab"}, {"user", "c"}}) != request_digest({{"system", "a"}, {"user", "bc"}}));
}

TEST_CASE("scripted: seq then always, default when empty") {
    auto b = ScriptedBackend::from_text("# comment\nseq: A\nseq: B\nalways: C\n");
    CHECK(b->complete(kPrompt, {}) == "A");
    CHECK(b->complete(kPrompt, {}) == "B");
    CHECK(b->complete(kPrompt, {}) == "C");
    CHECK(b->complete(kPrompt, {}) == "C");
    CHECK(b->calls() == 4);
    auto empty = ScriptedBackend::from_text("");
    CHECK(empty->complete(kPrompt, {}).find("finish_task") != std::string::npos);
}

TEST_CASE("scripted: step overrides seq, default catches the rest") {
    auto b = ScriptedBackend::from_text("step 2: TWO\nseq: S1\ndefault: D\n");
    CHECK(b->complete(kPrompt, {}) == "S1");
    CHECK(b->complete(kPrompt, {}) == "TWO");
    CHECK(b->complete(kPrompt, {}) == "D");
}

TEST_CASE("scripted: when matches the observation and expands captures") {
    auto b = ScriptedBackend::from_text("when /wand at \\((\\d+),(\\d+)\\)/: {\"x\":$1,\"y\":$2}\nalways: NONE\n");
    CHECK(b->complete(prompt_with("Open menu:\n[ ] a - wand at (3,7)"), {}) == "{\"x\":3,\"y\":7}");
    CHECK(b->complete(prompt_with("nothing"), {}) == "NONE");
    // The rule reads the observation slot only, not memory.
    CHECK(b->complete(prompt_with("nothing", "wand at (1,1)"), {}) == "NONE");
}

TEST_CASE("scripted: retry repeats the last answer on a matching memory message") {
    auto b = ScriptedBackend::from_text("retry /interrupted/\nseq: A\nseq: B\n");
    CHECK(b->complete(prompt_with("o"), {}) == "A");
    CHECK(b->complete(prompt_with("o", "Skill interrupted by: x"), {}) == "A");
    CHECK(b->complete(prompt_with("o", "Skill completed."), {}) == "B");
}

TEST_CASE("scripted: rule file errors") {
    CHECK_THROWS_AS(ScriptedBackend::parse_rules("bogus: x"), std::invalid_argument);
    CHECK_THROWS_AS(ScriptedBackend::parse_rules("when /(/: x"), std::invalid_argument);
    CHECK_THROWS_AS(ScriptedBackend::parse_rules("step two: x"), std::invalid_argument);
    CHECK_THROWS_AS(ScriptedBackend::parse_rules("seq:"), std::invalid_argument);
    try {
        ScriptedBackend::parse_rules("seq: a\n\nretry nope");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("cassette: record then replay without the inner backend") {
    auto inner = std::shared_ptr<Backend>(ScriptedBackend::from_text("seq: one\nseq: two\n"));
    CassetteBackend rec(inner, {}, CassetteBackend::Mode::Record);
    const auto p1 = prompt_with("first");
    const auto p2 = prompt_with("second");
    CHECK(rec.complete(p1, {}) == "one");
    CHECK(rec.complete(p2, {}) == "two");
    CHECK(rec.inner_calls() == 2);

    const auto file = std::filesystem::temp_directory_path() / "netplay_test.cassette.jsonl";
    rec.cassette().save(file.string());
    CassetteBackend replay(nullptr, Cassette::load(file.string()), CassetteBackend::Mode::Replay);
    CHECK(replay.complete(p1, {}) == "one");
    CHECK(replay.complete(prompt_with("  second "), {}) == "two");  // whitespace-insensitive
    CHECK(replay.inner_calls() == 0);
    try {
        replay.complete(p1, {});
        FAIL("expected exhaustion");
    } catch (const BackendError& e) {
        CHECK(e.kind() == BackendError::Kind::ReplayMismatch);
    }
    std::filesystem::remove(file);
}

TEST_CASE("cassette: mismatched request and empty tape") {
    Cassette c;
    c.entries.push_back({request_digest(prompt_with("a")), "A"});
    CassetteBackend replay(nullptr, c, CassetteBackend::Mode::Replay);
    try {
        replay.complete(prompt_with("b"), {});
        FAIL("expected mismatch");
    } catch (const BackendError& e) {
        CHECK(e.kind() == BackendError::Kind::ReplayMismatch);
    }
    CassetteBackend empty(nullptr, {}, CassetteBackend::Mode::Replay);
    CHECK_THROWS_AS(empty.complete(kPrompt, {}), BackendError);
    CHECK_THROWS_AS(CassetteBackend(nullptr, {}, CassetteBackend::Mode::Record), BackendError);
}

TEST_CASE("cassette: jsonl round trip and bad lines") {
    Cassette c;
    c.entries.push_back({"abc", "line\nwith \"quotes\""});
    c.entries.push_back({"def", ""});
    const Cassette back = Cassette::from_jsonl(c.to_jsonl());
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[0].response == "line\nwith \"quotes\"");
    CHECK(back.entries[1].request_digest == "def");
    CHECK_THROWS_AS(Cassette::from_jsonl("{\"request_digest\":1}"), std::invalid_argument);
    CHECK_THROWS_AS(Cassette::load("/nonexistent/tape.jsonl"), std::invalid_argument);
}
