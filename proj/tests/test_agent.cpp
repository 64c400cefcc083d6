#include "support.hpp"

#include "netplay/agent.hpp"
#include "netplay/harness.hpp"

#include <doctest.h>

#include <filesystem>

using namespace netplay;

#ifndef NETPLAY_GOLDEN_DIR
#define NETPLAY_GOLDEN_DIR "tests/golden"
#endif

namespace {

// Oracle for the memory law: the retained messages are the longest suffix of everything
// pushed (after per-message truncation) whose costs fit the cap.
std::vector<size_t> retained_suffix(const std::vector<int>& costs, int cap) {
    std::vector<size_t> out;
    int sum = 0;
    for (size_t i = costs.size(); i-- > 0;) {
        if (sum + costs[i] > cap) break;
        sum += costs[i];
        out.push_back(i);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string render_prompt(const std::vector<ChatMessage>& prompt) {
    std::string out;
    for (const auto& m : prompt) out += "[" + m.role + "]\n" + m.content + "\n\n";
    return out;
}

std::unique_ptr<ScriptedBackend> script(const std::string& text) { return ScriptedBackend::from_text(text); }

const char* kEsc = R"({"thoughts":"close it","skill":"press_key","params":{"key":"ESC"}})";

}  // namespace

TEST_CASE("memory: cap 10 with three 4-token messages keeps the last two") {
    AgentMemory m(10);
    for (int i = 0; i < 3; ++i) m.push(MessageCategory::System, std::string(16, char('a' + i)), 0);
    REQUIRE(m.messages().size() == 2);
    CHECK(m.messages()[0].text == std::string(16, 'b'));
    CHECK(m.messages()[1].text == std::string(16, 'c'));
    CHECK(m.total_tokens() == 8);
    CHECK(m.arrival_ids() == std::vector<uint64_t>{1, 2});
}

TEST_CASE("memory: empty message costs nothing and is kept") {
    AgentMemory m(10);
    m.push(MessageCategory::Human, "", 3);
    REQUIRE(m.messages().size() == 1);
    CHECK(m.messages()[0].token_cost == 0);
    CHECK(m.messages()[0].turn == 3);
}

TEST_CASE("memory: an oversized message keeps its tail") {
    AgentMemory m(10);
    m.push(MessageCategory::System, "first", 0);
    std::string big;
    for (int i = 0; i < 80; ++i) big += std::to_string(i % 10);
    big += "THE-END";
    m.push(MessageCategory::System, big, 1);
    REQUIRE(m.messages().size() == 1);
    const std::string& kept = m.messages()[0].text;
    CHECK(kept.rfind("...", 0) == 0);
    CHECK(kept.size() == 4 * 10);
    CHECK(big.compare(big.size() - (kept.size() - 3), kept.size() - 3, kept.substr(3)) == 0);
    CHECK(m.total_tokens() <= 10);
    // One more character of tail would not fit.
    CHECK(estimate_tokens("..." + big.substr(big.size() - (kept.size() - 2))) > 10);
}

TEST_CASE("memory: negative cap is rejected") { CHECK_THROWS_AS(AgentMemory(-1), std::invalid_argument); }

TEST_CASE("property: memory law over random sequences") {
    Rng rng(99);
    int violations = 0;
    for (int seq = 0; seq < 1000; ++seq) {
        const int cap = rng_range(rng, 10, 500);
        AgentMemory m(cap);
        std::vector<int> costs;
        const int n = rng_range(rng, 1, 60);
        for (int i = 0; i < n; ++i) {
            const int len = rng_range(rng, 0, 10) == 0 ? rng_range(rng, 0, cap * 6) : rng_range(rng, 0, 200);
            m.push(static_cast<MessageCategory>(rng_range(rng, 0, 2)), std::string(static_cast<size_t>(len), 'x'), i);
            costs.push_back(std::min(estimate_tokens(std::string(static_cast<size_t>(len), 'x')), cap));
            const auto expect = retained_suffix(costs, cap);
            std::vector<uint64_t> ids(expect.begin(), expect.end());
            if (m.total_tokens() > cap || m.arrival_ids() != ids) ++violations;
            int sum = 0;
            for (const auto& msg : m.messages()) sum += msg.token_cost;
            if (sum != m.total_tokens()) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("build_prompt: memory in order, then observation, then task") {
    AgentMemory m(100);
    CHECK(build_prompt(m, "obs", "task") == std::vector<ChatMessage>{{"system", "Current observation:\nobs"}, {"user", "task"}});
    m.push(MessageCategory::Assistant, "I go east", 0);
    m.push(MessageCategory::System, "Skill completed.", 1);
    const auto p = build_prompt(m, "obs", "task");
    REQUIRE(p.size() == 4);
    CHECK(p[0] == ChatMessage{"assistant", "I go east"});
    CHECK(p[1] == ChatMessage{"system", "Skill completed."});
    CHECK(p[3].role == "user");
}

TEST_CASE("task_description: skills, guide and censoring") {
    AgentConfig c;
    const std::string full = task_description("Do it.", c);
    CHECK(full.find("NetHack") != std::string::npos);
    CHECK(full.find("finish_task() - ") != std::string::npos);
    CHECK(full.find("Task: Do it.") != std::string::npos);
    CHECK(full.find("Advice:") == std::string::npos);
    for (const auto& s : skill_registry()) {
        if (s.name != "finish_task") CHECK(full.find(s.render()) != std::string::npos);
    }
    c.censor_game_name = true;
    c.finish_task_enabled = false;
    c.guide = "Look around.";
    const std::string censored = task_description("Do it.", c);
    CHECK(censored.find("NetHack") == std::string::npos);
    CHECK(censored.find("finish_task") == std::string::npos);
    CHECK(censored.find("Advice: Look around.") != std::string::npos);
}

TEST_CASE("build_prompt: golden fixture") {
    GameState s = fixture::game(fixture::kRoom5, "2 2", "MONSTER: newt AT 4 2 hostile\nINVENTORY: long sword WIELDED");
    Tracker t;
    t.update(s, {});
    AgentMemory m(500);
    m.push(MessageCategory::Assistant, "A newt. I will fight it.\nChosen skill: move_to(x=4, y=2)", 0);
    m.push(MessageCategory::System, "Skill interrupted by: The newt appeared at (4,2).", 0);
    AgentConfig c;
    const auto prompt = build_prompt(m, describe_observation(t, s).rendered, task_description("Kill the newt.", c));
    const std::string text = render_prompt(prompt);
    namespace fs = std::filesystem;
    const fs::path file = fs::path(NETPLAY_GOLDEN_DIR) / "prompt.txt";
    if (std::getenv("NETPLAY_UPDATE_GOLDEN")) std::ofstream(file) << text;
    REQUIRE_MESSAGE(fs::exists(file), file.string());
    CHECK(fixture::read_file(file.string()) == text);
}

TEST_CASE("parse_response") {
    auto err = [](std::string_view text, bool finish = true) {
        auto r = parse_response(text, finish);
        REQUIRE(std::holds_alternative<ParseError>(r));
        return std::get<ParseError>(r).reason;
    };
    CHECK(err("not json") == "malformed structured output");
    CHECK(err("[1,2]").find("object") != std::string::npos);
    CHECK(err(R"({"thoughts":"x"})").find("skill") != std::string::npos);
    CHECK(err(R"({"skill":"fly"})").find("unknown skill 'fly'") != std::string::npos);
    CHECK(err(R"({"skill":"finish_task"})", false).find("unknown skill") != std::string::npos);
    CHECK(err(R"({"thoughts":3,"skill":"pray"})").find("thoughts") != std::string::npos);
    CHECK(err(R"({"skill":"kick","params":{"x":1.5,"y":2}})").find("unsupported") != std::string::npos);
    CHECK_FALSE(err(R"({"skill":"kick","params":{"x":1}})").empty());
    CHECK(err(R"({"skill":"pray","params":[1]})").find("params") != std::string::npos);

    auto ok = parse_response(R"({"thoughts":"hm","skill":"kick","params":{"x":1,"y":2}})");
    REQUIRE(std::holds_alternative<SkillCall>(ok));
    const SkillCall& c = std::get<SkillCall>(ok);
    CHECK(c.thoughts == "hm");
    CHECK(format_call(c) == "kick(x=1, y=2)");
    CHECK(std::holds_alternative<SkillCall>(parse_response(R"({"skill":"explore_level","params":null})")));
}

TEST_CASE("run_task: immediate finish_task") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    Tracker t;
    t.update(s, {});
    auto b = script(R"(always: {"thoughts":"done","skill":"finish_task","params":{}})");
    const RunRecord r = run_task(s, t, *b, "Nothing to do.", AgentConfig{});
    CHECK(r.outcome == RunOutcome::TaskFinished);
    CHECK(r.llm_calls == 1);
    CHECK(r.turns == 0);
    REQUIRE(r.calls.size() == 1);
    CHECK(r.calls[0].skill == "finish_task");
    CHECK(r.calls[0].outcome == "task_finished");
}

TEST_CASE("run_task: ESC in an open menu stalls out after exactly ten calls") {
    GameState s = fixture::game(fixture::kRoom5, "2 2", "OBJECT: rock AT 2 2\nOBJECT: dagger AT 2 2");
    step(s, Action::simple(Action::Type::Pickup));
    REQUIRE(s.open_menu.has_value());
    Tracker t;
    t.update(s, {});
    auto b = script(std::string("always: ") + kEsc);
    const RunRecord r = run_task(s, t, *b, "Pick up the rock.", AgentConfig{});
    CHECK(r.outcome == RunOutcome::Timeout);
    CHECK(r.llm_calls == 10);
    CHECK(b->calls() == 10);
    CHECK(r.turns == 0);
}

TEST_CASE("run_task: a menu that keeps reopening also stalls out") {
    GameState s = fixture::game(fixture::kRoom5, "2 2", "OBJECT: rock AT 2 2\nOBJECT: dagger AT 2 2");
    Tracker t;
    t.update(s, {});
    auto b = script(std::string("when /Open menu/: ") + kEsc +
                    "\nalways: {\"thoughts\":\"grab\",\"skill\":\"pickup\",\"params\":{}}");
    const RunRecord r = run_task(s, t, *b, "Pick up the rock.", AgentConfig{});
    CHECK(r.outcome == RunOutcome::Timeout);
    CHECK(r.llm_calls == 10);
    CHECK(r.calls[0].skill == "pickup");
    CHECK(r.calls[1].skill == "press_key");
}

TEST_CASE("run_task: parse errors count toward the stall limit") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    Tracker t;
    t.update(s, {});
    auto b = script(R"(always: {"skill":"dance"})");
    const RunRecord r = run_task(s, t, *b, "x", AgentConfig{});
    CHECK(r.outcome == RunOutcome::Timeout);
    CHECK(r.llm_calls == 10);
    CHECK(r.calls[0].outcome == "parse_error");
    CHECK(r.calls[0].messages.at(0).find("unknown skill 'dance'") != std::string::npos);
}

TEST_CASE("run_task: time-advancing backend never stalls out") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    Tracker t;
    t.update(s, {});
    auto b = script(R"(always: {"thoughts":"look","skill":"search","params":{}})");
    AgentConfig c;
    c.llm_call_limit = 60;
    c.turn_limit = 1000;
    const RunRecord r = run_task(s, t, *b, "x", c);
    CHECK(r.outcome == RunOutcome::CallLimit);
    CHECK(r.llm_calls == 60);
    CHECK(r.turns == 60);
}

TEST_CASE("run_task: turn limit and goal hooks") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    Tracker t;
    t.update(s, {});
    auto b = script(R"(always: {"thoughts":"look","skill":"search","params":{}})");
    AgentConfig c;
    c.turn_limit = 5;
    CHECK(run_task(s, t, *b, "x", c).outcome == RunOutcome::TimeLimit);
    CHECK(s.turn == 5);

    GameState s2 = fixture::game(fixture::kRoom5, "2 2");
    Tracker t2;
    t2.update(s2, {});
    RunHooks h;
    h.goal = [](const GameState& g) { return g.turn >= 3; };
    CHECK(run_task(s2, t2, *b, "x", AgentConfig{}, h).outcome == RunOutcome::GoalReached);
    CHECK(s2.turn == 3);
}

TEST_CASE("run_task: finish_task is withheld when disabled") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    Tracker t;
    t.update(s, {});
    auto b = script(R"(always: {"thoughts":"done","skill":"finish_task","params":{}})");
    AgentConfig c;
    c.finish_task_enabled = false;
    const RunRecord r = run_task(s, t, *b, "x", c);
    CHECK(r.outcome == RunOutcome::Timeout);
    CHECK(r.calls[0].outcome == "parse_error");
}

TEST_CASE("run_task: memory receives thoughts, events and the outcome") {
    GameState s = fixture::game(fixture::kRoom5, "2 2", "INVENTORY: potion of healing");
    Tracker t;
    t.update(s, {});
    auto b = script("seq: {\"thoughts\":\"drink\",\"skill\":\"quaff\",\"params\":{\"letter\":\"a\"}}\n"
                    "always: {\"thoughts\":\"ok\",\"skill\":\"finish_task\",\"params\":{}}");
    const RunRecord r = run_task(s, t, *b, "x", AgentConfig{});
    REQUIRE(r.calls.size() == 2);
    const auto& msgs = r.calls[0].messages;
    REQUIRE(msgs.size() >= 3);
    CHECK(msgs.front() == "drink\nChosen skill: quaff(letter=\"a\")");
    CHECK(msgs.back().rfind("Skill completed.", 0) == 0);
    CHECK(msgs.size() == r.calls[0].events.size() + 2);
}

TEST_CASE("run_task: cassette replay reproduces the run") {
    const BuiltinScenario* b = find_builtin("bag");
    const ScenarioSpec spec = parse_scenario(b->source);
    auto play = [&](Backend& backend) {
        GameState s = new_game(spec, 7);
        Tracker t;
        t.update(s, {});
        AgentConfig c;
        c.turn_limit = spec.time_limit;
        return run_task(s, t, backend, spec.task, c);
    };
    auto inner = std::make_shared<ScriptedBackend>(ScriptedBackend::parse_rules(b->solution));
    CassetteBackend rec(inner, {}, CassetteBackend::Mode::Record);
    const RunRecord first = play(rec);
    CHECK(first.outcome == RunOutcome::TaskFinished);
    CHECK(rec.cassette().entries.size() == static_cast<size_t>(first.llm_calls));

    const Cassette tape = Cassette::from_jsonl(rec.cassette().to_jsonl());
    CassetteBackend replay(nullptr, tape, CassetteBackend::Mode::Replay);
    const RunRecord second = play(replay);
    CHECK(second == first);
    CHECK(replay.inner_calls() == 0);
}

TEST_CASE("RunRecord: jsonl has one line per call plus a summary") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    Tracker t;
    t.update(s, {});
    auto b = script("seq: {\"thoughts\":\"a\",\"skill\":\"search\",\"params\":{}}\n"
                    "always: {\"thoughts\":\"b\",\"skill\":\"finish_task\",\"params\":{}}");
    const RunRecord r = run_task(s, t, *b, "x", AgentConfig{});
    const std::string text = r.to_jsonl();
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    CHECK(text.find("\"summary\":true") != std::string::npos);
    CHECK(text.find("\"outcome\":\"task_finished\"") != std::string::npos);
}
