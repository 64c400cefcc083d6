#include "support.hpp"

#include <doctest.h>

#include <filesystem>

using namespace netplay;

#ifndef NETPLAY_GOLDEN_DIR
#define NETPLAY_GOLDEN_DIR "tests/golden"
#endif
#ifndef NETPLAY_SCENARIO_DIR
#define NETPLAY_SCENARIO_DIR "scenarios"
#endif

namespace {

ScenarioError parse_error(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e;
    }
    FAIL("expected a ScenarioError");
    return ScenarioError(ScenarioError::Kind::SyntaxError, 0, 0, "");
}

}  // namespace

TEST_CASE("parse: minimal scenario takes the documented defaults") {
    const ScenarioSpec s = parse_scenario("MAP:\n-----\n|...|\n-----\nENDMAP\nSTART: 1 1\nTASK: \"t\"\nSUCCESS: true\n");
    CHECK(s.time_limit == 200);
    CHECK(s.map.size() == 3);
    CHECK(s.start.mode == Placement::Mode::Fixed);
    CHECK(s.success.op == SuccessExpr::Op::True);
    CHECK_FALSE(s.guide.has_value());
}

TEST_CASE("parse: diagnostics carry line and column") {
    SUBCASE("undeclared glyph") {
        const auto e = parse_error("NAME: x\nMAP:\n-----\n|.&.|\n-----\nENDMAP\nSTART: 1 1\nTASK: \"t\"\nSUCCESS: true\n");
        CHECK(e.kind() == ScenarioError::Kind::UnknownGlyph);
        CHECK(e.line() == 4);
        CHECK(e.col() == 3);
    }
    SUBCASE("ragged map") {
        const auto e = parse_error("MAP:\n-----\n|...|\n----\nENDMAP\nSTART: 1 1\nTASK: \"t\"\nSUCCESS: true\n");
        CHECK(e.kind() == ScenarioError::Kind::RaggedMap);
        CHECK(e.line() == 4);
    }
    SUBCASE("unknown atom") {
        const auto e = parse_error("MAP:\n-----\n|...|\n-----\nENDMAP\nSTART: 1 1\nTASK: \"t\"\nSUCCESS: all(fly(3))\n");
        CHECK(e.kind() == ScenarioError::Kind::UnknownAtom);
        CHECK(e.line() == 8);
        CHECK(e.col() == 14);
    }
    SUBCASE("syntax") {
        const auto e = parse_error("MAP:\n-----\n|...|\n-----\nENDMAP\nSTART: one 1\nTASK: \"t\"\nSUCCESS: true\n");
        CHECK(e.kind() == ScenarioError::Kind::SyntaxError);
        CHECK(e.line() == 6);
        CHECK(e.col() == 8);
    }
    SUBCASE("missing section") {
        const auto e = parse_error("MAP:\n-----\n|...|\n-----\nENDMAP\nTASK: \"t\"\nSUCCESS: true\n");
        CHECK(e.kind() == ScenarioError::Kind::SyntaxError);
        CHECK(e.detail().find("START") != std::string::npos);
    }
    SUBCASE("unknown region") {
        const auto e =
            parse_error("MAP:\n-----\n|...|\n-----\nENDMAP\nOBJECT: rock AT random IN nowhere\nSTART: 1 1\nTASK: \"t\"\nSUCCESS: true\n");
        CHECK(e.line() == 6);
        CHECK(e.col() == 27);
    }
    SUBCASE("zero time limit") {
        const auto e =
            parse_error("MAP:\n-----\n|...|\n-----\nENDMAP\nSTART: 1 1\nTASK: \"t\"\nSUCCESS: true\nLIMITS: time=0\n");
        CHECK(e.line() == 9);
    }
}

TEST_CASE("success expressions") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    CHECK_FALSE(evaluate_success(parse_success_expr("any(has_item(\"potion\"), drank(\"fountain\"))"), s));
    CHECK(evaluate_success(parse_success_expr("all()"), s));
    CHECK_FALSE(evaluate_success(parse_success_expr("any()"), s));
    CHECK(evaluate_success(parse_success_expr("not(reached_depth(2))"), s));
    CHECK(evaluate_success(parse_success_expr("on_tile(\"floor\")"), s));
    CHECK(print_success_expr(parse_success_expr("all( has_item(\"a\") ,not(door_open(3,4)))")) ==
          "all(has_item(\"a\"), not(door_open(3, 4)))");
}

TEST_CASE("success: item_in_container after scripted stuffing") {
    GameState s = fixture::game(fixture::kRoom5, "2 2", "OBJECT: rock AT 2 2\nINVENTORY: bag of holding");
    const SuccessExpr goal = parse_success_expr("item_in_container(\"rock\", \"bag of holding\")");
    CHECK_FALSE(evaluate_success(goal, s));
    step(s, Action::simple(Action::Type::Pickup));
    step(s, Action::apply('a'));
    for (const char* k : {"i", "ENTER", "b", "ENTER"}) step(s, Action::key(k));
    CHECK(evaluate_success(goal, s));
    CHECK(s.player.item('b') == nullptr);
}

TEST_CASE("success: evaluation is pure") {
    for (const auto& spec : builtin_scenarios()) {
        const GameState s = new_game(spec, 4);
        const std::string before = state_digest(s);
        evaluate_success(spec.success, s);
        CHECK(state_digest(s) == before);
    }
}

TEST_CASE("builtin scenarios") {
    const auto all = builtin_scenarios();
    CHECK(all.size() >= 12);
    std::set<std::string> names;
    for (const auto& s : all) names.insert(s.name);
    for (const char* n : {"bag", "guided-bag", "multipickup", "wand", "guided-wand", "ordered", "unordered", "alternative",
                          "conditional", "boulder", "focused-boulder", "guided-boulder", "escape", "hint-escape", "carry",
                          "guided-carry"}) {
        CHECK_MESSAGE(names.count(n), n);
    }
    for (const auto& s : all) {
        const bool creative = s.name.find("boulder") != std::string::npos || s.name.find("escape") != std::string::npos ||
                              s.name.find("carry") != std::string::npos;
        CHECK_MESSAGE(s.time_limit == (creative ? 500 : 200), s.name);
    }
}

TEST_CASE("builtin: guided variants differ only in guide text") {
    for (const auto& [base, guided] : {std::pair{"bag", "guided-bag"}, {"wand", "guided-wand"}, {"boulder", "guided-boulder"},
                                       {"escape", "hint-escape"}, {"carry", "guided-carry"}}) {
        ScenarioSpec a = parse_scenario(find_builtin(base)->source);
        ScenarioSpec b = parse_scenario(find_builtin(guided)->source);
        CHECK_FALSE(a.guide.has_value());
        REQUIRE(b.guide.has_value());
        b.guide.reset();
        b.name = a.name;
        CHECK_MESSAGE(a == b, guided);
    }
}

TEST_CASE("builtin: guided-wand advises standing beside the statue") {
    const ScenarioSpec s = parse_scenario(find_builtin("guided-wand")->source);
    REQUIRE(s.guide.has_value());
    CHECK(s.guide->find("next to the statue instead of on top of it") != std::string::npos);
}

TEST_CASE("builtin: escape offers digging, teleporting and polymorph control") {
    const ScenarioSpec s = parse_scenario(find_builtin("escape")->source);
    std::set<std::string> inv;
    for (const auto& e : s.inventory) inv.insert(e.name);
    CHECK(inv.count("wand of digging"));
    CHECK(inv.count("wand of teleportation"));
    CHECK(inv.count("ring of polymorph control"));
}

TEST_CASE("round-trip: print(parse(text)) reparses to the same spec") {
    for (const auto& b : builtin_scenario_sources()) {
        const ScenarioSpec s = parse_scenario(b.source);
        const std::string printed = print_scenario(s);
        CHECK_MESSAGE(parse_scenario(printed) == s, b.name);
        CHECK(print_scenario(parse_scenario(printed)) == printed);
    }
}

TEST_CASE("golden: canonical builtin scenarios") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(NETPLAY_GOLDEN_DIR) / "scenarios";
    for (const auto& b : builtin_scenario_sources()) {
        const fs::path file = dir / (b.name + ".scen");
        const std::string printed = print_scenario(parse_scenario(b.source));
        if (std::getenv("NETPLAY_UPDATE_GOLDEN")) {
            fs::create_directories(dir);
            std::ofstream(file) << printed;
        }
        REQUIRE_MESSAGE(fs::exists(file), file.string());
        const std::string golden = fixture::read_file(file.string());
        CHECK_MESSAGE(golden == printed, b.name);
        CHECK(parse_scenario(golden) == parse_scenario(b.source));
    }
}

TEST_CASE("scenarios/ mirrors the builtins and their solutions") {
    namespace fs = std::filesystem;
    const fs::path dir = NETPLAY_SCENARIO_DIR;
    for (const auto& b : builtin_scenario_sources()) {
        CAPTURE(b.name);
        REQUIRE(fs::exists(dir / (b.name + ".scen")));
        REQUIRE(fs::exists(dir / (b.name + ".rules")));
        CHECK(parse_scenario(fixture::read_file((dir / (b.name + ".scen")).string())) == parse_scenario(b.source));
        CHECK(fixture::read_file((dir / (b.name + ".rules")).string()) == b.solution);
    }
}

TEST_CASE("instantiation is seeded") {
    for (const auto& spec : builtin_scenarios()) {
        CHECK(state_digest(new_game(spec, 17)) == state_digest(new_game(spec, 17)));
    }
}
