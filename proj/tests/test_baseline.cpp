#include "baseline_oracle.hpp"
#include "support.hpp"

#include "netplay/baseline.hpp"

#include <doctest.h>

using namespace netplay;

using fixture::give;
using fixture::oracle_rule;

TEST_CASE("baseline: a menu outranks an adjacent hostile") {
    GameState s = fixture::game(fixture::kRoom5, "2 2", "OBJECT: rock AT 2 2\nOBJECT: dagger AT 2 2\nMONSTER: jackal AT 3 2 hostile");
    step(s, Action::simple(Action::Type::Pickup));
    REQUIRE(s.open_menu.has_value());
    Tracker t;
    t.update(s, {});
    const BaselineDecision d = BaselineAgent().select_skill(t, s);
    CHECK(d.rule == 1);
    CHECK(format_call(d.call) == "press_key(key=\"ESC\")");
}

TEST_CASE("baseline: fights the nearest hostile") {
    GameState s = fixture::game(fixture::kRoom5, "1 1", "MONSTER: newt AT 5 3 hostile\nMONSTER: jackal AT 3 1 hostile");
    Tracker t;
    t.update(s, {});
    const BaselineDecision d = BaselineAgent().select_skill(t, s);
    CHECK(d.rule == 2);
    CHECK(format_call(d.call) == "move_to(x=3, y=1)");
}

TEST_CASE("baseline: hp 11/20 without a potion prays") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    s.player.hp = 11;
    s.player.max_hp = 20;
    Tracker t;
    t.update(s, {});
    BaselineDecision d = BaselineAgent().select_skill(t, s);
    CHECK(d.rule == 3);
    CHECK(d.call.skill == "pray");
    give(s, "potion of healing");
    d = BaselineAgent().select_skill(t, s);
    CHECK(format_call(d.call) == "quaff(letter=\"a\")");
    s.player.hp = 12;  // exactly 60%
    CHECK(BaselineAgent().select_skill(t, s).rule != 3);
}

TEST_CASE("baseline: unidentified potions are not trusted, and prayer needs no cooldown") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    give(s, "potion of healing", false);
    s.player.hp = 5;
    s.player.prayer_cooldown = 300;
    Tracker t;
    t.update(s, {});
    CHECK(BaselineAgent().select_skill(t, s).rule == 7);
}

TEST_CASE("baseline: eats when hungry, picks up potions and food") {
    GameState s = fixture::game(fixture::kRoom5, "2 2", "OBJECT: potion of water AT 5 3\nOBJECT: rock AT 4 3");
    Tracker t;
    t.update(s, {});
    BaselineAgent agent;
    BaselineDecision d = agent.select_skill(t, s);
    CHECK(d.rule == 5);
    CHECK(format_call(d.call) == "pickup(x=5, y=3)");
    REQUIRE(d.item_id != 0);
    // Two failed attempts and the item is ignored.
    agent.observe(d, {});
    agent.observe(d, {});
    CHECK(agent.select_skill(t, s).rule != 5);

    give(s, "food ration");
    s.player.nutrition = 100;
    d = agent.select_skill(t, s);
    CHECK(d.rule == 4);
    CHECK(format_call(d.call) == "eat(letter=\"a\")");
}

TEST_CASE("baseline: takes the stairs once nothing is left to explore") {
    GameState s = fixture::game(
        "-------\n"
        "|.....|\n"
        "|....>|\n"
        "|.....|\n"
        "-------\n",
        "1 1");
    Tracker t;
    t.update(s, {});
    BaselineDecision d = BaselineAgent().select_skill(t, s);
    CHECK(d.rule == 6);
    CHECK(format_call(d.call) == "down(x=5, y=2)");
    s.player.pos = {5, 2};
    t.update(s, {});
    CHECK(format_call(BaselineAgent().select_skill(t, s).call) == "down()");
}

TEST_CASE("baseline: explores by default, kicks locked doors, else waits") {
    GameState s = fixture::game(fixture::kRoom5, "2 2");
    Tracker t;
    t.update(s, {});
    CHECK(format_call(BaselineAgent().select_skill(t, s).call) == "wait()");

    GameState locked = fixture::game(
        "-------\n"
        "|.....|\n"
        "|.....+\n"
        "|.....|\n"
        "-------\n",
        "2 2");
    locked.level().set({6, 2}, TileKind::DoorLocked);
    Tracker lt;
    lt.update(locked, {});
    CHECK(format_call(BaselineAgent().select_skill(lt, locked).call) == "kick(x=6, y=2)");

    GameState open = fixture::game(
        "-------      \n"
        "|.....|      \n"
        "|.....+##### \n"
        "|.....|      \n"
        "-------      \n",
        "2 2");
    Tracker ot;
    ot.update(open, {});
    const BaselineDecision d = BaselineAgent().select_skill(ot, open);
    CHECK(d.rule == 7);
    CHECK(d.call.skill == "explore_level");
}

TEST_CASE("property: fired rule is the first satisfied condition") {
    int mismatches = 0;
    std::map<int, int> fired;
    for (uint64_t seed = 0; seed < 1000; ++seed) {
        GameState s = new_full_game(seed % 50);
        Tracker t;
        t.update(s, {});
        Rng rng(seed);
        const int walk = rng_range(rng, 0, 60);
        for (int i = 0; i < walk && s.running(); ++i) {
            const StepResult r = step(s, s.open_menu ? Action::key("ESC") : Action::move(kCompass[rng_range(rng, 0, 7)]));
            t.update(s, r.messages);
        }
        if (!s.running()) continue;
        s.player.max_hp = rng_range(rng, 10, 40);
        s.player.hp = rng_range(rng, 1, s.player.max_hp);
        s.player.nutrition = rng_range(rng, -10, 1200);
        s.player.prayer_cooldown = rng_range(rng, 0, 1) ? 0 : rng_range(rng, 1, 500);
        if (rng_range(rng, 0, 2) == 0) give(s, "potion of healing", rng_range(rng, 0, 1) == 1);
        if (rng_range(rng, 0, 2) == 0) give(s, "food ration");
        if (rng_range(rng, 0, 5) == 0) {
            MenuState menu;
            menu.kind = MenuKind::DirectionPrompt;
            menu.purpose = MenuPurpose::Open;
            menu.prompt = "In what direction?";
            s.open_menu = menu;
        }
        BaselineConfig cfg;
        BaselineAgent agent(cfg);
        std::map<int, int> tries;
        for (const auto& ki : t.items_on_level()) {
            if (rng_range(rng, 0, 1)) {
                tries[ki.id] = rng_range(rng, 0, 2);
            }
        }
        // Feed the agent the same attempt counts through its public interface.
        for (const auto& [id, n] : tries) {
            for (int k = 0; k < n; ++k) {
                BaselineDecision fake;
                fake.rule = 5;
                fake.item_id = id;
                agent.observe(fake, {});
            }
        }
        const int expect = oracle_rule(t, s, tries);
        const BaselineDecision d = agent.select_skill(t, s);
        const auto conds = rule_conditions(t, s, cfg, tries);
        const int first = static_cast<int>(std::find(conds.begin(), conds.end(), true) - conds.begin()) + 1;
        if (d.rule != expect || first != expect) {
            ++mismatches;
            MESSAGE("seed " << seed << ": agent " << d.rule << ", conditions " << first << ", oracle " << expect);
        }
        ++fired[expect];
    }
    CHECK(mismatches == 0);
    for (int r = 1; r <= 7; ++r) {
        if (r == 6) continue;  // stairs with nothing left to explore is rare after a short walk
        CHECK_MESSAGE(fired[r] > 0, "rule " << r << " never exercised");
    }
}

TEST_CASE("run_baseline: deterministic and offline") {
    auto play = [](uint64_t seed) {
        GameState s = new_full_game(seed);
        Tracker t;
        t.update(s, {});
        BaselineConfig c;
        c.turn_limit = 400;
        const RunRecord r = run_baseline(s, t, c);
        return std::pair{r, state_digest(s)};
    };
    for (uint64_t seed : {3u, 11u}) {
        const auto a = play(seed);
        const auto b = play(seed);
        CHECK(a.first == b.first);
        CHECK(a.second == b.second);
        CHECK(a.first.llm_calls == 0);
        CHECK_FALSE(a.first.calls.empty());
        for (const auto& c : a.first.calls) CHECK(c.prompt_digest.empty());
    }
}

TEST_CASE("run_baseline: turn limit and goal hooks") {
    GameState s = new_full_game(5);
    Tracker t;
    t.update(s, {});
    BaselineConfig c;
    c.turn_limit = 50;
    const RunRecord r = run_baseline(s, t, c);
    if (r.outcome != RunOutcome::GameEnded) {
        CHECK(r.outcome == RunOutcome::TimeLimit);
        CHECK(s.turn >= 50);
    }
    GameState s2 = new_full_game(5);
    Tracker t2;
    t2.update(s2, {});
    RunHooks h;
    h.goal = [](const GameState& g) { return g.turn >= 10; };
    CHECK(run_baseline(s2, t2, {}, h).outcome == RunOutcome::GoalReached);
    CHECK(s2.turn == 10);
}
