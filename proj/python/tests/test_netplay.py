import random

import pytest

import netplay

ROOM = """NAME: tiny
MAP:
-------
|.....|
|.....|
-------
ENDMAP
START: 1 1
OBJECT: dagger AT 4 2
TASK: "Pick up the dagger."
SUCCESS: has_item("dagger")
"""


def test_builtins_listed():
    names = netplay.builtin_names()
    assert len(names) == 16
    assert "wand" in names
    assert netplay.builtin_solution("ordered").strip()
    with pytest.raises(KeyError):
        netplay.builtin_source("nope")


def test_normalize_is_idempotent():
    for name in netplay.builtin_names():
        once = netplay.normalize_scenario(netplay.builtin_source(name))
        assert netplay.normalize_scenario(once) == once


def test_scenario_error_carries_position():
    with pytest.raises(netplay.ScenarioError) as info:
        netplay.normalize_scenario("garbage")
    _, kind, line, col = info.value.args
    assert kind == "SyntaxError"
    assert line == 1
    assert col >= 1
    assert isinstance(info.value, ValueError)


def test_walk_and_pick_up():
    g = netplay.Game(ROOM, seed=1)
    assert g.player["x"] == 1 and g.player["y"] == 1
    assert not g.goal_met()
    g.step("move e")
    g.step("move e")
    g.step("move se")
    assert (g.player["x"], g.player["y"]) == (4, 2)
    g.step("pickup")
    assert g.goal_met()
    assert g.turn >= 4


def test_invalid_action_text():
    g = netplay.Game(ROOM)
    with pytest.raises(ValueError):
        g.step("teleport everywhere")


def test_same_seed_same_digest():
    def play(seed):
        g = netplay.Game(None, seed)
        rng = random.Random(seed)
        for _ in range(100):
            if g.status != "running":
                break
            g.step("move " + rng.choice(["n", "ne", "e", "se", "s", "sw", "w", "nw"]))
        return g.digest(), g.render()

    assert play(7) == play(7)
    assert play(7) != play(8)


def test_observation_sections():
    text = netplay.Game("wand", 0).observation()
    for title in ("Status:", "Map:", "Monsters:", "Inventory:"):
        assert title in text


def test_scripted_batch_succeeds():
    data, report = netplay.run_batch("scripted", "ordered", runs=3, text=True)
    assert data["successes"] == 3
    assert len(data["runs"]) == 3
    assert "Success 3/3" in report


def test_handcrafted_batch_makes_no_llm_calls():
    data = netplay.run_batch("handcrafted", runs=2, turn_cap=200, threads=2)
    assert sum(data["outcomes"].values()) == 2
    assert all(r["llm_calls"] == 0 for r in data["runs"])


def test_custom_rules_and_bad_agent():
    data = netplay.run_batch("scripted", "wand", rules="always: not json\n")
    assert data["successes"] == 0
    with pytest.raises(ValueError):
        netplay.run_batch("gpt")
