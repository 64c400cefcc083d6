"""Python access to the netplay simulator and evaluation harness."""

import json

from ._netplay import (
    Game,
    ScenarioError,
    builtin_names,
    builtin_solution,
    builtin_source,
    normalize_scenario,
)
from ._netplay import run_batch as _run_batch

__all__ = [
    "Game",
    "ScenarioError",
    "builtin_names",
    "builtin_solution",
    "builtin_source",
    "normalize_scenario",
    "run_batch",
]


def run_batch(agent, scenario=None, runs=1, seed=0, rules=None, threads=1,
              turn_cap=5000, out_dir="", censor=False, text=False):
    """Run a batch and return the parsed summary (plus the text report if text=True)."""
    summary, report = _run_batch(agent, scenario, runs, seed, rules, threads,
                                 turn_cap, out_dir, censor)
    data = json.loads(summary)
    return (data, report) if text else data
