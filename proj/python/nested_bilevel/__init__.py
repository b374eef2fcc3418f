"""Python interface to the nested evolutionary bilevel solver.

Configurations are dicts of the same flat keys the command-line tool reads
from JSON files, e.g. {"preset": "market-2l5f", "ul.pop_size": 40}.
"""

import json

from . import _core
from ._core import ConfigError, ContractViolation, EvaluationError, cost, price

__all__ = [
    "ConfigError",
    "ContractViolation",
    "EvaluationError",
    "cost",
    "describe_market",
    "price",
    "run",
    "scenario",
    "smd_optimum",
    "solve",
    "verify",
]


def _config(config, overrides):
    merged = dict(config or {})
    merged.update(overrides)
    return json.dumps(merged)


def solve(config=None, seed=1000, **overrides):
    """One seeded run. Returns the run record, with the market outcome or the
    SMD accuracy attached."""
    return json.loads(_core.solve(_config(config, overrides), seed))


def run(config=None, **overrides):
    """A campaign of config["runs"] seeded runs; returns the summary."""
    return json.loads(_core.run(_config(config, overrides)))


def verify(candidate, config=None, **overrides):
    """Grid checks around `candidate`, an individual dict as found in
    solve(...)["best"]."""
    return json.loads(_core.verify(_config(config, overrides), json.dumps(candidate)))


def scenario(leader_q, config=None, restarts=5, **overrides):
    """Followers' best response to fixed leader productions."""
    return json.loads(_core.scenario(_config(config, overrides), list(leader_q), restarts))


def describe_market(upper, lower, config=None, **overrides):
    """Per-period outcomes for given representative leader and follower genomes."""
    return json.loads(_core.describe_market(_config(config, overrides), json.dumps(upper), json.dumps(lower)))


def smd_optimum(problem_id, n_vars=10):
    return json.loads(_core.smd_optimum(problem_id, n_vars))
