"""Symplectic intersection indices and Sturm-type theorem checks."""

import json

from . import _core
from ._core import (
    DegeneratePathError,
    InputError,
    PreconditionError,
    RefinementError,
    UnsupportedError,
    clm_constant_flow,
    commands,
    cz_constant_flow,
    kepler_curvature,
    random_lagrangian,
    theorem_ids,
    triple_index,
)

SCHEMA_VERSION = _core.SCHEMA_VERSION

__all__ = [
    "DegeneratePathError",
    "InputError",
    "PreconditionError",
    "RefinementError",
    "UnsupportedError",
    "SCHEMA_VERSION",
    "Result",
    "clm_constant_flow",
    "commands",
    "cz_constant_flow",
    "kepler_curvature",
    "parse_problem",
    "random_lagrangian",
    "run",
    "theorem_ids",
    "triple_index",
    "verify",
]


class Result:
    """Outcome of one command: exit code, parsed JSON and the rendered text."""

    def __init__(self, exit_code, data, text):
        self.exit_code = exit_code
        self.data = data
        self.text = text

    def __repr__(self):
        return f"Result(exit_code={self.exit_code})"


def _text(problem):
    if problem is None:
        return ""
    if isinstance(problem, str):
        return problem
    return json.dumps(problem)


def parse_problem(problem, command):
    """Validate a problem (dict or JSON text) and return its normal form."""
    return json.loads(_core.parse_problem(_text(problem), command))


def run(command, problem=None, *, format="json", **flags):
    """Run a command; flags mirror the command line (tol, grid, seed, jobs, theorem, trials, dim, h, e)."""
    code, data, text = _core.run_command(command, _text(problem), format=format, **flags)
    return Result(code, json.loads(data), text)


def verify(theorem, trials=10, seed=7, dim=0, jobs=1):
    """Seeded random instances of a theorem as a list of report dicts."""
    return json.loads(_core.verify(theorem, trials, seed, dim, jobs))
