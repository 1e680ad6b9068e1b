"""Shared fixtures, toy optimization problems, and the acceptance summary."""

import numpy as np
import pytest

from hpmropt.constraints import ConstraintSpec, evaluate_constraints
from hpmropt.design_space import to_unit_cube

_CRITERION_OUTCOMES = {}


def pytest_runtest_logreport(report):
    name = report.location[2]
    if "test_criterion_" in name and report.when == "call":
        key = name.split("test_criterion_", 1)[1]
        _CRITERION_OUTCOMES[key] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_OUTCOMES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for key in sorted(_CRITERION_OUTCOMES):
        outcome = _CRITERION_OUTCOMES[key]
        word = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {key}: {word}")


class ToyEvaluator:
    """Two-sphere objectives over the unit-cube image of a design, with one
    at-most constraint.  Mirrors the evaluate contract of the real
    environment so optimizers run on it unchanged.
    """

    def __init__(self, limit=0.85, center_a=None, center_b=None):
        self.center_a = np.full(7, 0.25) if center_a is None else np.asarray(center_a)
        self.center_b = np.full(7, 0.75) if center_b is None else np.asarray(center_b)
        self.spec = [ConstraintSpec("toy-limit", qoi="g", kind="at_most", limit=limit)]

    def evaluate(self, design):
        z = to_unit_cube(design)
        objectives = np.array([
            float(np.sum((z - self.center_a) ** 2)),
            float(np.sum((z - self.center_b) ** 2)),
        ])
        report = evaluate_constraints(self.spec, {"g": float(z[0])})
        return objectives, report, {"g": float(z[0])}


class AlwaysFeasibleEvaluator(ToyEvaluator):
    def __init__(self):
        super().__init__(limit=2.0)  # z[0] <= 2 always holds


class Zdt1Evaluator:
    """Classic convex two-objective benchmark on the unit cube, no
    constraints; the optimal front is f2 = 1 - sqrt(f1) at g = 1."""

    def __init__(self):
        self.spec = []

    def evaluate(self, design):
        z = to_unit_cube(design)
        g = 1.0 + 9.0 * np.mean(z[1:])
        f1 = float(z[0])
        f2 = float(g * (1.0 - np.sqrt(f1 / g)))
        report = evaluate_constraints(self.spec, {})
        return np.array([f1, f2]), report, {}


@pytest.fixture
def toy_env():
    return ToyEvaluator()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
