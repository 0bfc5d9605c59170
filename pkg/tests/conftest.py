import math
import sys

import numpy as np
import pytest
from hypothesis import assume, settings
from hypothesis import strategies as st

from cournot_evasion import AdjustmentSpeeds, ModelParams

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SET_A = ModelParams(q=0.3, s=40.0, t1=0.16, c1=0.2, c2=2.0)
SET_B = ModelParams(q=0.3, s=40.0, t1=0.16, c1=0.2, c2=1.5)
SPEEDS = AdjustmentSpeeds(k1=0.05, k2=0.01, h1=0.05, h2=0.01)


@pytest.fixture
def set_a():
    return SET_A


@pytest.fixture
def set_b():
    return SET_B


@pytest.fixture
def speeds():
    return SPEEDS


def feasible_from(q, s, t1, c1, u):
    """Place c2 at log-fraction ``u`` of the admissible interval."""
    margin = q * s + q - 1.0
    lo = (1.0 - q) * c1 / margin
    hi = margin * c1 / (1.0 - q)
    return ModelParams(q, s, t1, c1, lo * (hi / lo) ** u)


@st.composite
def feasible_params(draw):
    q = draw(st.floats(0.05, 0.95))
    s = draw(st.floats(1.0, 200.0))
    assume(q * s + q - 1.0 > 0.05)
    t1 = draw(st.floats(0.01, 0.9))
    c1 = draw(st.floats(0.05, 5.0))
    u = draw(st.floats(0.02, 0.98))
    return feasible_from(q, s, t1, c1, u)


@st.composite
def adjustment_speeds(draw):
    rates = [math.exp(draw(st.floats(-5.0, 1.0))) for _ in range(4)]
    return AdjustmentSpeeds(*rates)


def random_feasible(rng: np.random.Generator, n: int) -> list[ModelParams]:
    out = []
    while len(out) < n:
        q, s = rng.uniform(0.05, 0.95), rng.uniform(1.0, 200.0)
        if q * s + q - 1.0 <= 0.05:
            continue
        out.append(feasible_from(q, s, rng.uniform(0.01, 0.9), rng.uniform(0.05, 5.0),
                                 rng.uniform(0.02, 0.98)))
    return out


def random_speeds(rng: np.random.Generator) -> AdjustmentSpeeds:
    return AdjustmentSpeeds(*np.exp(rng.uniform(-5.0, 1.0, 4)))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
