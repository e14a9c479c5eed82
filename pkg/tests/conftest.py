import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from asymlin import AsymNorm, random_norm_generators

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

FIXTURES = __import__("pathlib").Path(__file__).resolve().parents[1] / "src" / "asymlin" / "fixtures"

rationals = st.builds(Fraction, st.integers(-12, 12), st.sampled_from([1, 2, 3, 4, 6]))


def vectors(n):
    return st.tuples(*[rationals] * n)


@st.composite
def norms(draw, max_dim=3, symmetric=None):
    dim = draw(st.integers(1, max_dim))
    sym = draw(st.booleans()) if symmetric is None else symmetric
    seed = draw(st.integers(0, 10**6))
    return AsymNorm(dim, random_norm_generators(random.Random(seed), dim, 6, sym))


@pytest.fixture
def rng():
    return random.Random(12345)


def cube_points(n, steps=4):
    """Grid points of [-2, 2]^n, an independent sampling oracle."""
    ticks = [Fraction(k, steps) * 2 for k in range(-steps, steps + 1)]
    return list(itertools.product(ticks, repeat=n))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
