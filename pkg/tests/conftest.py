import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from padic_kelvin.families import random_point
from padic_kelvin.padic import PAdic

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

PRIMES = [2, 3, 5]


@pytest.fixture
def rng():
    return random.Random(20240611)


def padics(p: int, precision: int = 24, vmin: int = -5, vmax: int = 5):
    """Nonzero p-adics with a random unit and valuation."""

    def build(v, u):
        while u % p == 0:
            u += 1
        return PAdic(p, v, u % p**precision, precision)

    return st.builds(build, st.integers(vmin, vmax), st.integers(1, p**precision - 1))


def rationals(max_den: int = 50):
    return st.builds(Fraction, st.integers(-500, 500), st.integers(1, max_den))


def points(p: int, n: int, kmin: int = -3, kmax: int = 3):
    return st.builds(
        lambda seed, k: random_point(random.Random(seed), p, n, k),
        st.integers(0, 10**9),
        st.integers(kmin, kmax),
    )


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
