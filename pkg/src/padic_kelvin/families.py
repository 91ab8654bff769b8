"""Deterministic test-function and point families for verification sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from .padic import DEFAULT_PRECISION, PAdic
from .schwartz import Point, TestFunction
from .symbolic import SymbolicScalar


def _vec(n: int, *lead) -> list[Fraction]:
    v = [Fraction(c) for c in lead]
    return v + [Fraction(0)] * (n - len(v))


def kelvin_family(p: int, n: int) -> list[tuple[str, TestFunction]]:
    """Ball indicators with radii p^-2..p^1, off-origin centers and a mixture."""
    one = SymbolicScalar.const
    mix = (
        TestFunction.indicator(p, _vec(n), 2, one(2))
        + TestFunction.indicator(p, _vec(n, 1, Fraction(1, p)), 1, one(Fraction(-1, 3)))
        + TestFunction.indicator(p, _vec(n, p, 0, ), 2, one(5))
    )
    return [
        ("unit_ball", TestFunction.unit_ball(p, n)),
        ("ball_norm1_r2", TestFunction.indicator(p, _vec(n, 1), 2)),
        ("ball_normp_r1", TestFunction.indicator(p, _vec(n, 0, Fraction(1, p)), 1)),
        ("ball_origin_rp", TestFunction.indicator(p, _vec(n), -1)),
        ("mixture3", mix),
    ]


def chain_family(p: int, n: int) -> list[tuple[str, TestFunction]]:
    """Functions vanishing near the origin."""
    one = SymbolicScalar.const
    return [
        ("ball_norm1_r1", TestFunction.indicator(p, _vec(n, 1), 1)),
        ("ball_normp_r0", TestFunction.indicator(p, _vec(n, 0, Fraction(1, p)), 0, one(3))),
        (
            "pair",
            TestFunction.indicator(p, _vec(n, p), 2, one(Fraction(1, 2)))
            + TestFunction.indicator(p, _vec(n, 1, 1), 3, one(-2)),
        ),
    ]


def random_padic(rng: random.Random, p: int, valuation: int, precision: int) -> PAdic:
    unit = rng.randrange(1, p**precision)
    while unit % p == 0:
        unit = rng.randrange(1, p**precision)
    return PAdic(p, valuation, unit, precision)


def random_point(rng: random.Random, p: int, n: int, k: int, precision: int = DEFAULT_PRECISION) -> Point:
    """A point with ||x|| = p^k exactly."""
    lead = rng.randrange(n)
    coords = []
    for j in range(n):
        if j == lead:
            coords.append(random_padic(rng, p, -k, precision))
        elif rng.random() < 0.2:
            coords.append(PAdic.zero(p, precision - k))
        else:
            coords.append(random_padic(rng, p, -k + rng.randrange(0, 4), precision))
    return tuple(coords)


def shell_points(p: int, n: int, seed: int, per_shell: int = 3, shells=range(-3, 4), precision: int = DEFAULT_PRECISION):
    rng = random.Random(f"{seed}:{p}:{n}")
    return [random_point(rng, p, n, k, precision) for k in shells for _ in range(per_shell)]


def random_test_function(rng: random.Random, p: int, n: int, terms: int = 3, radii=(-1, 0, 1), complex_coeffs: bool = False) -> TestFunction:
    """Sum of a few ball indicators with small centers."""
    f = TestFunction.zero(p, n)
    for _ in range(terms):
        r = rng.choice(radii)
        center = [Fraction(rng.randrange(p**2), p) for _ in range(n)]
        if complex_coeffs:
            c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        else:
            c = SymbolicScalar.const(Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)))
        f = f + TestFunction.indicator(p, center, r, c)
    return f
