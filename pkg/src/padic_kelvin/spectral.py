"""Fourier analysis on Q_p^n in complex double precision.

Character: chi(x) = exp(2 pi i {x}_p), trivial on Z_p and nontrivial on
p^-1 Z_p.  Pairing: x . xi = sum_j x_j xi_j.  Transform:

    (F f)(xi) = int chi(x . xi) f(x) dx,   f(x) = int chi(-x . xi) (F f)(xi) dxi.

The transform of 1_{B(a, p^-r)} is chi(a . xi) p^(-rn) 1_{B(0, p^r)}; the
character factor is expanded into sub-balls on which it is constant, so
transforms of test functions are again test functions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import DomainError, ResourceError
from .extension import norm_exponent
from .padic import INF, PAdic, check_prime, valuation_of_rational
from .schwartz import MAX_SUBBALLS, Ball, Point, TestFunction, canonical_residue
from .symbolic import SymbolicScalar

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class Character:
    p: int

    def __post_init__(self):
        check_prime(self.p)

    def __call__(self, x) -> complex:
        f = x.fractional_part() if isinstance(x, PAdic) else canonical_residue(x, self.p, 0)
        if f == 0:
            return complex(1.0)
        return cmath.exp(TWO_PI_I * float(f))


def pairing(x: Sequence, xi: Sequence):
    total = 0
    for a, b in zip(x, xi):
        total = a * b + total
    return total


def _as_complex(c) -> complex:
    if isinstance(c, SymbolicScalar):
        if len(c.num) > 1 or c.den != (1,):
            raise DomainError("Fourier pipeline needs constant coefficients")
        return complex(float(c.num[0])) if c.num else 0j
    return complex(c)


def _ball_transform(p: int, n: int, b: Ball, c: complex, sign: int):
    """Terms of the transform of c * 1_b, expanded to constant-character balls."""
    r = b.radius_exp
    k_a = max(0, int(b.center_norm_exp())) if not b.contains_origin() else 0
    level = max(-r, k_a)
    scale = c * float(Fraction(p) ** (-r * n))
    support = Ball(p, (Fraction(0),) * n, -r)
    chi = Character(p)
    return [(sb, scale * chi(sign * pairing(b.center, sb.center))) for sb in support.sub_balls(level)]


def fourier_transform(f: TestFunction, inverse: bool = False) -> TestFunction:
    """F f (or the inverse transform), canonicalized."""
    sign = -1 if inverse else 1
    budget = 0
    terms = []
    for b, c in f.terms:
        c = _as_complex(c)
        k_a = max(0, int(b.center_norm_exp())) if not b.contains_origin() else 0
        budget += f.p ** (f.n * (max(-b.radius_exp, k_a) + b.radius_exp))
        if budget > MAX_SUBBALLS:
            raise ResourceError("Fourier expansion exceeds the sub-ball guard")
        terms.extend(_ball_transform(f.p, f.n, b, c, sign))
    return TestFunction(f.p, f.n, terms).canonicalize()


def inverse_fourier_transform(f: TestFunction) -> TestFunction:
    return fourier_transform(f, inverse=True)


def _ball_contains_origin_integral(p: int, n: int, R: int, j: float, alpha: float) -> float:
    """int_{B(0, p^-R)} chi(-x . xi) ||xi||^alpha dxi for ||x|| = p^j."""
    w = 1 - float(p) ** (-n)
    t = float(p) ** (alpha + n)

    def head(K):
        # sum_{k <= K} p^(k(alpha+n))
        return t**K / (1 - 1 / t)

    if j == -INF:
        return w * head(-R)
    j = int(j)
    total = w * head(min(-R, -j))
    if -j + 1 <= -R:
        total -= float(p) ** ((1 - j) * alpha) * float(p) ** (-j * n)
    return total


def vt_spectral_at(phi: TestFunction, x: Point, alpha: float, transform: TestFunction | None = None) -> complex:
    """F^-1(||xi||^alpha F phi)(x) by exact shellwise integration.

    ``transform`` may carry a precomputed F phi when sweeping many points.
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    p, n = phi.p, phi.n
    x = tuple(x)
    j = norm_exponent(x)
    chi = Character(p)
    total = 0j
    for b, c in (transform if transform is not None else fourier_transform(phi)).terms:
        R = b.radius_exp
        if b.contains_origin():
            total += c * _ball_contains_origin_integral(p, n, R, j, alpha)
        elif j <= R:
            e = b.center_norm_exp()
            total += c * float(p) ** (e * alpha) * chi(-pairing(x, b.center)) * float(p) ** (-R * n)
    return total


def _weighted_measure(p: int, n: int, b: Ball, ell: int) -> float:
    """int_b max(1, ||xi||)^ell dxi."""
    if not b.contains_origin():
        e = b.center_norm_exp()
        return max(1.0, float(p) ** e) ** ell * float(b.measure())
    if b.radius_exp >= 0:
        return float(b.measure())
    w = 1 - float(p) ** (-n)
    return 1.0 + sum(w * float(p) ** (k * (n + ell)) for k in range(1, -b.radius_exp + 1))


def _common_refinement(f: TestFunction, g: TestFunction):
    r = max(f.finest_radius_exp() or 0, g.finest_radius_exp() or 0)
    pad_f = f + TestFunction(f.p, f.n, [(Ball(f.p, (Fraction(0),) * f.n, r), 0j)])
    pad_g = g + TestFunction(g.p, g.n, [(Ball(g.p, (Fraction(0),) * g.n, r), 0j)])
    return dict(pad_f.canonicalize().terms), dict(pad_g.canonicalize().terms)


def sobolev_inner(phi: TestFunction, psi: TestFunction, ell: int) -> complex:
    """<phi, psi>_ell = int max(1, ||xi||)^ell phi^(xi) conj(psi^(xi)) dxi."""
    if ell < 0:
        raise DomainError("ell must be nonnegative")
    fa, fb = _common_refinement(fourier_transform(phi), fourier_transform(psi))
    total = 0j
    for b, c in fa.items():
        d = fb.get(b)
        if d is not None:
            total += c * d.conjugate() * _weighted_measure(phi.p, phi.n, b, ell)
    return total


def l2_norm_squared(f: TestFunction) -> float:
    """int |f|^2 from the canonical (disjoint-ball) form."""
    return sum(abs(_as_complex(c)) ** 2 * float(b.measure()) for b, c in f.canonicalize().terms)


def make_eigenfunction(u0: Sequence, p: int) -> tuple[TestFunction, SymbolicScalar]:
    """chi(u0 . x) 1_{Z_p^n}(x) for ||u0|| = p, with eigenvalue p^alpha = 1/s.

    The transform is the indicator of the unit ball about -u0, where
    ||xi|| = p identically, so the operator acts as multiplication by p^alpha.
    """
    check_prime(p)
    u0 = tuple(Fraction(c) for c in u0)
    if max((-valuation_of_rational(c, p) for c in u0 if c), default=-INF) != 1:
        raise DomainError("u0 must have norm exactly p")
    n = len(u0)
    chi = Character(p)
    terms = [
        (Ball(p, tuple(Fraction(d) for d in ds), 1), chi(pairing(u0, ds)))
        for ds in product(range(p), repeat=n)
    ]
    return TestFunction(p, n, terms), SymbolicScalar.s().inverse()
