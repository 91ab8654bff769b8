"""Brute-force shell summation, independent of the closed forms in ``operators``.

The integral around x is cut into spheres S_k(x) = {||y - x|| = p^k}.  On each
sphere the kernel is constant and the integral of the function is obtained
from measures of ball intersections (two ultrametric balls are nested or
disjoint), so each shell term is exact up to float rounding.  Shells are
summed outward until an explicit geometric bound on the remainder drops below
``target_error``.
"""

from __future__ import annotations

import math

from .errors import DivergenceError, PrecisionError
from .operators import PiecewiseRadialFunction
from .padic import INF
from .symbolic import to_number

MAX_SHELLS = 200


class _Geometry:
    def __init__(self, x, p: int, n: int):
        self.x, self.p, self.n = x, p, n
        self._exact: dict = {}

    def _distance(self, a):
        """(known exponent, precision bound) of ||x - a||, computed once per center."""
        # keyed by identity: hashing Fraction tuples dominates otherwise
        hit = self._exact.get(id(a))
        if hit is None or hit[0] is not a:
            known = bound = -INF
            for xj, aj in zip(self.x, a):
                d = xj - aj
                if d.is_zero:
                    bound = max(bound, -d.precision)
                else:
                    known = max(known, -d.valuation)
            hit = self._exact[id(a)] = (a, known, bound)
        return hit[1], hit[2]

    def ball_cap(self, k, a, j) -> float:
        """measure of B(x, p^k) intersected with B(a, p^j)."""
        if k is None or j is None:
            return 0.0
        if self.dist(a, max(k, j) + 1) is None:
            return float(self.p) ** (self.n * min(k, j))
        return 0.0

    def shell_ball(self, k, a, j) -> float:
        """measure of S_k(x) intersected with B(a, p^j)."""
        return self.ball_cap(k, a, j) - self.ball_cap(k - 1, a, j)

    def shell_sphere(self, k, a, i) -> float:
        """measure of S_k(x) intersected with S_i(a)."""
        return self.shell_ball(k, a, i) - self.shell_ball(k, a, i - 1)

    def dist(self, a, floor):
        """Same contract as ``schwartz.distance_exp``."""
        known, bound = self._distance(a)
        if known >= bound:
            return known if known >= floor else None
        if bound < floor:
            return None
        raise PrecisionError(f"||x - a|| undecidable below p^{bound}")


def _scales(u: PiecewiseRadialFunction, geo: _Geometry) -> tuple[int, int]:
    """(first shell on which u may vary, first shell past every feature)."""
    starts, tops = [], []
    for b, _ in u.compact.terms:
        e = geo.dist(b.center, 1 - b.radius_exp)
        starts.append(1 - b.radius_exp if e is None else e)
        tops.append(starts[-1])
    for t in u.tails:
        j = geo.dist(t.centered(u.n), t.start_shell)
        starts.append(t.start_shell if j is None else j)
        tops.append(starts[-1])
    if not starts:
        return 0, 0
    return min(starts), max(tops) + 1


def shell_sum_oracle(u, x, alpha: float, kind: str = "vt", target_error: float = 1e-15):
    """Numeric value of the operator integral at x, including its constant.

    kind="vt":    c int (u(x) - u(y)) ||x-y||^-(n+alpha) dy
    kind="riesz": d int ||x-y||^(alpha-n) u(y) dy
    """
    u = PiecewiseRadialFunction.of(u)
    p, n = u.p, u.n
    x = tuple(x)
    geo = _Geometry(x, p, n)
    balls = [(b.center, -b.radius_exp, to_number(c, alpha, p)) for b, c in u.compact.terms]
    tails = [
        (t.centered(n), t.start_shell, to_number(t.coeff, alpha, p), to_number(t.ratio, alpha, p))
        for t in u.tails
    ]
    ux = to_number(u.evaluate(x), alpha, p)
    w = 1 - float(p) ** (-n)
    # below k_lo u is constant on B(x, p^k), so vt shell terms vanish there
    k_lo, k_steady = _scales(u, geo)

    def shell_integral(k):
        total = 0.0
        for a, j, c in balls:
            total += c * geo.shell_ball(k, a, j)
        for a, m, c, rho in tails:
            e = geo.dist(a, m - 1)
            top = max(k, e if e is not None else k) + 1
            for i in range(m, top + 1):
                total += c * rho**i * geo.shell_sphere(k, a, i)
        return total

    if kind == "vt":
        const = (p**alpha - 1) / (1 - float(p) ** (-alpha - n))

        def kernel(k):
            return float(p) ** (-k * (n + alpha))

        def term(k):
            return kernel(k) * (ux * w * float(p) ** (k * n) - shell_integral(k))

        s = float(p) ** (-alpha)
        outer_ratios = [(abs(ux) * w, s)] + [(abs(c) * w, abs(s * rho)) for _, _, c, rho in tails]
        inner_total = 0.0
    elif kind == "riesz":
        if not 0 < alpha < n:
            raise DivergenceError("the potential needs 0 < alpha < n")
        const = (1 - float(p) ** (-alpha)) / (1 - float(p) ** (alpha - n))

        def kernel(k):
            return float(p) ** (k * (alpha - n))

        def term(k):
            return kernel(k) * shell_integral(k)

        lam = float(p) ** alpha
        outer_ratios = [(abs(c) * w, abs(lam * rho)) for _, _, c, rho in tails]
        # below k_lo the function equals u(x): sum those shells downward
        inner_total, k = 0.0, k_lo - 1
        for _ in range(MAX_SHELLS * 10):
            inner_total += ux * w * lam**k
            bound = abs(ux) * w * lam ** (k - 1) / (1 - 1 / lam)
            if bound < target_error:
                break
            k -= 1
        else:
            raise DivergenceError("inner shells do not decay")
    else:
        raise ValueError(f"unknown kind {kind!r}")

    for _, q in outer_ratios:
        if q >= 1:
            raise DivergenceError(f"outer shells decay with ratio {q} >= 1")

    total = inner_total
    k = k_lo
    for count in range(MAX_SHELLS):
        total += term(k)
        if k >= k_steady:
            bound = sum(amp * q ** (k + 1) / (1 - q) for amp, q in outer_ratios)
            if bound < target_error:
                return const * total
        k += 1
    raise DivergenceError(f"no decay to {target_error} within {MAX_SHELLS} shells")


def oracle_agrees(symbolic_value, numeric_value, alpha: float, p: int, tol: float = 1e-12) -> bool:
    v = to_number(symbolic_value, alpha, p)
    return abs(v - numeric_value) <= tol * max(1.0, abs(numeric_value))


def relative_gap(a, b) -> float:
    return abs(a - b) / max(1.0, abs(b))
