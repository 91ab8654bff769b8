"""Pointwise evaluation of the Vladimirov-Taibleson operator and its inverse.

Every integrand met here is constant on the spheres ``||y - x|| = p^k`` once
the function is split into atoms (ball indicators and geometric radial
tails), so each integral is a finite sum of shell terms plus geometric
series.  All formulas are written over a scalar ``s`` which is either the
indeterminate of :class:`SymbolicScalar` (exact mode) or the float
``p**(-alpha)`` (numeric mode); the same code serves both.

Shell bookkeeping with ``Q = p^n`` and ``w = 1 - 1/Q``: the sphere of radius
``p^k`` has measure ``w Q^k``.  A kernel equal to ``kappa**k`` on that sphere
integrates to ``w * lam**k`` with ``lam = Q * kappa``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DivergenceError, DomainError, PrecisionError
from .extension import ExtElement, ext_abs, get_context, iso_U, iso_U_inv
from .padic import INF
from .schwartz import Point, TestFunction, distance_exp
from .symbolic import (
    S,
    SymbolicScalar,
    convergence_region,
    geometric_tail,
    scalar_c,
    scalar_d,
    scalar_dl,
    to_number,
)


@dataclass(frozen=True)
class RadialTail:
    """coeff * ratio**k on the sphere ||y - center|| = p^k for k >= start_shell.

    ``center`` defaults to the origin.
    """

    start_shell: int
    coeff: object
    ratio: object
    center: tuple = ()

    def centered(self, n: int) -> tuple:
        return self.center if self.center else (Fraction(0),) * n

    def value_on_shell(self, k: int):
        if k < self.start_shell:
            return 0
        return self.coeff * self.ratio**k


@dataclass(frozen=True)
class PiecewiseRadialFunction:
    compact: TestFunction
    tails: tuple = field(default=())

    @property
    def p(self) -> int:
        return self.compact.p

    @property
    def n(self) -> int:
        return self.compact.n

    @classmethod
    def of(cls, u) -> PiecewiseRadialFunction:
        if isinstance(u, PiecewiseRadialFunction):
            return u
        if isinstance(u, TestFunction):
            return cls(u, ())
        raise TypeError(f"expected a test function, got {type(u).__name__}")

    def __add__(self, other) -> PiecewiseRadialFunction:
        other = PiecewiseRadialFunction.of(other)
        return PiecewiseRadialFunction(self.compact + other.compact, self.tails + other.tails)

    def scale(self, c) -> PiecewiseRadialFunction:
        tails = tuple(RadialTail(t.start_shell, c * t.coeff, t.ratio, t.center) for t in self.tails)
        return PiecewiseRadialFunction(self.compact.scale(c), tails)

    def is_complex(self) -> bool:
        return self.compact.is_complex() or any(isinstance(t.coeff, complex) for t in self.tails)

    def evaluate(self, x: Point):
        total = self.compact.evaluate(x)
        for t in self.tails:
            k = distance_exp(x, t.centered(self.n), t.start_shell)
            if k is not None:
                total = total + t.value_on_shell(k)
        return total

    __call__ = evaluate


# ---------------------------------------------------------------------------
# scalar context


class _Ring:
    """p, n and the value used for s (symbolic or numeric)."""

    def __init__(self, p: int, n: int, alpha: float | None):
        self.p, self.n, self.alpha = p, n, alpha
        self.symbolic = alpha is None
        if alpha is not None and alpha <= 0:
            raise DomainError("alpha must be positive")
        self.s = S if self.symbolic else float(p) ** (-alpha)
        self.Q = Fraction(p**n)
        self.w = 1 - 1 / self.Q

    def num(self, x):
        """Coerce a coefficient into this ring."""
        if self.symbolic:
            if isinstance(x, (complex, float)):
                raise DomainError("numeric coefficients need an explicit alpha")
            return x
        return to_number(x, self.alpha, self.p)

    def zero(self):
        return SymbolicScalar.const(0) if self.symbolic else 0.0

    def check_tail(self, ratio, lam) -> None:
        if not self.symbolic:
            return
        prod = ratio * lam
        if isinstance(prod, SymbolicScalar) and prod.monomial_parts() is not None:
            lo, hi = convergence_region(prod, self.p)
            if lo >= hi:
                raise DivergenceError(f"tail ratio {prod} never has modulus < 1")


def _ball_vt(R: _Ring, lam, kappa, inside: bool, r: int, e):
    if inside:
        return R.w * geometric_tail(1 - r, lam)
    return -(Fraction(1) / R.Q**r) * kappa**e


def _ball_riesz(R: _Ring, lam, kappa, inside: bool, r: int, e):
    if inside:
        return R.w * geometric_tail(r, 1 / lam)
    return (Fraction(1) / R.Q**r) * kappa**e


def _tail_sum(R: _Ring, C, rho, m: int, j: int):
    # sum_{i=m}^{j} t(i) Q^i
    total = R.zero()
    q_rho = rho * R.Q
    for i in range(m, j + 1):
        total = total + C * q_rho**i
    return total


def _tail_vt(R: _Ring, lam, kappa, C, rho, m: int, j):
    R.check_tail(rho, lam)
    if j is None:
        return -R.w * C * geometric_tail(m, lam * rho)
    t_j = C * rho**j
    outer = R.w * (t_j * geometric_tail(j + 1, lam) - C * geometric_tail(j + 1, lam * rho))
    middle = t_j * lam**j - R.w * kappa**j * _tail_sum(R, C, rho, m, j)
    return outer + middle


def _tail_riesz(R: _Ring, lam, kappa, C, rho, m: int, j):
    R.check_tail(rho, lam)
    if j is None:
        return R.w * C * geometric_tail(m, lam * rho)
    t_j = C * rho**j
    inner = t_j * R.w * geometric_tail(1 - j, 1 / lam)
    outer = R.w * C * geometric_tail(j + 1, lam * rho)
    middle = kappa**j * (R.w * _tail_sum(R, C, rho, m, j) - t_j * R.Q ** (j - 1))
    return inner + outer + middle


def _integrate_atoms(R: _Ring, u: PiecewiseRadialFunction, dist, kind: str):
    """Sum of atom integrals; ``dist(center, floor)`` gives the shell index of x."""
    if kind == "vt":
        kappa = R.s / R.Q
        ball_f, tail_f = _ball_vt, _tail_vt
    else:
        kappa = 1 / (R.s * R.Q)
        ball_f, tail_f = _ball_riesz, _tail_riesz
    lam = R.Q * kappa
    total = R.zero()
    for b, c in u.compact.terms:
        e = dist(b.center, 1 - b.radius_exp)
        total = total + R.num(c) * ball_f(R, lam, kappa, e is None, b.radius_exp, e)
    for t in u.tails:
        j = dist(t.centered(u.n), t.start_shell)
        total = total + tail_f(R, lam, kappa, R.num(t.coeff), R.num(t.ratio), t.start_shell, j)
    return total


def _as_point(x) -> Point:
    if isinstance(x, ExtElement):
        return iso_U_inv(x)
    return tuple(x)


def _numeric_alpha_mode(u: PiecewiseRadialFunction, alpha):
    if alpha is None and u.is_complex():
        raise DomainError("complex-valued functions need an explicit alpha")


def vt_apply_at(u, x, alpha: float | None = None):
    """(D^{alpha,n} u)(x) = c * int (u(x) - u(y)) ||x - y||^-(n+alpha) dy.

    Exact in Q(s) when ``alpha`` is None, numeric otherwise.
    """
    u = PiecewiseRadialFunction.of(u)
    _numeric_alpha_mode(u, alpha)
    x = _as_point(x)
    R = _Ring(u.p, u.n, alpha)
    raw = _integrate_atoms(R, u, lambda a, floor: distance_exp(x, a, floor), "vt")
    return scalar_c(u.n, u.p, R.s) * raw


def riesz_apply_at(f, x, alpha: float | None = None):
    """(D^{-gamma} f)(x) = d * int ||x - y||^(alpha-n) f(y) dy, gamma = alpha/n."""
    f = PiecewiseRadialFunction.of(f)
    _numeric_alpha_mode(f, alpha)
    if alpha is not None and not 0 < alpha < f.n:
        raise DivergenceError(f"the potential needs 0 < alpha < n (gamma != 1); got alpha={alpha}")
    x = _as_point(x)
    R = _Ring(f.p, f.n, alpha)
    raw = _integrate_atoms(R, f, lambda a, floor: distance_exp(x, a, floor), "riesz")
    return scalar_d(f.n, f.p, R.s) * raw


# ---------------------------------------------------------------------------
# the one-dimensional operator over L


def _l_distance(x_l: ExtElement, center, floor: int):
    """log_Q |x - U(center)|_L if >= floor, else None; Q = p^n."""
    ctx = x_l.ctx
    diff = x_l - iso_U(ctx, center)
    normalized, _ = ext_abs(diff)
    bound = max((-c.precision for c in diff.coords if c.is_zero), default=-INF)
    if normalized == 0:
        k = -INF
    else:
        # |diff|_L = Q^k, and ||diff||_L = p^k
        k = -min(c.valuation for c in diff.coords)
        assert normalized == Fraction(ctx.p) ** (ctx.n * k)
    if k >= bound:
        return k if k >= floor else None
    if bound < floor:
        return None
    raise PrecisionError("distance in L undecidable at this precision")


DL_CONSTANTS = ("with_degree", "without_degree")


def _dl_constant(name: str, n: int, p: int, s, alpha):
    if name == "with_degree":
        return scalar_dl(n, p, s)
    if name == "without_degree":
        # (q^g - 1)/(1 - q^(-g-1)) with g = alpha/n: not rational in s
        if alpha is None:
            raise DomainError("the degree-free normalization is only available numerically")
        g = alpha / n
        return (p**g - 1) / (1 - p ** (-g - 1))
    raise DomainError(f"unknown normalization {name!r}")


def dl_gamma_apply_at(u, x: ExtElement, alpha: float | None = None, normalization: str = "with_degree"):
    """(D_L^gamma u)(x) over L with residue field of size Q = p^n, gamma = alpha/n.

    Shells are |z - x|_L = Q^k with Haar measure (1 - 1/Q) Q^k and kernel
    |z - x|_L^-(gamma+1) = Q^-k (Q^-gamma)^k, where Q^-gamma = p^-alpha = s.
    """
    u = PiecewiseRadialFunction.of(u)
    _numeric_alpha_mode(u, alpha)
    if not isinstance(x, ExtElement):
        x = iso_U(get_context(u.p, u.n), x)
    R = _Ring(u.p, u.n, alpha)
    raw = _integrate_atoms(R, u, lambda a, floor: _l_distance(x, a, floor), "vt")
    return _dl_constant(normalization, u.n, u.p, R.s, alpha) * raw


# ---------------------------------------------------------------------------


def vt_image(phi: TestFunction, alpha: float | None = None) -> PiecewiseRadialFunction:
    """D^{alpha,n} phi as an explicit piecewise radial function.

    Each ball B(a, p^-r) maps to a constant on the ball plus a tail about a
    with value -c p^(-rn) (p^-n s)^k on ||y - a|| = p^k, k > -r.
    """
    R = _Ring(phi.p, phi.n, alpha)
    c = scalar_c(phi.n, phi.p, R.s)
    kappa = R.s / R.Q
    inside_terms, tails = [], []
    for b, coeff in phi.terms:
        coeff = R.num(coeff)
        r = b.radius_exp
        inside_terms.append((b, coeff * c * R.w * geometric_tail(1 - r, R.s)))
        tails.append(RadialTail(1 - r, -coeff * c / R.Q**r, kappa, b.center))
    return PiecewiseRadialFunction(TestFunction(phi.p, phi.n, inside_terms), tuple(tails))


def translate(u, a: Sequence) -> PiecewiseRadialFunction:
    """y -> u(y - a)."""
    u = PiecewiseRadialFunction.of(u)
    a = tuple(Fraction(x) for x in a)
    tails = tuple(
        RadialTail(t.start_shell, t.coeff, t.ratio, tuple(c + x for c, x in zip(t.centered(u.n), a)))
        for t in u.tails
    )
    return PiecewiseRadialFunction(u.compact.translate(a), tails)
