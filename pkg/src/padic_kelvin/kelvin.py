"""Inversion through the extension field, the Kelvin transform and its checks.

The inversion is J = U^-1 o (z -> 1/z) o U, where U is the canonical-basis
isomorphism K^n -> L.  The Kelvin transform is

    (K u)(x) = ||x||^(alpha - n) u(J x),   x != 0,   (K u)(0) := 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, PreconditionError
from .extension import ExtensionContext, ext_invert, get_context, iso_U, iso_U_inv, norm_exponent
from .operators import PiecewiseRadialFunction, RadialTail, _Ring, riesz_apply_at, vt_apply_at
from .padic import DEFAULT_PRECISION, INF, PAdic, padic
from .schwartz import Ball, Point, TestFunction
from .symbolic import to_number


@dataclass(frozen=True)
class InversionMap:
    ctx: ExtensionContext

    def __call__(self, x: Point) -> Point:
        return invert_point(x, self.ctx)


def invert_point(x: Sequence[PAdic], ctx: ExtensionContext | None = None) -> Point:
    x = tuple(x)
    if ctx is None:
        ctx = get_context(x[0].prime, len(x))
    if all(c.is_zero for c in x):
        raise DomainError("the inversion is undefined at the origin")
    return iso_U_inv(ext_invert(iso_U(ctx, x)))


def norm_power(k: int, exponent_sign: int, ring: _Ring):
    """||x||^(alpha + sign*n) for ||x|| = p^k: s^-k p^(sign*n*k)."""
    return ring.s ** (-k) * Fraction(ring.p) ** (exponent_sign * ring.n * k)


def image_ball(b: Ball) -> tuple[Ball, int]:
    """J(b) for a ball missing the origin, and log_p of the norm on the image.

    With ||center|| = p^-v > radius p^-r the image is the ball about J(center)
    of radius p^-r * p^(2v), on which ||y|| = p^v.
    """
    if b.contains_origin():
        raise DomainError("ball contains the origin; its image is not a ball")
    k = b.center_norm_exp()
    if k <= -b.radius_exp:
        raise DomainError("ball contains the origin; its image is not a ball")
    v = -k
    r_img = b.radius_exp - 2 * v
    prec = max(DEFAULT_PRECISION, b.radius_exp - v + 8)
    center = tuple(padic(c, b.p, prec) for c in b.center)
    img = invert_point(center)
    return Ball(b.p, tuple(c.residue(r_img) for c in img), r_img), v


def kelvin_transform(u: TestFunction, alpha: float | None = None) -> PiecewiseRadialFunction:
    """K u as a piecewise radial function (exact when alpha is None)."""
    if alpha is not None and not 0 < alpha < u.n:
        raise DomainError(f"Kelvin transform needs 0 < alpha < n; got {alpha}")
    R = _Ring(u.p, u.n, alpha)
    rho = 1 / (R.s * R.Q)  # ||y||^(alpha-n) = rho**k on ||y|| = p^k
    balls, tails = [], []
    for b, c in u.terms:
        c = R.num(c)
        if b.contains_origin():
            tails.append(RadialTail(b.radius_exp, c, rho))
        else:
            img, v = image_ball(b)
            balls.append((img, c * norm_power(v, -1, R)))
    return PiecewiseRadialFunction(TestFunction(u.p, u.n, balls), tuple(tails))


def kelvin_pointwise(u: TestFunction, x: Point, alpha: float | None = None):
    """||x||^(alpha-n) u(J x) computed directly from the definition."""
    R = _Ring(u.p, u.n, alpha)
    k = norm_exponent(x)
    if k == -INF:
        return R.zero()
    return norm_power(int(k), -1, R) * R.num(u.evaluate(invert_point(x)))


def verify_kelvin_identity(u: TestFunction, x: Point, alpha: float | None = None):
    """D u(x) - ||x||^(alpha+n) D(K u)(x), both sides at the same point x."""
    x = tuple(x)
    k = norm_exponent(x)
    if k == -INF:
        raise DomainError("the identity is stated for x != 0")
    R = _Ring(u.p, u.n, alpha)
    lhs = vt_apply_at(u, x, alpha)
    rhs = norm_power(int(k), 1, R) * vt_apply_at(kelvin_transform(u, alpha), x, alpha)
    return lhs - rhs


def kelvin_covariance_residual(u: TestFunction, x: Point, alpha: float | None = None):
    """D u(J x) - ||x||^(alpha+n) D(K u)(x).

    Zero for every test function: the operator of K u at x equals
    ||x||^-(alpha+n) times the operator of u at the inverted point.
    """
    x = tuple(x)
    k = norm_exponent(x)
    if k == -INF:
        raise DomainError("the identity is stated for x != 0")
    R = _Ring(u.p, u.n, alpha)
    lhs = vt_apply_at(u, invert_point(x), alpha)
    rhs = norm_power(int(k), 1, R) * vt_apply_at(kelvin_transform(u, alpha), x, alpha)
    return lhs - rhs


def reflect(f: TestFunction) -> TestFunction:
    """f*(y) = f(1/y) for f supported away from the origin."""
    return TestFunction(f.p, f.n, [(image_ball(b)[0], c) for b, c in f.terms])


def verify_riesz_inversion_chain(f: TestFunction, x: Point, alpha: float | None = None):
    """D^-g f*(x*) - |x*|_L^(g-1) D^-g(|.|_L^(-g-1) f)(x), g = alpha/n."""
    x = tuple(x)
    k = norm_exponent(x)
    if k == -INF:
        raise DomainError("the chain identity is stated for x != 0")
    if any(b.contains_origin() or b.center_norm_exp() <= -b.radius_exp for b, _ in f.terms):
        raise PreconditionError("f must vanish on a neighbourhood of the origin")
    R = _Ring(f.p, f.n, alpha)
    lhs = riesz_apply_at(reflect(f), invert_point(x), alpha)
    # |y|_L^(-g-1) = ||y||^-(alpha+n), constant on each ball
    weighted = TestFunction(
        f.p, f.n,
        [(b, R.num(c) * norm_power(int(b.center_norm_exp()), 1, R) ** -1) for b, c in f.terms],
    )
    # |x*|_L^(g-1) = ||J x||^(alpha-n) with ||J x|| = p^-k
    rhs = norm_power(-int(k), -1, R) * riesz_apply_at(weighted, x, alpha)
    return lhs - rhs


# ---------------------------------------------------------------------------
# harmonicity


@dataclass(frozen=True)
class RadialRegion:
    """{x : p^lo <= ||x|| <= p^hi}; None means unbounded on that side."""

    lo: int | None = None
    hi: int | None = None
    exclude_origin: bool = True

    def contains(self, x: Point) -> bool:
        k = norm_exponent(x)
        if k == -INF:
            return not self.exclude_origin and self.lo is None
        return (self.lo is None or k >= self.lo) and (self.hi is None or k <= self.hi)

    def image(self) -> RadialRegion:
        """J maps ||x|| = p^k onto ||y|| = p^-k."""
        return RadialRegion(
            None if self.hi is None else -self.hi,
            None if self.lo is None else -self.lo,
        )


@dataclass
class HarmonicityReport:
    max_abs: float
    values: list = field(default_factory=list)
    outside: list = field(default_factory=list)


def verify_harmonicity(
    u: TestFunction,
    region: RadialRegion,
    region_points: Sequence[Point],
    alpha: float,
    tol: float = 1e-10,
    strict: bool = True,
) -> HarmonicityReport:
    """max |D(K u)(x)| over points of J(G), after checking D u = 0 on the preimages.

    Points outside J(G) raise PreconditionError when ``strict``; otherwise
    their values are reported separately and left out of ``max_abs``.
    """
    target = region.image()
    ku = kelvin_transform(u, alpha)
    report = HarmonicityReport(0.0)
    for x in region_points:
        x = tuple(x)
        inside = target.contains(x)
        if not inside and strict:
            raise PreconditionError(f"point with ||x|| = p^{norm_exponent(x)} lies outside J(G)")
        value = complex(to_number(vt_apply_at(ku, x, alpha), alpha, u.p))
        if inside:
            pre = complex(to_number(vt_apply_at(u, invert_point(x), alpha), alpha, u.p))
            if abs(pre) > tol:
                raise PreconditionError(f"u is not harmonic at J(x): |D u| = {abs(pre):.3e}")
            report.values.append(value)
            report.max_abs = max(report.max_abs, abs(value))
        else:
            report.outside.append(value)
    return report
