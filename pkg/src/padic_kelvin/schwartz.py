"""Locally constant compactly supported functions on Q_p^n.

A test function is a finite linear combination of indicators of max-norm
balls ``B(a, p^-r) = {x : ||x - a|| <= p^-r}``.  Ball centers are exact
rationals reduced modulo ``p^r`` (finite p-adic expansions), so two balls
are equal iff their data are equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import DomainError, PrecisionError, ResourceError
from .padic import DEFAULT_PRECISION, INF, PAdic, check_prime, from_rational, padic, valuation_of_rational
from .symbolic import SymbolicScalar

MAX_SUBBALLS = 10**6

Point = tuple  # tuple[PAdic, ...]


def make_point(p: int, coords: Sequence, precision: int = DEFAULT_PRECISION) -> Point:
    return tuple(padic(c, p, precision) for c in coords)


def canonical_residue(q, p: int, r: int) -> Fraction:
    """Finite-expansion representative of q modulo p**r."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    den = q.denominator
    while den % p == 0:
        den //= p
    if den == 1:
        # finite expansion: the representative in [0, p^r) is the real remainder
        return q % Fraction(p) ** r
    v = valuation_of_rational(q, p)
    if v >= r:
        return Fraction(0)
    return from_rational(q.numerator, q.denominator, p, r - v).residue(r)


def distance_exp(x: Point, a: Sequence[Fraction], floor: int):
    """log_p ||x - a|| if it is >= floor, else None.

    Raises PrecisionError when x is not known finely enough to decide.
    """
    known = -INF
    bound = -INF
    for xj, aj in zip(x, a):
        d = xj - aj
        if d.is_zero:
            bound = max(bound, -d.precision)
        else:
            known = max(known, -d.valuation)
    if known >= bound:
        return known if known >= floor else None
    if bound < floor:
        return None
    raise PrecisionError(f"||x - a|| undecidable below p^{bound}")


def points_agree(x: Point, y: Point, digits: int) -> bool:
    """True if x - y vanishes modulo p**(v + digits), v the lowest coordinate valuation."""
    vals = [c.valuation for c in (*x, *y) if not c.is_zero]
    if not vals:
        return True
    target = min(vals) + digits
    for a, b in zip(x, y):
        d = a - b
        if (d.precision if d.is_zero else d.valuation) < target:
            return False
    return True


def _is_zero(c) -> bool:
    if isinstance(c, SymbolicScalar):
        return c.is_zero()
    return c == 0


@dataclass(frozen=True)
class Ball:
    p: int
    center: tuple  # tuple[Fraction, ...] reduced mod p^radius_exp
    radius_exp: int  # radius p^-radius_exp

    def __post_init__(self):
        c = tuple(canonical_residue(a, self.p, self.radius_exp) for a in self.center)
        object.__setattr__(self, "center", c)

    @classmethod
    def _reduced(cls, p: int, center: tuple, radius_exp: int) -> Ball:
        """Construct from a center already reduced mod p^radius_exp."""
        b = object.__new__(cls)
        object.__setattr__(b, "p", p)
        object.__setattr__(b, "center", center)
        object.__setattr__(b, "radius_exp", radius_exp)
        return b

    @property
    def n(self) -> int:
        return len(self.center)

    def measure(self) -> Fraction:
        return Fraction(self.p) ** (-self.radius_exp * self.n)

    def contains(self, x: Point) -> bool:
        r = self.radius_exp
        return all(xj.residue(r) == cj for xj, cj in zip(x, self.center))

    def contains_origin(self) -> bool:
        return not any(self.center)

    def center_norm_exp(self) -> float:
        """log_p ||center||, -INF when the ball contains the origin."""
        if self.contains_origin():
            return -INF
        return max(-valuation_of_rational(c, self.p) for c in self.center)

    def sub_balls(self, r: int):
        """Partition into balls of radius p^-r (r >= radius_exp)."""
        if r < self.radius_exp:
            raise DomainError("cannot refine to a coarser radius")
        p, k = self.p, r - self.radius_exp
        digit_vals = [
            sum(Fraction(d) * Fraction(p) ** (self.radius_exp + i) for i, d in enumerate(ds))
            for ds in product(range(p), repeat=k)
        ]
        for offs in product(digit_vals, repeat=self.n):
            yield Ball._reduced(p, tuple(c + o for c, o in zip(self.center, offs)), r)

    def contains_ball(self, other: Ball) -> bool:
        if other.radius_exp < self.radius_exp:
            return False
        return all(canonical_residue(c, self.p, self.radius_exp) == a for c, a in zip(other.center, self.center))

    def translate(self, a: Sequence) -> Ball:
        return Ball(self.p, tuple(c + Fraction(x) for c, x in zip(self.center, a)), self.radius_exp)


def balls_disjoint_or_nested(b1: Ball, b2: Ball) -> bool:
    """Ultrametric dichotomy: every pair of balls is disjoint or nested."""
    small, big = (b1, b2) if b1.radius_exp >= b2.radius_exp else (b2, b1)
    if big.contains_ball(small):
        return True
    # disjoint iff the center of small lies outside big
    return not all(canonical_residue(c, big.p, big.radius_exp) == a for c, a in zip(small.center, big.center))


class TestFunction:
    """Finite sum of coefficient * indicator(ball).

    Coefficients are either exact (SymbolicScalar / rationals) or complex.
    """

    __test__ = False  # not a pytest class

    def __init__(self, p: int, n: int, terms=()):
        check_prime(p)
        self.p = p
        self.n = n
        self.terms = tuple(terms)
        for b, _ in self.terms:
            if b.p != p or b.n != n:
                raise DomainError("ball does not live in Q_p^n of this function")

    @classmethod
    def indicator(cls, p: int, center: Sequence, radius_exp: int, coeff=None) -> TestFunction:
        coeff = SymbolicScalar.const(1) if coeff is None else coeff
        b = Ball(p, tuple(Fraction(c) for c in center), radius_exp)
        return cls(p, b.n, [(b, coeff)])

    @classmethod
    def unit_ball(cls, p: int, n: int, coeff=None) -> TestFunction:
        return cls.indicator(p, [0] * n, 0, coeff)

    @classmethod
    def zero(cls, p: int, n: int) -> TestFunction:
        return cls(p, n, [])

    def __add__(self, other: TestFunction) -> TestFunction:
        if (self.p, self.n) != (other.p, other.n):
            raise DomainError("test functions on different spaces")
        return TestFunction(self.p, self.n, self.terms + other.terms)

    def scale(self, c) -> TestFunction:
        return TestFunction(self.p, self.n, [(b, c * a) for b, a in self.terms])

    def __neg__(self) -> TestFunction:
        return self.scale(-1)

    def __sub__(self, other: TestFunction) -> TestFunction:
        return self + (-other)

    def finest_radius_exp(self) -> int | None:
        return max((b.radius_exp for b, _ in self.terms), default=None)

    def is_complex(self) -> bool:
        return any(isinstance(c, complex) for _, c in self.terms)

    def canonicalize(self) -> TestFunction:
        """Refine to the finest radius, merge equal balls, drop zeros."""
        if not self.terms:
            return self
        r = self.finest_radius_exp()
        total = sum(self.p ** (self.n * (r - b.radius_exp)) for b, _ in self.terms)
        if total > MAX_SUBBALLS:
            raise ResourceError(f"canonicalization needs {total} sub-balls (> {MAX_SUBBALLS})")
        acc: dict = {}
        for b, c in self.terms:
            for sb in b.sub_balls(r):
                acc[sb] = acc[sb] + c if sb in acc else c
        terms = sorted(((b, c) for b, c in acc.items() if not _is_zero(c)), key=lambda t: t[0].center)
        return TestFunction(self.p, self.n, terms)

    def evaluate(self, x: Point):
        if len(x) != self.n:
            raise DomainError("point has wrong dimension")
        total = None
        for b, c in self.terms:
            if b.contains(x):
                total = c if total is None else total + c
        if total is None:
            return 0j if self.is_complex() else SymbolicScalar.const(0)
        return total

    __call__ = evaluate

    def integrate(self):
        total = SymbolicScalar.const(0) if not self.is_complex() else 0j
        for b, c in self.terms:
            total = total + c * b.measure() if not isinstance(c, complex) else total + c * float(b.measure())
        return total

    def translate(self, a: Sequence) -> TestFunction:
        """The function y -> f(y - a)."""
        return TestFunction(self.p, self.n, [(b.translate(a), c) for b, c in self.terms])

    def dilate(self, lam) -> TestFunction:
        """The function y -> f(lam * y) for a nonzero rational lam."""
        lam = Fraction(lam)
        if lam == 0:
            raise DomainError("dilation by zero")
        v = valuation_of_rational(lam, self.p)
        terms = [(Ball(self.p, tuple(c / lam for c in b.center), b.radius_exp - v), c) for b, c in self.terms]
        return TestFunction(self.p, self.n, terms)

    # -- serialization -------------------------------------------------------

    def to_json(self, header: dict | None = None) -> str:
        def coeff(c):
            if isinstance(c, complex):
                return [c.real, c.imag]
            return str(c if isinstance(c, SymbolicScalar) else SymbolicScalar.const(c))

        def digits(q: Fraction, r: int):
            low = min(0, int(valuation_of_rational(q, self.p))) if q else 0
            m = int(q * Fraction(self.p) ** (-low))
            return {"low": low, "digits": [(m // self.p**i) % self.p for i in range(r - low)]}

        data = {
            "header": dict(header or {}, p=self.p, n=self.n),
            "terms": [
                {"center_digits": [digits(a, b.radius_exp) for a in b.center], "radius_exp": b.radius_exp, "coeff": coeff(c)}
                for b, c in self.terms
            ],
        }
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> TestFunction:
        data = json.loads(text)
        p, n = data["header"]["p"], data["header"]["n"]
        terms = []
        for t in data["terms"]:
            center = tuple(
                sum(Fraction(d) * Fraction(p) ** (cd["low"] + i) for i, d in enumerate(cd["digits"]))
                for cd in t["center_digits"]
            )
            c = t["coeff"]
            coeff = complex(c[0], c[1]) if isinstance(c, list) else SymbolicScalar.parse(c)
            terms.append((Ball(p, center, t["radius_exp"]), coeff))
        return cls(p, n, terms)

    def __repr__(self):
        return f"TestFunction(p={self.p}, n={self.n}, terms={len(self.terms)})"


def canonicalize(f: TestFunction) -> TestFunction:
    return f.canonicalize()


def evaluate(f: TestFunction, x: Point):
    return f.evaluate(x)


def integrate(f: TestFunction):
    return f.integrate()
