"""Truncated arithmetic in Q_p with explicit relative precision.

A nonzero element is stored as ``unit * p**valuation`` where ``unit`` is an
integer prime to ``p`` known modulo ``p**precision``.  Zero carries an
infinite valuation; its ``precision`` field holds the *absolute* precision,
i.e. the element is only known to be ``O(p**precision)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, PrecisionError

DEFAULT_PRECISION = 32

INF = math.inf


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"{p!r} is not a prime")


def valuation_of_int(a: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if a == 0:
        raise DomainError("valuation of 0 is infinite")
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def valuation_of_rational(q: Fraction, p: int) -> float:
    q = Fraction(q)
    if q == 0:
        return INF
    return valuation_of_int(q.numerator, p) - valuation_of_int(q.denominator, p)


@dataclass(frozen=True, eq=False)
class PAdic:
    prime: int
    valuation: float  # int for nonzero values, INF for zero
    unit: int
    precision: int

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, p: int, absolute_precision: int = DEFAULT_PRECISION) -> PAdic:
        return cls(p, INF, 0, absolute_precision)

    @classmethod
    def _make(cls, p: int, value: int, shift: int, absprec: int) -> PAdic:
        # value * p**shift known modulo p**absprec
        width = absprec - shift
        if width <= 0:
            return cls.zero(p, absprec)
        value %= p**width
        if value == 0:
            return cls.zero(p, absprec)
        v = valuation_of_int(value, p)
        return cls(p, shift + v, value // p**v, width - v)

    @property
    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def abs_precision(self) -> int:
        """Exponent N such that the element is known modulo p**N."""
        if self.is_zero:
            return self.precision
        return self.valuation + self.precision

    @property
    def digits(self) -> tuple[int, ...]:
        """Base-p digits starting at the coefficient of p**valuation."""
        if self.is_zero:
            return ()
        out = []
        u = self.unit
        for _ in range(self.precision):
            u, d = divmod(u, self.prime)
            out.append(d)
        return tuple(out)

    def norm(self) -> Fraction:
        """Normalized absolute value p**(-valuation); 0 for zero."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.prime) ** (-self.valuation)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> PAdic:
        if isinstance(other, PAdic):
            if other.prime != self.prime:
                raise DomainError(f"mixed primes {self.prime} and {other.prime}")
            return other
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return PAdic.zero(self.prime, self.abs_precision)
            v = valuation_of_rational(q, self.prime)
            rel = max(1, self.abs_precision - v)
            return from_rational(q.numerator, q.denominator, self.prime, rel)
        return NotImplemented

    def __add__(self, other) -> PAdic:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        absprec = min(self.abs_precision, other.abs_precision)
        lo = min(self._lowest(), other._lowest())
        total = self._scaled(lo) + other._scaled(lo)
        return PAdic._make(self.prime, total, lo, absprec)

    __radd__ = __add__

    def _lowest(self) -> int:
        return self.precision if self.is_zero else self.valuation

    def _scaled(self, lo: int) -> int:
        if self.is_zero:
            return 0
        return self.unit * self.prime ** (self.valuation - lo)

    def __neg__(self) -> PAdic:
        if self.is_zero:
            return self
        return PAdic(self.prime, self.valuation, (-self.unit) % self.prime**self.precision, self.precision)

    def __sub__(self, other) -> PAdic:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> PAdic:
        return (-self) + other

    def __mul__(self, other) -> PAdic:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.prime
        if self.is_zero or other.is_zero:
            if self.is_zero and other.is_zero:
                return PAdic.zero(p, self.precision + other.precision)
            z, w = (self, other) if self.is_zero else (other, self)
            return PAdic.zero(p, z.precision + w.valuation)
        prec = min(self.precision, other.precision)
        unit = (self.unit * other.unit) % p**prec
        return PAdic(p, self.valuation + other.valuation, unit, prec)

    __rmul__ = __mul__

    def invert(self) -> PAdic:
        if self.is_zero:
            raise ZeroDivisionError("p-adic zero has no inverse at this precision")
        mod = self.prime**self.precision
        return PAdic(self.prime, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other) -> PAdic:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other) -> PAdic:
        return self.invert() * other

    def __pow__(self, k: int) -> PAdic:
        if k < 0:
            return self.invert() ** (-k)
        result = from_rational(1, 1, self.prime, self.precision if not self.is_zero else DEFAULT_PRECISION)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> PAdic:
        """Multiply by p**k exactly."""
        if self.is_zero:
            return PAdic.zero(self.prime, self.precision + k)
        return PAdic(self.prime, self.valuation + k, self.unit, self.precision)

    def truncate(self, precision: int) -> PAdic:
        """Reduce relative precision to ``precision`` digits."""
        if self.is_zero or precision >= self.precision:
            return self
        return PAdic(self.prime, self.valuation, self.unit % self.prime**precision, precision)

    # -- exact projections --------------------------------------------------

    def residue(self, r: int) -> Fraction:
        """Canonical representative of ``self mod p**r``.

        The result is the finite expansion sum_{i<r} d_i p**i, a rational in
        [0, p**r) whose denominator is a power of p.
        """
        if self.abs_precision < r:
            raise PrecisionError(f"known only mod p^{self.abs_precision}, asked mod p^{r}")
        if self.is_zero or self.valuation >= r:
            return Fraction(0)
        width = r - self.valuation
        return Fraction(self.unit % self.prime**width) * Fraction(self.prime) ** self.valuation

    def fractional_part(self) -> Fraction:
        """{x}_p, the part of the expansion carried by negative powers of p."""
        return self.residue(0)

    def to_fraction(self) -> Fraction:
        """The truncated expansion as an exact rational."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.prime) ** self.valuation

    # -- comparison / text --------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, PAdic):
            return NotImplemented
        if other.prime != self.prime:
            return False
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        if self.valuation != other.valuation:
            return False
        w = min(self.precision, other.precision)
        m = self.prime**w
        return self.unit % m == other.unit % m

    __hash__ = None  # equality is precision-relative

    def agrees_with(self, other, digits: int) -> bool:
        """True if ``self - other`` vanishes modulo p**(lowest valuation + digits).

        A zero operand contributes no valuation; two zeros always agree.
        """
        other = self._coerce(other)
        vals = [a.valuation for a in (self, other) if not a.is_zero]
        if not vals:
            return True
        lo = min(vals)
        d = self - other
        return d.is_zero and d.precision >= lo + digits or (not d.is_zero and d.valuation >= lo + digits)

    def __str__(self) -> str:
        p = self.prime
        if self.is_zero:
            return f"0 (mod {p}^{self.precision})"
        ds = " ".join(str(d) for d in self.digits)
        return f"{ds} * {p}^{self.valuation} (mod {p}^{self.abs_precision})"

    def __repr__(self) -> str:
        return f"PAdic({self})"

    @classmethod
    def parse(cls, text: str) -> PAdic:
        """Inverse of ``str``: ``"d0 d1 ... * p^v (mod p^N)"`` or ``"0 (mod p^N)"``."""
        text = text.strip()
        m = re.fullmatch(r"0 \(mod (\d+)\^(-?\d+)\)", text)
        if m:
            p = int(m.group(1))
            check_prime(p)
            return cls.zero(p, int(m.group(2)))
        m = re.fullmatch(r"([\d ]+?) \* (\d+)\^(-?\d+) \(mod (\d+)\^(-?\d+)\)", text)
        if not m:
            raise ValueError(f"cannot parse p-adic number {text!r}")
        digits = [int(d) for d in m.group(1).split()]
        p, v = int(m.group(2)), int(m.group(3))
        check_prime(p)
        if int(m.group(4)) != p:
            raise ValueError("prime mismatch in modulus")
        if int(m.group(5)) != v + len(digits):
            raise ValueError("modulus exponent disagrees with digit count")
        if not digits or digits[0] == 0 or any(not 0 <= d < p for d in digits):
            raise ValueError("digits must lie in [0, p-1] with nonzero leading digit")
        unit = sum(d * p**i for i, d in enumerate(digits))
        return cls(p, v, unit, len(digits))


def from_rational(num: int, den: int, p: int, precision: int = DEFAULT_PRECISION) -> PAdic:
    """p-adic expansion of num/den to ``precision`` significant digits."""
    check_prime(p)
    if den == 0:
        raise DomainError("zero denominator")
    if precision < 1:
        raise DomainError("precision must be positive")
    q = Fraction(num, den)
    if q == 0:
        return PAdic.zero(p, precision)
    a = valuation_of_int(q.numerator, p)
    b = valuation_of_int(q.denominator, p)
    mod = p**precision
    unit = (q.numerator // p**a) * pow(q.denominator // p**b, -1, mod) % mod
    return PAdic(p, a - b, unit, precision)


def padic(value, p: int, precision: int = DEFAULT_PRECISION) -> PAdic:
    """Convenience constructor from an int, Fraction or PAdic."""
    if isinstance(value, PAdic):
        return value
    q = Fraction(value)
    return from_rational(q.numerator, q.denominator, p, precision)


def padic_add(a: PAdic, b: PAdic) -> PAdic:
    return a + b


def padic_mul(a: PAdic, b: PAdic) -> PAdic:
    return a * b


def padic_invert(a: PAdic) -> PAdic:
    return a.invert()
