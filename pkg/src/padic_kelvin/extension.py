"""The unramified extension L of degree n over Q_p.

L is realized as Q_p[t]/(f) where f is monic of degree n and irreducible
mod p.  The power basis 1, t, ..., t^(n-1) reduces to a basis of the residue
field GF(p^n) over GF(p), so it is a canonical basis and the coordinate map
K^n -> L is an isometry for the max norm.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import DomainError
from .padic import DEFAULT_PRECISION, INF, PAdic, check_prime, padic

# ---------------------------------------------------------------------------
# polynomials over GF(p): coefficient lists, lowest degree first, no trailing 0


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def gf_add(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def gf_sub(a, b, p):
    return gf_add(a, [(-c) % p for c in b], p)


def gf_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def gf_divmod(a, b, p):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b):
        c = r[-1] * inv % p
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] = (r[i + k] - c * y) % p
        r = _trim(r)
    return _trim(q), r


def gf_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, gf_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def gf_powmod(base, e, mod, p):
    result, base = [1], gf_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = gf_divmod(gf_mul(result, base, p), mod, p)[1]
        base = gf_divmod(gf_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _prime_factors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def is_irreducible(f, p) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    f = _trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    t = [0, 1]
    if gf_sub(gf_powmod(t, p**n, f, p), t, p):
        return False
    for q in _prime_factors(n):
        h = gf_sub(gf_powmod(t, p ** (n // q), f, p), t, p)
        if len(gf_gcd(f, h, p)) != 1:
            return False
    return True


def find_irreducible(p: int, n: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree n mod p.

    Candidates t^n + c_{n-1} t^{n-1} + ... + c_0 are scanned in increasing
    order of the integer sum c_i p^i.  Returns coefficients lowest first,
    including the leading 1.
    """
    check_prime(p)
    if n < 2:
        raise DomainError("degree must be at least 2")
    for code in range(p**n):
        coeffs = [(code // p**i) % p for i in range(n)]
        f = coeffs + [1]
        if coeffs[0] and is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def format_poly(f, var="t") -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms) or "0"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionContext:
    p: int
    n: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 2:
            raise DomainError("extension degree must be at least 2")
        f = tuple(self.modulus)
        if len(f) != self.n + 1 or f[-1] != 1:
            raise DomainError("modulus must be monic of degree n")
        if any(not 0 <= c < self.p for c in f):
            raise DomainError("modulus coefficients must lie in [0, p-1]")
        if not is_irreducible(list(f), self.p):
            raise DomainError(f"{format_poly(f)} is reducible mod {self.p}")

    @property
    def residue_cardinality(self) -> int:
        return self.p**self.n

    def describe(self) -> str:
        return f"p={self.p};n={self.n};modulus={format_poly(self.modulus)}"

    @classmethod
    def parse(cls, text: str) -> ExtensionContext:
        fields = dict(part.split("=", 1) for part in text.split(";"))
        p, n = int(fields["p"]), int(fields["n"])
        coeffs = [0] * (n + 1)
        for term in fields["modulus"].split("+"):
            if "t" not in term:
                coeffs[0] = int(term)
                continue
            c, _, mono = term.rpartition("*")
            exp = int(mono.split("^")[1]) if "^" in mono else 1
            coeffs[exp] = int(c) if c else 1
        return cls(p, n, tuple(coeffs))

    def element(self, coords, precision: int = DEFAULT_PRECISION) -> ExtElement:
        coords = tuple(padic(c, self.p, precision) for c in coords)
        if len(coords) != self.n:
            raise DomainError(f"expected {self.n} coordinates, got {len(coords)}")
        return ExtElement(self, coords)

    def one(self, precision: int = DEFAULT_PRECISION) -> ExtElement:
        return self.element([1] + [0] * (self.n - 1), precision)


_contexts: dict[tuple[int, int], ExtensionContext] = {}
_contexts_lock = threading.Lock()


def get_context(p: int, n: int) -> ExtensionContext:
    """Process-wide cached context with the deterministic modulus."""
    key = (p, n)
    with _contexts_lock:
        ctx = _contexts.get(key)
        if ctx is None:
            ctx = _contexts[key] = ExtensionContext(p, n, find_irreducible(p, n))
        return ctx


@dataclass(frozen=True)
class ResidueElement:
    """Element of GF(p^n) = GF(p)[t]/(modulus mod p)."""

    p: int
    n: int
    coeffs: tuple[int, ...]
    modulus: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n:
            raise DomainError("residue element needs exactly n coefficients")
        object.__setattr__(self, "coeffs", tuple(c % self.p for c in self.coeffs))

    @classmethod
    def from_poly(cls, poly, ctx: ExtensionContext) -> ResidueElement:
        poly = gf_divmod(list(poly), list(ctx.modulus), ctx.p)[1]
        return cls(ctx.p, ctx.n, tuple(poly) + (0,) * (ctx.n - len(poly)), ctx.modulus)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __mul__(self, other: ResidueElement) -> ResidueElement:
        prod = gf_divmod(gf_mul(_trim(self.coeffs), _trim(other.coeffs), self.p), list(self.modulus), self.p)[1]
        return ResidueElement(self.p, self.n, tuple(prod) + (0,) * (self.n - len(prod)), self.modulus)


def residue_invert(a: ResidueElement) -> ResidueElement:
    """Inverse in GF(p^n) by the extended Euclidean algorithm."""
    p = a.p
    if a.is_zero():
        raise ZeroDivisionError("zero has no inverse in the residue field")
    r0, r1 = list(a.modulus), _trim(a.coeffs)
    s0, s1 = [], [1]
    while r1:
        q, r = gf_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, gf_sub(s0, gf_mul(q, s1, p), p)
    # r0 is a nonzero constant since the modulus is irreducible
    c = pow(r0[0], -1, p)
    inv = gf_divmod([x * c % p for x in s0], list(a.modulus), p)[1]
    return ResidueElement(p, a.n, tuple(inv) + (0,) * (a.n - len(inv)), a.modulus)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExtElement:
    ctx: ExtensionContext
    coords: tuple[PAdic, ...]

    def _check(self, other):
        if not isinstance(other, ExtElement):
            return NotImplemented
        if other.ctx != self.ctx:
            raise DomainError("elements belong to different extension contexts")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return ExtElement(self.ctx, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return ExtElement(self.ctx, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return ExtElement(self.ctx, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PAdic)):
            return ExtElement(self.ctx, tuple(a * other for a in self.coords))
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return ext_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, PAdic)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, ExtElement):
            return NotImplemented
        return self.ctx == other.ctx and all(a == b for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coords)

    def shift(self, k: int) -> ExtElement:
        return ExtElement(self.ctx, tuple(c.shift(k) for c in self.coords))

    def valuation(self) -> float:
        """Minimum coordinate valuation, so that ||x||_L = p**(-valuation)."""
        return min(c.valuation for c in self.coords)

    def invert(self) -> ExtElement:
        return ext_invert(self)

    def __repr__(self):
        return f"ExtElement({self.ctx.describe()}; {', '.join(map(str, self.coords))})"


def ext_mul(a: ExtElement, b: ExtElement) -> ExtElement:
    """Product in L: polynomial product of coordinates reduced by the modulus."""
    if a.ctx != b.ctx:
        raise DomainError("elements belong to different extension contexts")
    ctx = a.ctx
    n = ctx.n
    prod: list = [None] * (2 * n - 1)
    for i, x in enumerate(a.coords):
        for j, y in enumerate(b.coords):
            term = x * y
            prod[i + j] = term if prod[i + j] is None else prod[i + j] + term
    f = ctx.modulus
    # t^n = -(f_0 + f_1 t + ... + f_{n-1} t^{n-1})
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        for i in range(n):
            if f[i]:
                prod[k - n + i] = prod[k - n + i] - c * f[i]
    return ExtElement(ctx, tuple(prod[:n]))


def ext_invert(a: ExtElement) -> ExtElement:
    """1/a by residue inversion followed by Newton lifting y <- y(2 - u y)."""
    if a.is_zero():
        raise ZeroDivisionError("cannot invert zero in L")
    ctx = a.ctx
    m = a.valuation()
    u = a.shift(-m)
    target = min(c.abs_precision for c in u.coords)
    seed = residue_invert(ResidueElement(ctx.p, ctx.n, tuple(int(c.residue(1)) for c in u.coords), ctx.modulus))
    y = ctx.element(seed.coeffs, precision=target)
    two = ctx.element([2] + [0] * (ctx.n - 1), precision=target)
    correct = 1
    while correct < target:
        y = y * (two - u * y)
        correct *= 2
    return y.shift(-m)


def ext_abs(a: ExtElement) -> tuple[Fraction, Fraction]:
    """(|a|_L, ||a||_L) with |a|_L = (max_j |a_j|_p)**n."""
    mx = max(c.norm() for c in a.coords)
    return mx**a.ctx.n, mx


def field_norm(a: ExtElement) -> Fraction:
    """N_{L/K}(a) as the determinant of multiplication by a, over the rationals.

    Coordinates are truncated to rationals first, so only the leading digits
    of the result are meaningful; its valuation is exact when the precision
    exceeds n times the valuation of a.
    """
    ctx = a.ctx
    basis = [ctx.element([int(i == j) for j in range(ctx.n)]) for i in range(ctx.n)]
    rows = [[c.to_fraction() for c in (a * e).coords] for e in basis]
    det = Fraction(1)
    for col in range(ctx.n):
        pivot = next((r for r in range(col, ctx.n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, ctx.n):
            f = rows[r][col] / rows[col][col]
            rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def iso_U(ctx: ExtensionContext, v) -> ExtElement:
    """Coordinates in K^n -> element of L over the canonical basis."""
    v = tuple(v)
    if len(v) != ctx.n:
        raise DomainError(f"expected a vector of length {ctx.n}")
    return ctx.element(v)


def iso_U_inv(a: ExtElement) -> tuple[PAdic, ...]:
    return a.coords


def norm_exponent(v) -> float:
    """k with ||v||_{K^n} = p**k; -INF for the zero vector."""
    val = min(c.valuation for c in v)
    return -INF if val == INF else -val


def all_residue_elements(ctx: ExtensionContext):
    for coeffs in product(range(ctx.p), repeat=ctx.n):
        yield ResidueElement(ctx.p, ctx.n, coeffs, ctx.modulus)
