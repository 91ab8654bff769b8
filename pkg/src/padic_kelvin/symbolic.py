"""Exact rational functions of one indeterminate ``s`` over Q.

Throughout the package ``s`` stands for ``p**(-alpha)``: every operator value
and weight built from norms ``p**(k*alpha)`` is a rational function of ``s``,
so identities can be checked as exact equalities in Q(s) for all alpha at once.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from numbers import Number

from .errors import DivergenceError

Poly = tuple  # tuple[Fraction, ...], lowest degree first, no trailing zeros


def _ptrim(a) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _ptrim(out)


def _pneg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    r = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(r) >= len(b) and r:
        c = r[-1] / lead
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] -= c * y
        r = list(_ptrim(r))
    return _ptrim(q), tuple(r)


def _pmonic(a: Poly) -> Poly:
    lead = a[-1]
    return tuple(c / lead for c in a)


def _pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a)


def _peval(a: Poly, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


class SymbolicScalar:
    """Element of Q(s) in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num=(), den=(Fraction(1),), _normalized=False):
        num = _ptrim(Fraction(c) for c in num)
        den = _ptrim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator in rational function")
        if not _normalized:
            if not num:
                den = (Fraction(1),)
            else:
                g = _pgcd(num, den)
                if len(g) > 1:
                    num = _pdivmod(num, g)[0]
                    den = _pdivmod(den, g)[0]
                lead = den[-1]
                num = tuple(c / lead for c in num)
                den = tuple(c / lead for c in den)
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------------

    @classmethod
    def const(cls, q) -> SymbolicScalar:
        q = Fraction(q)
        return cls((q,) if q else (), (Fraction(1),), _normalized=True)

    @classmethod
    def s(cls) -> SymbolicScalar:
        return cls((Fraction(0), Fraction(1)), (Fraction(1),), _normalized=True)

    @classmethod
    def monomial(cls, coeff, exponent: int) -> SymbolicScalar:
        """coeff * s**exponent (negative exponents allowed)."""
        coeff = Fraction(coeff)
        if exponent >= 0:
            return cls((Fraction(0),) * exponent + (coeff,), (Fraction(1),))
        return cls((coeff,), (Fraction(0),) * (-exponent) + (Fraction(1),))

    @staticmethod
    def _lift(x):
        if isinstance(x, SymbolicScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return SymbolicScalar.const(x)
        return NotImplemented

    # -- field operations -----------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return SymbolicScalar(_padd(self.num, other.num), self.den)
        return SymbolicScalar(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return SymbolicScalar(_pneg(self.num), self.den, _normalized=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return SymbolicScalar(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> SymbolicScalar:
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return SymbolicScalar(self.den, self.num)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = SymbolicScalar.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates / comparison ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def monomial_parts(self) -> tuple[Fraction, int] | None:
        """(c, e) if the value is c * s**e, else None."""
        def mono(poly):
            nz = [i for i, c in enumerate(poly) if c]
            return (poly[nz[0]], nz[0]) if len(nz) == 1 else None
        a, b = mono(self.num), mono(self.den)
        if a is None or b is None:
            return None
        return a[0] / b[0], a[1] - b[1]

    # -- evaluation -------------------------------------------------------------

    def eval_s(self, s):
        d = _peval(self.den, s)
        if d == 0:
            raise DivergenceError(f"pole of {self} at s = {s}")
        return _peval(self.num, s) / d

    def eval_at(self, alpha: float, p: int) -> float:
        """Numeric value at s = p**(-alpha)."""
        s = float(p) ** (-alpha)
        num = math.fsum(float(c) * s**i for i, c in enumerate(self.num))
        den = math.fsum(float(c) * s**i for i, c in enumerate(self.den))
        if den == 0:
            raise DivergenceError(f"pole of {self} at alpha = {alpha}")
        return num / den

    # -- text -----------------------------------------------------------------------

    def __str__(self):
        if not self.num:
            return "0"
        if self.den == (1,):
            return _pformat(self.num)
        return f"({_pformat(self.num)})/({_pformat(self.den)})"

    def __repr__(self):
        return f"SymbolicScalar({self})"

    @classmethod
    def parse(cls, text: str) -> SymbolicScalar:
        """Read an arithmetic expression in s, e.g. "(3*s)/((1-s)*(4-s))".

        Accepts integers, s, + - * / and integer powers (^ or **), so both the
        canonical form and factored forms round-trip.
        """
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse {text!r}: {exc.msg}") from None
        return _from_ast(tree.body, text)


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _from_ast(node, text: str) -> SymbolicScalar:
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return SymbolicScalar.const(node.value)
    if isinstance(node, ast.Name) and node.id == "s":
        return SymbolicScalar.s()
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _from_ast(node.operand, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            e = node.right
            sign = 1
            if isinstance(e, ast.UnaryOp) and isinstance(e.op, ast.USub):
                e, sign = e.operand, -1
            if not (isinstance(e, ast.Constant) and type(e.value) is int):
                raise ValueError(f"non-integer exponent in {text!r}")
            return _from_ast(node.left, text) ** (sign * e.value)
        op = _BINOPS.get(type(node.op))
        if op is not None:
            return op(_from_ast(node.left, text), _from_ast(node.right, text))
    raise ValueError(f"unsupported syntax in {text!r}")


def _pformat(a: Poly) -> str:
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        mono = "" if i == 0 else ("s" if i == 1 else f"s^{i}")
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


S = SymbolicScalar.s()


def as_scalar(x) -> SymbolicScalar:
    return x if isinstance(x, SymbolicScalar) else SymbolicScalar.const(x)


# ---------------------------------------------------------------------------
# operator constants


def scalar_c(n: int, p: int, s=S):
    """Normalizing constant of the n-dimensional operator, (p^a - 1)/(1 - p^(-a-n)).

    With s = p^(-a) this is (1 - s) / (s (1 - p^(-n) s)).  It is the constant
    for which the integral form has symbol ||xi||^a.
    """
    q = Fraction(1, p**n)
    return (1 - s) / (s * (1 - q * s))


def scalar_c_printed(n: int, p: int, s=S):
    """(p - 1)/(1 - p^(-a-n)); agrees with :func:`scalar_c` only at a = 1."""
    return Fraction(p - 1) / (1 - Fraction(1, p**n) * s)


def scalar_d(n: int, p: int, s=S):
    """Riesz potential constant (1 - p^(-a)) / (1 - p^(a-n)), pole at a = n."""
    q = Fraction(1, p**n)
    if isinstance(s, SymbolicScalar):
        return (1 - s) / (1 - q * s.inverse())
    den = 1 - q / s
    if den == 0:
        raise DivergenceError("Riesz constant has a pole at alpha = n")
    return (1 - s) / den


def scalar_dl(n: int, p: int, s=S):
    """Constant of the one-dimensional operator over L (residue field size p^n).

    (Q^g - 1)/(1 - Q^(-g-1)) with Q = p^n and Q^(-g) = s.
    """
    big_q = Fraction(p**n)
    return (1 / s - 1) / (1 - s / big_q)


def geometric_tail(first_exponent: int, ratio):
    """sum_{k >= first_exponent} ratio**k = ratio**first_exponent / (1 - ratio).

    Symbolic ratios always get the closed form (use :func:`convergence_region`
    to interpret it numerically); numeric ratios must satisfy |ratio| < 1.
    """
    if isinstance(ratio, SymbolicScalar):
        if ratio == 1:
            raise DivergenceError("geometric series with ratio 1")
        if ratio.is_zero():
            return SymbolicScalar.const(1 if first_exponent == 0 else 0)
        return ratio**first_exponent / (1 - ratio)
    if isinstance(ratio, (int, Fraction)) and ratio == 0:
        return Fraction(1 if first_exponent == 0 else 0)
    if not isinstance(ratio, Number) or abs(ratio) >= 1:
        raise DivergenceError(f"geometric series with ratio {ratio} diverges")
    return ratio**first_exponent / (1 - ratio)


def convergence_region(ratio: SymbolicScalar, p: int) -> tuple[float, float]:
    """Open alpha-interval (within alpha > 0) on which |ratio| < 1.

    ``ratio`` must be a monomial c * s**e.  Returns (lo, hi); an empty region
    has lo >= hi.
    """
    parts = ratio.monomial_parts()
    if parts is None:
        raise ValueError(f"{ratio} is not a monomial in s")
    c, e = parts
    logc = math.log(abs(c), p) if c else -math.inf
    # |c| p^(-alpha e) < 1  <=>  log_p|c| < alpha e
    if e == 0:
        return (0.0, math.inf) if logc < 0 else (0.0, 0.0)
    if e > 0:
        return max(0.0, logc / e), math.inf
    return 0.0, logc / e


def to_number(x, alpha: float, p: int):
    """Numeric value of a coefficient (SymbolicScalar, rational or complex)."""
    if isinstance(x, SymbolicScalar):
        return x.eval_at(alpha, p)
    if isinstance(x, Fraction):
        return float(x)
    return x
