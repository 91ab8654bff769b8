import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_kelvin.errors import DivergenceError
from padic_kelvin.symbolic import (
    S,
    SymbolicScalar,
    convergence_region,
    geometric_tail,
    scalar_c,
    scalar_c_printed,
    scalar_d,
    scalar_dl,
    to_number,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def scalars(draw):
    num = draw(st.lists(small, min_size=0, max_size=4))
    den = draw(st.lists(small, min_size=1, max_size=3))
    den[-1] = den[-1] or Fraction(1)
    return SymbolicScalar(num, den)


@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if not a.is_zero():
        assert a * a.inverse() == 1
        assert (a / a) == SymbolicScalar.const(1)


@given(scalars())
def test_canonical_form(a):
    if not a.is_zero():
        assert a.den[-1] == 1
    assert SymbolicScalar.parse(str(a)) == a
    assert hash(SymbolicScalar.parse(str(a))) == hash(a)


def test_parse_factored_form():
    x = SymbolicScalar.parse("(3*s)/((1-s)*(4-s))")
    assert x == 3 * S / ((1 - S) * (4 - S))
    assert str(x) == "(3*s)/(s^2-5*s+4)"
    assert SymbolicScalar.parse("s^-2 + 1/3") == S**-2 + Fraction(1, 3)
    for bad in ("s^s", "2.5*s", "x+1", "(s"):
        with pytest.raises(ValueError):
            SymbolicScalar.parse(bad)


def test_laurent_monomials():
    x = S**-3 * Fraction(2, 5)
    assert x.monomial_parts() == (Fraction(2, 5), -3)
    assert (x * S**3) == Fraction(2, 5)


@given(scalars(), st.floats(0.1, 1.9))
def test_eval_matches_float_recomputation(a, alpha):
    s = 2.0**-alpha
    den = sum(float(c) * s**i for i, c in enumerate(a.den))
    if abs(den) < 1e-6:
        return
    direct = sum(float(c) * s**i for i, c in enumerate(a.num)) / den
    assert math.isclose(a.eval_at(alpha, 2), direct, rel_tol=1e-12, abs_tol=1e-12)


def test_printed_constant_examples():
    assert scalar_c_printed(2, 2) == 1 / (1 - S / 4)
    assert scalar_c_printed(2, 3) == 2 / (1 - S / 9)
    assert scalar_c_printed(2, 5).eval_s(0) == 4


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (5, 3)])
def test_adopted_constant_is_q_alpha_form(p, n):
    c = scalar_c(n, p)
    for alpha in (0.3, 1.0, 1.7):
        expected = (p**alpha - 1) / (1 - p ** (-alpha - n))
        assert math.isclose(c.eval_at(alpha, p), expected, rel_tol=1e-13)
    # agrees with the (p - 1) form only at alpha = 1
    assert math.isclose(c.eval_at(1.0, p), scalar_c_printed(n, p).eval_at(1.0, p), rel_tol=1e-13)


def test_riesz_constant_pole_at_alpha_n():
    d = scalar_d(2, 2)
    with pytest.raises(DivergenceError):
        d.eval_s(Fraction(1, 4))
    assert math.isfinite(d.eval_at(1.0, 2))
    expected = (1 - 2**-1.0) / (1 - 2 ** (1.0 - 2))
    assert math.isclose(d.eval_at(1.0, 2), expected, rel_tol=1e-13)


def test_dl_constant_equals_c():
    for p, n in [(2, 2), (3, 3)]:
        assert scalar_dl(n, p) == scalar_c(n, p)


def test_geometric_tail_examples():
    assert geometric_tail(1, S) == S / (1 - S)
    r = 1 / (4 * S)
    g = geometric_tail(0, r)
    assert g == 1 / (1 - r)
    assert convergence_region(r, 2) == (0.0, 2.0)
    alpha = 1.0
    rv = to_number(r, alpha, 2)
    partial = math.fsum(rv**k for k in range(200))
    assert abs(partial - g.eval_at(alpha, 2)) <= 1e-12
    assert geometric_tail(0, SymbolicScalar.const(0)) == 1
    assert geometric_tail(2, SymbolicScalar.const(0)) == 0
    with pytest.raises(DivergenceError):
        geometric_tail(0, SymbolicScalar.const(1))
    with pytest.raises(DivergenceError):
        geometric_tail(0, 1.5)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("k0,ratio", [(1, S), (3, S / 4), (-2, S / 9), (0, S**2 / 3)])
def test_geometric_tail_partial_sums(alpha, k0, ratio):
    p = 2
    rv = to_number(ratio, alpha, p)
    total, k = 0.0, k0
    while True:
        term = rv**k
        total += term
        if abs(rv ** (k + 1)) / (1 - abs(rv)) < 1e-15:
            break
        k += 1
    assert abs(total - geometric_tail(k0, ratio).eval_at(alpha, p)) <= 1e-12 * max(1, abs(total))
