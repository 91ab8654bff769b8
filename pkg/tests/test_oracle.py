import random

import pytest
from hypothesis import given, settings, strategies as st

from padic_kelvin.errors import DivergenceError
from padic_kelvin.families import random_point, random_test_function
from padic_kelvin.kelvin import kelvin_transform
from padic_kelvin.operators import PiecewiseRadialFunction, RadialTail, riesz_apply_at, vt_apply_at, vt_image
from padic_kelvin.oracle import oracle_agrees, relative_gap, shell_sum_oracle
from padic_kelvin.schwartz import TestFunction, make_point
from padic_kelvin.symbolic import SymbolicScalar


def test_unit_ball_value():
    u = TestFunction.unit_ball(2, 2)
    assert abs(shell_sum_oracle(u, make_point(2, (0, 0)), 1.0) - 6 / 7) <= 1e-12


def test_zero_integrand():
    x = make_point(3, (1, 1))
    assert shell_sum_oracle(TestFunction.zero(3, 2), x, 0.7) == 0
    assert shell_sum_oracle(TestFunction.zero(3, 2), x, 0.7, kind="riesz") == 0


def test_non_decaying_tail_is_reported():
    flat = PiecewiseRadialFunction(TestFunction.zero(2, 2), (RadialTail(0, SymbolicScalar.const(1), SymbolicScalar.const(1)),))
    with pytest.raises(DivergenceError):
        shell_sum_oracle(flat, make_point(2, (0, 0)), 1.0, kind="riesz")
    with pytest.raises(DivergenceError):
        shell_sum_oracle(TestFunction.unit_ball(2, 2), make_point(2, (0, 0)), 2.5, kind="riesz")


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_vt_closed_forms_match_oracle(alpha):
    r = random.Random(int(alpha * 10))
    for _ in range(8):
        p = r.choice([2, 3])
        u = random_test_function(r, p, 2, radii=(-1, 0, 1, 2))
        x = random_point(r, p, 2, r.randrange(-3, 4))
        assert oracle_agrees(vt_apply_at(u, x), shell_sum_oracle(u, x, alpha), alpha, p, tol=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_tail_closed_forms_match_oracle(alpha):
    r = random.Random(100 + int(alpha * 10))
    for _ in range(4):
        p = r.choice([2, 3])
        u = random_test_function(r, p, 2)
        x = random_point(r, p, 2, r.randrange(-3, 4))
        ku = kelvin_transform(u)
        assert oracle_agrees(vt_apply_at(ku, x), shell_sum_oracle(ku, x, alpha), alpha, p)
        img = vt_image(u)
        assert oracle_agrees(riesz_apply_at(img, x), shell_sum_oracle(img, x, alpha, kind="riesz"), alpha, p)
        assert oracle_agrees(riesz_apply_at(u, x), shell_sum_oracle(u, x, alpha, kind="riesz"), alpha, p)


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.sampled_from([0.5, 1.0, 1.5]))
def test_oracle_property(seed, alpha):
    r = random.Random(seed)
    p, n = r.choice([2, 3, 5]), r.choice([2, 3])
    u = random_test_function(r, p, n)
    x = random_point(r, p, n, r.randrange(-2, 3))
    sym = vt_apply_at(u, x)
    assert relative_gap(sym.eval_at(alpha, p), shell_sum_oracle(u, x, alpha)) <= 1e-12
