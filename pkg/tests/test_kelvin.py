import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_kelvin.errors import DomainError, PreconditionError
from padic_kelvin.extension import get_context, norm_exponent
from padic_kelvin.families import chain_family, kelvin_family, random_padic, random_point, random_test_function, shell_points
from padic_kelvin.kelvin import (
    InversionMap,
    RadialRegion,
    image_ball,
    invert_point,
    kelvin_covariance_residual,
    kelvin_pointwise,
    kelvin_transform,
    reflect,
    verify_harmonicity,
    verify_kelvin_identity,
    verify_riesz_inversion_chain,
)
from padic_kelvin.operators import vt_apply_at
from padic_kelvin.oracle import shell_sum_oracle
from padic_kelvin.padic import DEFAULT_PRECISION, PAdic
from padic_kelvin.schwartz import Ball, TestFunction, make_point, points_agree
from padic_kelvin.spectral import make_eigenfunction
from padic_kelvin.symbolic import S, SymbolicScalar

from conftest import points


def test_invert_t():
    assert invert_point(make_point(2, (0, 1))) == make_point(2, (-1, -1))
    assert InversionMap(get_context(2, 2))(make_point(2, (0, 1))) == make_point(2, (-1, -1))


def test_origin_rejected():
    with pytest.raises(DomainError):
        invert_point(make_point(3, (0, 0)))


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (5, 3)])
def test_involution_and_reciprocity(p, n):
    @given(points(p, n, -4, 4))
    def check(x):
        jx = invert_point(x)
        assert norm_exponent(jx) == -norm_exponent(x)
        assert points_agree(invert_point(jx), x, DEFAULT_PRECISION - 2)

    check()


def test_norm_one_third():
    x = make_point(3, (3, 9))
    assert norm_exponent(invert_point(x)) == 1


def _sample_ball(rng, b: Ball, inside: bool):
    p, n = b.p, b.n
    while True:
        k = -b.radius_exp - rng.randrange(0, 3) if inside else -b.radius_exp + 1 + rng.randrange(0, 3)
        h = random_point(rng, p, n, k)
        y = tuple(PAdic.zero(p, 40) + c + Fraction(a) for c, a in zip(h, b.center))
        if all(c.is_zero for c in y):
            continue
        return y


@pytest.mark.parametrize(
    "p,center,r,expected",
    [
        (2, (0, 1), 1, 1),
        (3, (1, 1), 2, 2),
        (3, (3, 0), 3, 1),
        (5, (Fraction(1, 5), 2), 0, 2),
    ],
)
def test_image_ball_geometry(p, center, r, expected, rng):
    b = Ball(p, tuple(Fraction(c) for c in center), r)
    img, v = image_ball(b)
    assert img.radius_exp == expected
    for _ in range(50):
        y = _sample_ball(rng, b, True)
        jy = invert_point(y)
        assert img.contains(jy)
        assert norm_exponent(jy) == v
    for _ in range(50):
        y = _sample_ball(rng, b, False)
        assert not img.contains(invert_point(y))


def test_image_ball_center_t():
    img, v = image_ball(Ball(2, (Fraction(0), Fraction(1)), 1))
    assert img.center == (Fraction(1), Fraction(1)) and v == 0


def test_image_ball_rejects_origin():
    with pytest.raises(DomainError):
        image_ball(Ball(2, (Fraction(0), Fraction(1)), 0))


def test_unit_ball_kelvin_is_pure_tail():
    p, n = 3, 2
    ku = kelvin_transform(TestFunction.unit_ball(p, n))
    assert ku.compact.terms == () and len(ku.tails) == 1
    for k in range(0, 4):
        x = make_point(p, (Fraction(p) ** -k, 0))
        assert ku.evaluate(x) == S**-k * Fraction(p) ** (-k * n)
    assert ku.evaluate(make_point(p, (p, 0))) == 0


def test_kelvin_matches_definition(rng):
    for p, n in [(2, 2), (3, 3)]:
        for _, u in kelvin_family(p, n):
            ku = kelvin_transform(u)
            for _ in range(30):
                x = random_point(rng, p, n, rng.randrange(-4, 5))
                assert ku.evaluate(x) == kelvin_pointwise(u, x)


def test_single_ball_gives_single_weighted_ball():
    u = TestFunction.indicator(3, (1, 0), 2, SymbolicScalar.const(5))
    ku = kelvin_transform(u)
    assert ku.tails == () and len(ku.compact.terms) == 1
    assert ku.compact.terms[0][1] == 5  # ||y|| = 1 on the image, so the weight is 1


def test_double_kelvin_is_identity(rng):
    p, n = 2, 3
    u = random_test_function(rng, p, n)
    for _ in range(20):
        x = random_point(rng, p, n, rng.randrange(-3, 4))
        k = norm_exponent(x)
        # K(K u)(x) = ||x||^(alpha-n) (K u)(J x)
        weight = S**-k * Fraction(p) ** (-n * k)
        assert weight * kelvin_transform(u).evaluate(invert_point(x)) == u(x)


def test_kelvin_at_origin_is_zero():
    u = TestFunction.unit_ball(2, 2)
    assert kelvin_transform(u).evaluate(make_point(2, (0, 0))) == 0
    assert kelvin_pointwise(u, make_point(2, (0, 0))) == 0


def test_kelvin_alpha_policy():
    u = TestFunction.unit_ball(2, 2)
    with pytest.raises(DomainError):
        kelvin_transform(u, 2.0)
    kelvin_transform(u, 1.9)


def test_inverted_point_form_is_identically_zero():
    for p, n in [(2, 2), (3, 2), (5, 3)]:
        for _, u in kelvin_family(p, n):
            for x in shell_points(p, n, 11, per_shell=1):
                assert kelvin_covariance_residual(u, x) == 0


def test_same_point_form_unit_ball_at_norm_p():
    # the same-point comparison D u(x) vs ||x||^(alpha+n) D(Ku)(x) does not vanish
    p, n = 2, 2
    u = TestFunction.unit_ball(p, n)
    x = make_point(p, (Fraction(1, 2), 0))
    residual = verify_kelvin_identity(u, x)
    assert residual == -1
    # both sides confirmed independently of the closed forms
    alpha = n / 2
    lhs = shell_sum_oracle(u, x, alpha)
    rhs = (2.0 ** (alpha + n)) * shell_sum_oracle(kelvin_transform(u), x, alpha)
    assert abs((lhs - rhs) - (-1.0)) < 1e-12


def test_same_point_form_zero_function():
    assert verify_kelvin_identity(TestFunction.zero(2, 2), make_point(2, (1, 0))) == 0


def test_same_point_form_equals_gap_between_x_and_Jx(rng):
    p, n = 3, 2
    u = random_test_function(rng, p, n)
    for _ in range(10):
        x = random_point(rng, p, n, rng.randrange(-3, 4))
        gap = vt_apply_at(u, x) - vt_apply_at(u, invert_point(x))
        assert verify_kelvin_identity(u, x) == gap


def test_chain_identity():
    for p, n in [(2, 2), (3, 3)]:
        for _, f in chain_family(p, n):
            for x in shell_points(p, n, 5, per_shell=1):
                assert verify_riesz_inversion_chain(f, x) == 0


def test_chain_example_and_linearity(rng):
    p, n = 2, 2
    f = TestFunction.indicator(p, (1, 0), 1)
    g = TestFunction.indicator(p, (0, Fraction(1, 2)), 0, SymbolicScalar.const(3))
    x = make_point(p, (Fraction(1, 2), 0))  # |x|_L = p^n
    assert verify_riesz_inversion_chain(f, x) == 0
    assert verify_riesz_inversion_chain(TestFunction.zero(p, n), x) == 0
    both = verify_riesz_inversion_chain(f + g, x)
    assert both == verify_riesz_inversion_chain(f, x) + verify_riesz_inversion_chain(g, x)


def test_chain_precondition():
    with pytest.raises(PreconditionError):
        verify_riesz_inversion_chain(TestFunction.unit_ball(2, 2), make_point(2, (1, 0)))


def test_reflect_is_composition_with_inversion(rng):
    p, n = 3, 2
    f = TestFunction.indicator(p, (1, 2), 2) + TestFunction.indicator(p, (Fraction(1, 3), 0), 0)
    fs = reflect(f)
    for _ in range(30):
        y = random_point(rng, p, n, rng.randrange(-3, 4))
        assert fs(y) == f(invert_point(y))


def test_radial_region_image():
    g = RadialRegion(lo=1)
    jg = g.image()
    assert jg == RadialRegion(None, -1)
    assert jg.contains(make_point(2, (2, 0))) and not jg.contains(make_point(2, (1, 0)))
    assert not jg.contains(make_point(2, (0, 0)))


def test_harmonicity_of_kelvin_image(rng):
    p, n = 2, 2
    f, _ = make_eigenfunction((Fraction(1, 2), 0), p)
    pts = [random_point(rng, p, n, -1 - i % 3) for i in range(10)]
    for alpha in (0.5, 1.0):
        rep = verify_harmonicity(f, RadialRegion(lo=1), pts, alpha)
        assert rep.max_abs <= 1e-10
    zero = verify_harmonicity(TestFunction.zero(p, n), RadialRegion(lo=1), pts, 1.0)
    assert zero.max_abs == 0


def test_harmonicity_outside_region(rng):
    p, n = 2, 2
    f, _ = make_eigenfunction((Fraction(1, 2), 0), p)
    bad = [random_point(rng, p, n, 1)]
    with pytest.raises(PreconditionError):
        verify_harmonicity(f, RadialRegion(lo=1), bad, 1.0)
    rep = verify_harmonicity(f, RadialRegion(lo=1), bad, 1.0, strict=False)
    assert rep.values == [] and len(rep.outside) == 1


def test_harmonicity_checks_hypothesis(rng):
    # the unit ball is not harmonic on {||x|| > 1}
    p, n = 2, 2
    with pytest.raises(PreconditionError):
        verify_harmonicity(TestFunction.unit_ball(p, n), RadialRegion(lo=1), [random_point(rng, p, n, -1)], 1.0)
