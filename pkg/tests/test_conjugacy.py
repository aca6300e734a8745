"""Symbolic conjugacy identities and quadratic-extension arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_renorm.conjugacy import (
    QuadExtElement,
    QuadExtFraction,
    RationalFunction2,
    chebyshev_semiconj_check,
    chebyshev_rf,
    compose_rf,
    compose_univariate,
    conjugacy_checks,
    fiber_checks_symbolic,
    fiber_conjugation_check,
    grig_invariant,
    grig_semiconjugator,
    map_affine,
    verify_identity,
)
from spectral_renorm.ratmaps.poly import MultiPoly


def test_rational_function_algebra():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    f = RationalFunction2(x, y)
    g = RationalFunction2(y, x)
    assert (f * g).equals(RationalFunction2.const(2, 1))
    assert (f + g).equals(RationalFunction2(x * x + y * y, x * y))
    assert (f - f).is_zero()
    with pytest.raises(ZeroDivisionError):
        f / RationalFunction2(MultiPoly.zero(2), y)
    with pytest.raises(ZeroDivisionError):
        RationalFunction2(x, MultiPoly.zero(2))


def test_compose_rf_matches_numeric_evaluation():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    expr = RationalFunction2(x * x + y, x - y)
    f = RationalFunction2(x + 1, y)
    g = RationalFunction2(x * y, MultiPoly.constant(2, 1))
    composed = compose_rf(expr, (f, g))
    pt = (Fraction(2), Fraction(3))
    inner = (f.eval(pt), g.eval(pt))
    assert composed.eval(pt) == expr.eval(inner)


def test_all_conjugacy_identities_exact():
    results = conjugacy_checks()
    assert results == {
        "grig_phi_invariant": True,
        "grig_psi_chebyshev": True,
        "lamplighter_skew_conjugation": True,
        "hanoi_skew_conjugation": True,
    }


def test_chebyshev_normalization_pinned():
    report = chebyshev_semiconj_check()
    assert report["2z^2-1"] is True
    assert report["z^2"] is False
    assert report["normalization"] == "2z^2-1"


def test_broken_identity_detected():
    f = map_affine("R_G")
    psi = grig_semiconjugator()
    wrong = compose_univariate(chebyshev_rf(), grig_invariant())
    assert not compose_rf(psi, f).equals(wrong)
    with pytest.raises(ValueError):
        verify_identity((psi,), (psi, psi))


def test_quad_ext_reduction():
    eta = MultiPoly.variable(2, 0)
    s = QuadExtElement.root()
    s2 = s * s
    assert s2.q.is_zero() and s2.p == eta * eta - 1
    conj_product = s * s.conj()
    assert conj_product.p == -(eta * eta - 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_quad_ext_fraction_field_axioms(a, b, c, d):
    one = QuadExtFraction.of(1)
    s = QuadExtFraction.of(QuadExtElement.root())
    x = QuadExtFraction.of(a) + b * s
    y = QuadExtFraction.of(c) + d * s
    assert (x + y - y).equals(x)
    assert (x * y).equals(y * x)
    if not y.num.is_zero():
        assert ((x / y) * y).equals(x)
    assert (x * one).equals(x)


def test_fiber_symbolic_identities():
    assert fiber_checks_symbolic() == {
        "fiber_return_is_square": True,
        "psi_is_zhukovsky": True,
    }


def test_fiber_float_spot_check():
    report = fiber_conjugation_check(n_samples=50, tol=1e-9, seed=3)
    assert report["passed"]
    assert report["max_error"] <= 1e-9


def test_fiber_tangency_value():
    # z = 1 maps to the tangency point and the semi-conjugator value is 1
    import numpy as np

    eta = 1.7 + 0.3j
    s = np.sqrt(eta * eta - 1)
    z = 1.0 + 1e-13
    d = 1 + z * z + eta * s * (z * z - 1) - eta * eta * (1 + z * z)
    lam = -4 * (eta * eta - 1) * z / d
    mu = 2 * s * (z - 1) * (z + 1) / d
    psi_val = (4 - mu * mu + lam * lam) / (4 * lam)
    assert abs(psi_val - 1.0) < 1e-9
