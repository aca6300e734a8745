"""Projective maps: formulas, evaluation, degree growth, potentials."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from spectral_renorm.pencils import builtin_scheme
from spectral_renorm.ratmaps.charts import standard_chart_checks
from spectral_renorm.ratmaps.degrees import (
    classify_growth,
    compose_along_line,
    dynamical_degree,
    iterate_line_forms,
)
from spectral_renorm.ratmaps.maps import (
    IndeterminacyError,
    builtin_map,
    univariate_curve,
    verify_contracted,
)
from spectral_renorm.ratmaps.poly import MultiPoly
from spectral_renorm.ratmaps.potential import NEG_INF, RecursionPotential, potential, potential_grid
from spectral_renorm.verification import contracted_curve_report, indeterminacy_report


def test_builtin_degrees_and_formulas():
    x, y, w = (MultiPoly.variable(3, i) for i in range(3))
    rg = builtin_map("R_G")
    assert rg.degree == 3 and rg.topological_degree == 2
    assert rg.components[0] == 2 * x * x * w
    assert rg.components[1] == y * (4 * w * w - y * y) + y * x * x
    assert rg.components[2] == w * (4 * w * w - y * y)
    rl = builtin_map("R_L")
    assert rl.degree == 2
    assert rl.components == (-x * x + y * y + 2 * w * w, -2 * w * w, (y - x) * w)
    assert builtin_map("R_H").degree == 4
    with pytest.raises(ValueError):
        builtin_map("nope")


def test_involution_composes_to_identity():
    h = builtin_map("H_inv")
    hh = h.compose(h)
    x, y, w = (MultiPoly.variable(3, i) for i in range(3))
    assert hh.components == (x, y, w)


def test_second_map_factors_through_involution():
    h = builtin_map("H_inv")
    f = builtin_map("R_G")
    g = builtin_map("G_G")
    hf = h.compose(f)
    for a, b in zip(hf.components, g.components):
        assert a == b


def test_eval_examples():
    rg = builtin_map("R_G")
    assert rg.eval_exact((2, 0, 1)) == (2, 0, 1)
    assert rg.eval_exact_affine(Fraction(3, 2), Fraction(5, 2)) == (Fraction(-2), Fraction(0))
    rl = builtin_map("R_L")
    assert rl.eval_exact((0, 2, 1)) == (3, -1, 1)
    with pytest.raises(IndeterminacyError):
        rg.eval_exact((0, 2, 1))


def test_eval_projective_invariance_and_float():
    rg = builtin_map("R_G")
    rng = random.Random(5)
    for _ in range(20):
        pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(3)]
        if all(v == 0 for v in pt):
            continue
        c = Fraction(rng.randint(1, 7), rng.randint(1, 7))
        try:
            a = rg.eval_exact(pt)
            b = rg.eval_exact([c * v for v in pt])
        except IndeterminacyError:
            continue
        assert a == b
        fa = rg.eval_float([float(v) for v in pt])
        assert abs(np.linalg.norm(fa) - 1.0) < 1e-12
        exact_dir = np.array([float(v) for v in a])
        exact_dir /= np.linalg.norm(exact_dir)
        assert min(np.linalg.norm(fa - exact_dir), np.linalg.norm(fa + exact_dir)) < 1e-9


def test_degree_sequences_and_submultiplicativity():
    line = [(1, 2), (3, -1), (0, 1)]
    degs = compose_along_line(builtin_map("R_G"), line, 6)
    assert degs == [3, 7, 15, 31, 63, 127]
    for i in range(len(degs)):
        for j in range(len(degs) - i - 1):
            assert degs[i + j + 1] <= degs[i] * degs[j]
    assert compose_along_line(builtin_map("R_L"), line, 6) == [2, 3, 4, 5, 6, 7]


def test_compose_along_line_consistent_with_pointwise_eval():
    rg = builtin_map("R_G")
    line = [(1, 2), (3, -1), (0, 1)]
    forms = iterate_line_forms(rg, line, 3)[-1]
    s, t = 2, 3
    from_forms = [f.eval(s, t) if not f.is_zero() else 0 for f in forms]
    pt = (Fraction(1 * s + 2 * t), Fraction(3 * s - 1 * t), Fraction(t))
    expected = pt
    for _ in range(3):
        expected = rg.eval_exact(expected)
    cross = [from_forms[i] * expected[j] - from_forms[j] * expected[i]
             for i in range(3) for j in range(i + 1, 3)]
    assert all(v == 0 for v in cross)


def test_gcd_cancellation_idempotent():
    from spectral_renorm.ratmaps.poly import binary_forms_gcd

    rg = builtin_map("R_G")
    forms = iterate_line_forms(rg, [(1, 2), (3, -1), (0, 1)], 3)[-1]
    g = binary_forms_gcd([f for f in forms if not f.is_zero()])
    assert g.degree == 0


def test_dynamical_degree_classes():
    assert dynamical_degree(builtin_map("R_L"), 8, 3)["growth"] == "linear"
    r = dynamical_degree(builtin_map("model_square"), 6, 2)
    assert r["growth"] == "exponential" and abs(r["estimate"] - 2.0) < 1e-9
    assert dynamical_degree(builtin_map("H_inv"), 5, 2)["growth"] == "bounded"
    assert classify_growth([3, 3])["growth"] == "inconclusive"
    with pytest.raises(ValueError):
        dynamical_degree(builtin_map("R_L"), 99, 1)


def test_dynamical_degree_bounded_by_algebraic_degree():
    for name in ("R_G", "R_L"):
        m = builtin_map(name)
        r = dynamical_degree(m, 6, 2)
        if r["estimate"] is not None:
            assert r["estimate"] <= m.degree + 1e-9


def test_contracted_curves_and_indeterminacy_reports():
    assert all(r["ok"] for r in contracted_curve_report())
    assert all(r["ok"] for r in indeterminacy_report())


def test_verify_contracted_rejects_wrong_target():
    rg = builtin_map("R_G")
    curve = univariate_curve([[0, 1], [2], [1]])
    assert verify_contracted(rg, curve, (1, 1, 0))
    assert not verify_contracted(rg, curve, (1, 0, 0))


def test_chart_checks_all_pass():
    results = standard_chart_checks()
    assert results and all(results.values())


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------


def test_potential_zero_factor_gives_neg_inf():
    spec = RecursionPotential.from_scheme(builtin_scheme("grigorchuk"))
    assert potential(spec, Fraction(1, 3), Fraction(2), 5) == NEG_INF


def test_potential_stabilizes_along_orbit():
    spec = RecursionPotential.from_scheme(builtin_scheme("grigorchuk"))
    u18 = potential(spec, -1.0, 0.2, 18)
    u20 = potential(spec, -1.0, 0.2, 20)
    assert math.isfinite(u18) and abs(u20 - u18) < 1e-6


def test_potential_lamplighter_tail_decay():
    spec = RecursionPotential.from_scheme(builtin_scheme("lamplighter"))
    values = {n: potential(spec, 0.37, 1.21, n) for n in (8, 10, 12, 14)}
    for n in (8, 10, 12):
        assert abs(values[n + 2] - values[n]) < 40 * (n / 2 ** n)


def test_potential_grid_constant_seed_is_zero_field():
    one = MultiPoly.constant(2, 1)
    spec = RecursionPotential(map=builtin_map("R_G"), factors=(), seed=one, d=2)
    grid = potential_grid(spec, (-2, 2, -2, 2), 16, 3)
    assert np.allclose(grid["values"], 0.0)


def test_potential_grid_flags_factor_zeros():
    spec = RecursionPotential.from_scheme(builtin_scheme("grigorchuk"))
    grid = potential_grid(spec, (-4, 4, -4, 4), 33, 4)
    # mu = 2 row sits on the factor zero set 4 - mu^2 = 0
    row = np.argmin(np.abs(grid["ys"] - 2.0))
    assert grid["neg_inf_mask"][row].any()
    with pytest.raises(ValueError):
        potential_grid(spec, (-1, 1, -1, 1), 4096, 2)


def test_potential_hanoi_depth_zero_ridges():
    spec = RecursionPotential.from_scheme(builtin_scheme("hanoi"))
    # points on lam^2 = (1+mu)^2 are exact factor zeros
    assert potential(spec, Fraction(3), Fraction(2), 3) == NEG_INF
    assert potential(spec, Fraction(-3), Fraction(2), 3) == NEG_INF
