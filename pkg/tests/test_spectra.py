"""Eigenvalue measures, densities of states, limit laws."""

import math

import numpy as np
import pytest

from spectral_renorm.spectra import (
    DOS_BUDGET,
    Measure1D,
    atoms,
    cdf_distance,
    convergence_report,
    dos,
    free_abelian_samples,
    free_group_density,
    grig_limit_measure,
    julia_backward,
    kolmogorov_to_cdf,
    repelling_fixed_point,
    sym_eigenvalues,
    tv_distance,
)

SQRT5 = math.sqrt(5.0)


def test_sym_eigenvalues_examples_and_errors():
    vals = sym_eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(vals, [-1.0, 1.0])
    vals = sym_eigenvalues(np.eye(16))
    assert np.allclose(vals, 1.0)
    with pytest.raises(ValueError):
        sym_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_grigorchuk_level2_sliced_matrix_spectrum():
    from spectral_renorm.spectra import slice_matrix

    vals = sym_eigenvalues(slice_matrix("grigorchuk", 2))
    assert np.allclose(vals, sorted([-SQRT5, 1.0, SQRT5, 3.0]), atol=1e-10)


def test_dos_level_one_atoms():
    assert atoms(dos("grigorchuk", 1).measure, 1e-9) == [(0.5, 0.5), (1.0, 0.5)]
    got = atoms(dos("lamplighter", 1).measure, 1e-9)
    assert got == [(0.0, 0.5), (4.0, 0.5)]
    got = atoms(dos("hanoi", 1).measure, 1e-9)
    assert len(got) == 2
    assert abs(got[0][0]) < 1e-12 and abs(got[0][1] - 2 / 3) < 1e-12
    assert abs(got[1][0] - 3.0) < 1e-12 and abs(got[1][1] - 1 / 3) < 1e-12


def test_dos_grigorchuk_level2_exact_atoms():
    m = dos("grigorchuk", 2).measure
    expected = sorted([(1 - SQRT5) / 4, 0.5, (1 + SQRT5) / 4, 1.0])
    assert len(m.points) == 4
    for p, e, w in zip(m.points, expected, m.weights):
        assert abs(p - e) < 1e-10
        assert abs(w - 0.25) < 1e-15


def test_dos_counts_and_mass():
    for tag, d in (("grigorchuk", 2), ("lamplighter", 2), ("hanoi", 3)):
        for n in (1, 2, 3):
            r = dos(tag, n)
            assert abs(r.measure.mass - 1.0) < 1e-12
            size = d ** n
            mult = [round(w * size) for w in r.measure.weights]
            assert sum(mult) == size


def test_dos_budget_and_slice_flag():
    with pytest.raises(ValueError):
        dos("hanoi", 8)
    with pytest.raises(ValueError):
        dos("nope", 2)
    # the determinant is even in lam: slices at -1 and +1 agree
    a = dos("grigorchuk", 5, grig_slice=-1.0).measure
    b = dos("grigorchuk", 5, grig_slice=1.0).measure
    assert np.allclose(a.points, b.points, atol=1e-9)


def test_eigenvalue_bounds():
    assert all(-4 - 1e-9 <= p <= 4 + 1e-9 for p in dos("lamplighter", 6).measure.points)
    assert all(-3 - 1e-9 <= p <= 3 + 1e-9 for p in dos("hanoi", 5).measure.points)
    assert all(-1 - 1e-9 <= p <= 1.5 for p in dos("grigorchuk", 6).measure.points)


@pytest.mark.parametrize("tag", ["grigorchuk", "lamplighter", "hanoi"])
def test_spectrum_nesting(tag):
    for n in range(1, 6):
        lo = dos(tag, n).measure.points
        hi = np.array(dos(tag, n + 1).measure.points)
        for p in lo:
            assert np.min(np.abs(hi - p)) < 1e-7


def test_atoms_merging():
    m = Measure1D.from_samples([1.0, 1.0 + 1e-12], [0.5, 0.5])
    assert atoms(m, 1e-9) == [(pytest.approx(1.0), pytest.approx(1.0))]
    lamp4 = dos("lamplighter", 4).measure
    top = [w for p, w in zip(lamp4.points, lamp4.weights) if abs(p - 4) < 1e-9]
    assert top and top[0] >= 1 / 16 - 1e-12
    with pytest.raises(ValueError):
        atoms(m, 0.0)


def test_measure_invariants():
    with pytest.raises(ValueError):
        Measure1D(points=(1.0, 1.0), weights=(0.5, 0.5))
    with pytest.raises(ValueError):
        Measure1D(points=(0.0, 1.0), weights=(0.5, -0.5))


def test_cdf_distance_examples():
    m = dos("grigorchuk", 3).measure
    assert cdf_distance(m, m, "kolmogorov") == 0.0
    assert cdf_distance(m, m, "wasserstein1") == 0.0
    d0 = Measure1D(points=(0.0,), weights=(1.0,))
    d1 = Measure1D(points=(1.0,), weights=(1.0,))
    assert abs(cdf_distance(d0, d1, "wasserstein1") - 1.0) < 1e-15
    assert cdf_distance(d0, d1, "kolmogorov") == 1.0
    with pytest.raises(ValueError):
        cdf_distance(d0, Measure1D(points=(0.0,), weights=(0.5,)), "kolmogorov")
    with pytest.raises(ValueError):
        cdf_distance(d0, d1, "nope")


def test_grigorchuk_kolmogorov_monotone_improvement():
    lim = grig_limit_measure(-1.0)
    k6 = kolmogorov_to_cdf(dos("grigorchuk", 6).measure, lim.cdf)
    k4 = kolmogorov_to_cdf(dos("grigorchuk", 4).measure, lim.cdf)
    k8 = kolmogorov_to_cdf(dos("grigorchuk", 8).measure, lim.cdf)
    assert k8 < k6 < k4


def test_grig_limit_measure_closed_form():
    lim = grig_limit_measure(-1.0)
    assert lim.support() == [(-0.5, 0.0), (0.5, 1.0)]
    assert lim.cdf(1.0) == 1.0
    assert lim.cdf(-0.5) == 0.0
    assert abs(lim.cdf(0.25) - 0.5) < 1e-15  # gap between the two intervals
    with pytest.raises(ValueError):
        grig_limit_measure(0.0)


def test_grig_limit_cdf_against_quadrature_oracle():
    scipy = pytest.importorskip("scipy.integrate")
    lim = grig_limit_measure(-1.0)

    def density(x):
        # pushforward of the Chebyshev weight under both branches, then the
        # affine transform: differentiate theta*(mu) = (5 - mu^2)/4, mu = 4x-1
        mu = 4.0 * x - 1.0
        amu = abs(mu)
        if not 1.0 < amu < 3.0:
            return 0.0
        theta = (amu * amu - 5.0) / 4.0
        dtheta = amu / 2.0
        cheb = 1.0 / (math.pi * math.sqrt(1.0 - theta * theta))
        return 0.5 * cheb * dtheta * 4.0

    for x in (0.6, 0.75, 0.9, -0.1, -0.3):
        val, _ = scipy.quad(density, -0.51, x, limit=300,
                            points=[-0.5, 0.0, 0.5, 1.0] if x > 0.5 else [-0.5, 0.0])
        assert abs(val - lim.cdf(x)) < 1e-6


def test_grig_limit_upper_branch_median():
    # the median of the upper branch sits at theta = 0, i.e. mu = sqrt(5),
    # transformed to x = (1 + sqrt 5)/4
    lim = grig_limit_measure(-1.0)
    x_med = (1.0 + math.sqrt(5.0)) / 4.0
    assert abs(lim._branch_cdf(4.0 * x_med - 1.0, +1) - 0.5) < 1e-12


def test_grig_limit_sampler_matches_cdf():
    lim = grig_limit_measure(-1.0)
    rng = np.random.default_rng(0)
    samples = lim.sample(rng, 40000)
    emp = Measure1D.from_samples(samples, np.full(len(samples), 1.0 / len(samples)))
    assert kolmogorov_to_cdf(emp, lim.cdf) < 0.02


def test_julia_backward_examples():
    pts, _ = julia_backward((1, -1, -3), 0)
    assert list(pts) == [3.0]
    pts, _ = julia_backward((1, -1, -3), 1)
    assert sorted(pts) == [-2.0, 3.0]
    pts, _ = julia_backward((1, 0, 0), 3, domain="complex")
    assert np.allclose(np.abs(pts), 1.0)
    assert len(pts) == 8
    # the full backward orbit stays inside [-2, 3]
    pts, _ = julia_backward((1, -1, -3), 12)
    assert pts.min() >= -2.0 - 1e-9 and pts.max() <= 3.0 + 1e-9
    assert repelling_fixed_point(1, -1, -3) == 3.0
    with pytest.raises(ValueError):
        julia_backward((1, -1, -3), 20)


def test_julia_random_walk_mode():
    pts, measure = julia_backward((1, -1, -3), 30, mode="random_walk", samples=512, seed=1)
    assert len(pts) == 512
    assert measure.mass == pytest.approx(1.0)


def test_convergence_report_structure():
    rep = convergence_report("grigorchuk", range(4, 8))
    assert rep["target"] == "continuous limit law"
    dists = [r["distance"] for r in rep["rows"]]
    assert all(b < a for a, b in zip(dists, dists[1:]))
    rep = convergence_report("hanoi", range(3, 7))
    assert all("tv_to_next" in r for r in rep["rows"])
    with pytest.raises(ValueError):
        convergence_report("grigorchuk", [4, 5])


def test_tv_distance():
    a = Measure1D(points=(0.0, 1.0), weights=(0.5, 0.5))
    b = Measure1D(points=(0.0, 2.0), weights=(0.5, 0.5))
    assert tv_distance(a, b) == pytest.approx(1.0)
    assert tv_distance(a, a) == 0.0


def test_reference_densities():
    xs = np.linspace(-1, 1, 101)
    vals = free_group_density(2, xs)
    assert vals.min() >= 0
    bound = math.sqrt(3) / 2
    assert vals[np.abs(xs) > bound + 0.01].max() == 0.0
    samples = free_abelian_samples(3, 2000, seed=1)
    assert abs(samples.mean()) < 0.05 and np.abs(samples).max() <= 1.0
