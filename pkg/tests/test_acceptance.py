"""Acceptance suite: one test per criterion, one printed line per criterion.

Exact identities run with no tolerance; the convergence checks pin the
tolerances stated alongside each criterion.  Derived thresholds were frozen
from the independent oracles (direct diagonalization, quadrature of the
closed-form law, backward-orbit enumeration) and are recorded inline.

Criterion 7's distance-ratio clause is implemented exactly as stated and is
expected to fail: the diagonalization oracle puts the successive
1-Wasserstein ratios at 1/3 (the stated band [0.46, 0.9] targets the 2/3
mass rate, which the total-variation metric does confirm — printed
alongside).  See the analysis in the project notes.
"""

import math
import time

import numpy as np

from spectral_renorm import cohomology
from spectral_renorm.conjugacy import (
    chebyshev_semiconj_check,
    conjugacy_checks,
    fiber_conjugation_check,
)
from spectral_renorm.experiments import (
    backward_equidistribution,
    skew_cantor_experiment,
    twist_experiment,
)
from spectral_renorm.pencils import (
    assemble_symbolic,
    builtin_scheme,
    det_symbolic,
    verify_recursion,
)
from spectral_renorm.ratmaps.charts import standard_chart_checks
from spectral_renorm.ratmaps.degrees import dynamical_degree
from spectral_renorm.ratmaps.maps import builtin_map
from spectral_renorm.ratmaps.poly import MultiPoly
from spectral_renorm.spectra import (
    atoms,
    cdf_distance,
    dos,
    grig_limit_measure,
    julia_backward,
    kolmogorov_to_cdf,
    tv_distance,
)
from spectral_renorm.verification import contracted_curve_report, indeterminacy_report

# frozen from the quadrature/diagonalization oracle at level 9 (criterion 4)
GRIG_K9_THRESHOLD = 0.0019531250000019984

# frozen exceptional atoms from the oracle at levels <= 5 (criterion 7):
# the first two backward images of the level-1 eigenvalue 0
HANOI_EXCEPTIONAL = [
    (1 - math.sqrt(13)) / 2,
    (1 + math.sqrt(13)) / 2,
    (1 - math.sqrt(15 - 2 * math.sqrt(13))) / 2,
    (1 + math.sqrt(15 - 2 * math.sqrt(13))) / 2,
]


def report(criterion: int, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"CRITERION {criterion:2d}: {status}  {detail}")


def test_criterion_1_schur_recursion_exactness():
    t0 = time.time()
    failures = 0
    for name, levels in (("grigorchuk", range(2, 7)),
                         ("lamplighter", range(1, 7)),
                         ("hanoi", range(2, 5))):
        scheme = builtin_scheme(name)
        for n in levels:
            rep = verify_recursion(scheme, n, samples=20, seed=1000 + n)
            failures += len(rep["failures"])
    elapsed = time.time() - t0
    ok = failures == 0 and elapsed < 120.0
    report(1, ok, f"0 failures required, got {failures}; {elapsed:.1f}s (< 120s)")
    assert failures == 0
    assert elapsed < 120.0


def test_criterion_2_closed_form_determinants():
    lam = MultiPoly.variable(2, 0)
    mu = MultiPoly.variable(2, 1)
    d1_g = det_symbolic(assemble_symbolic(builtin_scheme("grigorchuk"), 1))
    grig_ok = d1_g == (-lam + 2 - mu) * (lam + 2 - mu)
    d1_h = det_symbolic(assemble_symbolic(builtin_scheme("hanoi"), 1))
    hanoi_ok = d1_h == -1 * (lam - 1 - 2 * mu) * (lam - 1 + mu) ** 2
    report(2, grig_ok and hanoi_ok,
           f"symbolic det M1: grigorchuk={grig_ok}, hanoi={hanoi_ok}")
    assert grig_ok and hanoi_ok


def test_criterion_3_conjugacy_identities():
    ids = conjugacy_checks()
    pin = chebyshev_semiconj_check()
    fiber = fiber_conjugation_check(n_samples=100, tol=1e-9, seed=5)
    ok = (all(ids.values()) and pin["2z^2-1"] and not pin["z^2"]
          and fiber["passed"] and all(fiber["symbolic"].values()))
    report(3, ok, f"identities={ids}, normalization={pin['normalization']}, "
                  f"fiber max err={fiber['max_error']:.2e} (<= 1e-9)")
    assert all(ids.values())
    assert pin["2z^2-1"] and not pin["z^2"]
    assert fiber["passed"] and all(fiber["symbolic"].values())


def test_criterion_4_grigorchuk_dos():
    t0 = time.time()
    lim = grig_limit_measure(-1.0)
    m11 = dos("grigorchuk", 11).measure
    in_support = all(
        (-0.5 - 1e-9 <= p <= 1e-9)
        or (0.5 - 1e-9 <= p <= 1.0 + 1e-9)
        for p in m11.points
    )
    dists = {n: kolmogorov_to_cdf(dos("grigorchuk", n).measure, lim.cdf)
             for n in range(6, 12)}
    decreasing = all(dists[n + 1] < dists[n] for n in range(6, 11))
    below = dists[11] < GRIG_K9_THRESHOLD
    elapsed = time.time() - t0
    ok = in_support and decreasing and below and elapsed < 300.0
    report(4, ok, f"support ok={in_support}, K strictly decreasing={decreasing}, "
                  f"K11={dists[11]:.2e} < frozen K9={GRIG_K9_THRESHOLD:.2e}; "
                  f"{elapsed:.0f}s (< 300s)")
    assert in_support and decreasing and below
    assert elapsed < 300.0


def test_criterion_5_grigorchuk_level2_exact_atoms():
    m = dos("grigorchuk", 2).measure
    expected = sorted([(1 - math.sqrt(5)) / 4, 0.5, (1 + math.sqrt(5)) / 4, 1.0])
    ok = len(m.points) == 4
    for p, e, w in zip(m.points, expected, m.weights):
        ok = ok and abs(p - e) < 1e-10 and abs(w - 0.25) < 1e-12
    report(5, ok, "atoms {(1-sqrt5)/4, 1/2, (1+sqrt5)/4, 1}, mass 1/4 each, tol 1e-10")
    assert ok


def test_criterion_6_lamplighter_atomicity():
    t0 = time.time()
    masses = {}
    for n in (10, 11, 12):
        m = dos("lamplighter", n).measure
        clusters = atoms(m, 1e-8)
        single = 1.0 / 2 ** n
        masses[n] = sum(w for _, w in clusters if w > 1.5 * single)
    bound_ok = all(masses[n] >= 1.0 - 8.0 * n / 2 ** n for n in (10, 11, 12))
    growth = dynamical_degree(builtin_map("R_L"), iterations=8, trials=3)
    linear_ok = growth["growth"] == "linear"
    elapsed = time.time() - t0
    ok = bound_ok and linear_ok and elapsed < 300.0
    report(6, ok, f"multiplicity mass {['%.4f' % masses[n] for n in (10, 11, 12)]} "
                  f">= 1-8n/2^n, R_L growth={growth['growth']}; {elapsed:.0f}s (< 300s)")
    assert bound_ok and linear_ok
    assert elapsed < 300.0


def test_criterion_7_hanoi_atomicity_and_cantor_accumulation():
    t0 = time.time()
    # clause 1: the top eigenvalue 3 at every level with mass >= 1/3^n
    atom3_ok = True
    for n in range(1, 8):
        m = dos("hanoi", n).measure
        hit = [w for p, w in zip(m.points, m.weights) if abs(p - 3.0) < 1e-9]
        atom3_ok = atom3_ok and bool(hit) and hit[0] >= 3.0 ** (-n) - 1e-12
    # clause 2: new eigenvalues near the backward orbit or the frozen list
    pts, _ = julia_backward((1, -1, -3), 12)
    targets = np.concatenate([np.asarray(pts, dtype=float),
                              np.array(HANOI_EXCEPTIONAL)])
    near_ok = True
    prev = [c for c, _ in atoms(dos("hanoi", 1).measure, 1e-6)]
    for n in range(2, 7):
        cur = [c for c, _ in atoms(dos("hanoi", n).measure, 1e-6)]
        new = [c for c in cur if min(abs(c - p) for p in prev) > 1e-6]
        for c in new:
            near_ok = near_ok and np.min(np.abs(targets - c)) <= 0.05
        prev = cur
    # clause 3 (as stated: 1-Wasserstein): successive distance ratios
    ms = {n: dos("hanoi", n).measure for n in range(3, 8)}
    w1 = {n: cdf_distance(ms[n], ms[n + 1], "wasserstein1") for n in range(3, 7)}
    ratios = [w1[n] / w1[n - 1] for n in (4, 5, 6)]
    band_ok = all(0.46 <= r <= 0.9 for r in ratios)
    tv = {n: tv_distance(ms[n], ms[n + 1]) for n in range(3, 7)}
    tv_ratios = [tv[n] / tv[n - 1] for n in (4, 5, 6)]
    elapsed = time.time() - t0
    ok = atom3_ok and near_ok and band_ok and elapsed < 300.0
    report(7, ok,
           f"atom3={atom3_ok}, cantor accumulation={near_ok}, "
           f"W1 ratios {[f'{r:.3f}' for r in ratios]} in [0.46,0.9]={band_ok} "
           f"(TV ratios {[f'{r:.3f}' for r in tv_ratios]} do track the 2/3 target); "
           f"{elapsed:.0f}s")
    assert atom3_ok
    assert near_ok
    assert elapsed < 300.0
    assert band_ok, (
        "spec defect, expected red: the W1 metric contracts by mass x gap = 1/3 "
        f"per level (measured ratios {ratios}); the underlying 2/3 rate is a mass "
        f"rate and holds in total variation (measured {tv_ratios})")


def test_criterion_8_dynamical_degrees():
    rg = dynamical_degree(builtin_map("R_G"), iterations=7, trials=3)
    rh = dynamical_degree(builtin_map("R_H"), iterations=7, trials=2)
    rl = dynamical_degree(builtin_map("R_L"), iterations=8, trials=3)
    base_ok = (rg["growth"] == "exponential" and 1.8 <= rg["estimate"] <= 2.2
               and rh["growth"] == "exponential" and 1.8 <= rh["estimate"] <= 2.2)
    linear_ok = rl["growth"] == "linear"
    rhos = {}
    jordans = {}
    for name in ("grigorchuk4", "lamplighter2", "hanoi4"):
        x = cohomology.surface(name)
        action = cohomology.map_action(x, cohomology.PUSHFORWARD[name],
                                       cohomology.TOP_DEGREE[name])
        rhos[name] = action.spectral_radius
        jordans[name] = action.jordan_block
    rho_ok = (rhos["grigorchuk4"] == 2 and rhos["lamplighter2"] == 1
              and rhos["hanoi4"] == 2)
    jordan_ok = (not jordans["grigorchuk4"] and jordans["lamplighter2"]
                 and not jordans["hanoi4"])
    ok = base_ok and linear_ok and rho_ok and jordan_ok
    report(8, ok, f"R_G base={rg['estimate']:.3f}, R_H base={rh['estimate']:.3f} "
                  f"(in [1.8, 2.2]), R_L={rl['growth']}; rho={list(rhos.values())}, "
                  f"jordan only lamplighter={jordan_ok}")
    assert ok


def test_criterion_9_cohomology_matrices():
    reports = {name: cohomology.verify_printed_matrices(name)
               for name in ("grigorchuk4", "lamplighter2", "hanoi4")}
    all_ok = all(r["all_ok"] for r in reports.values())
    recovered = all(r["kernel_recovers_class"] for r in reports.values())
    report(9, all_ok and recovered,
           f"printed matrices verified={all_ok}, invariant classes recovered "
           f"from kernels alone={recovered}")
    assert all_ok and recovered


def test_criterion_10_contracted_curves_and_indeterminacy():
    contracted = contracted_curve_report()
    indet = indeterminacy_report()
    charts = standard_chart_checks()
    c_ok = all(r["ok"] for r in contracted)
    i_ok = all(r["ok"] for r in indet)
    ch_ok = all(charts.values())
    ok = c_ok and i_ok and ch_ok
    report(10, ok, f"{sum(r['ok'] for r in contracted)}/{len(contracted)} curves, "
                   f"{sum(r['ok'] for r in indet)}/{len(indet)} indeterminacy lists, "
                   f"{sum(charts.values())}/{len(charts)} chart facts")
    assert ok


def test_criterion_11_equidistribution_experiments():
    counts_ok = all(twist_experiment(n)["count"] == n for n in range(3, 51))
    square = backward_equidistribution("square", 1.7, 18)
    square_ok = square["series"][-1]["distance"] <= 0.02
    skew = {d: skew_cantor_experiment(3.0, d)["w1_to_balanced"] for d in range(8, 13)}
    skew_ok = all(skew[d + 1] < skew[d] for d in range(8, 12))
    ok = counts_ok and square_ok and skew_ok
    report(11, ok, f"twist counts n=3..50 all exact={counts_ok}, square W1@18="
                   f"{square['series'][-1]['distance']:.4f} (<= 0.02), "
                   f"skew W1 decreasing 8..12={skew_ok}")
    assert ok
