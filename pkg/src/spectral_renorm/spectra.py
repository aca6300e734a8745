"""Eigenvalue measures of sliced pencils and their limit laws.

The density of states at level n is the normalized eigenvalue-counting
measure of the level-n operator on d^n vertices; the builtin slices are

- grigorchuk:  eigenvalues mu of a + b + c + d - 1 (the pencil on the line
  lam = -1), pushed through x = (mu + 1) / 4;
- lamplighter: eigenvalues lam of a + a^-1 + b + b^-1 (line mu = 0);
- hanoi:       eigenvalues lam of a + b + c (line mu = 1).

The grigorchuk limit law is the slice of an explicit family of hyperbolas
weighted by the Chebyshev equilibrium measure; it has a closed-form CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from spectral_renorm import groups
from spectral_renorm.groups import build_group, level_action

DOS_BUDGET = {"grigorchuk": 12, "lamplighter": 12, "hanoi": 7}


@dataclass(frozen=True)
class Measure1D:
    """Finite atomic measure on the line: sorted points, positive weights."""

    points: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.points) != len(self.weights):
            raise ValueError("points and weights differ in length")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise ValueError("points must be strictly increasing")

    @classmethod
    def from_samples(cls, values: Sequence[float], weights: Sequence[float] | None = None):
        """Build from unsorted, possibly repeated values; equal values merge."""
        vals = np.asarray(values, dtype=float)
        if weights is None:
            w = np.full(vals.shape, 1.0 / len(vals))
        else:
            w = np.asarray(weights, dtype=float)
        order = np.argsort(vals, kind="stable")
        vals, w = vals[order], w[order]
        pts: list = []
        wts: list = []
        for v, ww in zip(vals, w):
            if pts and v == pts[-1]:
                wts[-1] += ww
            else:
                pts.append(float(v))
                wts.append(float(ww))
        return cls(points=tuple(pts), weights=tuple(wts))

    @property
    def mass(self) -> float:
        return float(sum(self.weights))

    def __len__(self):
        return len(self.points)

    def cdf(self, x: float) -> float:
        total = 0.0
        for p, w in zip(self.points, self.weights):
            if p <= x:
                total += w
            else:
                break
        return total

    def cdf_array(self, xs: np.ndarray) -> np.ndarray:
        pts = np.asarray(self.points)
        cum = np.cumsum(self.weights)
        idx = np.searchsorted(pts, xs, side="right")
        out = np.zeros_like(np.asarray(xs, dtype=float))
        mask = idx > 0
        out[mask] = cum[idx[mask] - 1]
        return out


@dataclass(frozen=True)
class DOSResult:
    """Density of states at one level."""

    group: str
    level: int
    slice_descriptor: str
    measure: Measure1D
    residual_bound: float


def sym_eigenvalues(matrix: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, ascending.

    The input must be symmetric to 1e-12 relative; a handful of eigenpairs
    are spot-checked against the residual bound ||Mv - ev|| <= tol * ||M||.
    """
    m = np.asarray(matrix, dtype=float)
    scale = max(1.0, float(np.abs(m).max()))
    if float(np.abs(m - m.T).max()) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    vals, vecs = np.linalg.eigh(m)
    norm = float(np.linalg.norm(m, 2)) if m.shape[0] <= 2 else float(np.abs(vals).max())
    norm = max(norm, 1e-300)
    idx = np.linspace(0, len(vals) - 1, min(len(vals), 5)).astype(int)
    for i in idx:
        res = float(np.linalg.norm(m @ vecs[:, i] - vals[i] * vecs[:, i]))
        if res > tol * norm:
            raise ArithmeticError(f"eigenpair residual {res:.3e} exceeds {tol:.1e} * ||M||")
    return vals


def slice_matrix(group_tag: str, n: int, grig_slice: float = -1.0) -> np.ndarray:
    """Dense symmetric matrix of the sliced pencil at level n.

    Permutation summands are accumulated in place (one 2^n x 2^n allocation
    total; level 12 is ~130 MB, which is the budget boundary).
    """

    def accumulate(group, words_coeffs, size, diag=0.0):
        m = np.zeros((size, size))
        cols = np.arange(size)
        for word, coeff in words_coeffs:
            rows = np.asarray(level_action(group, word, n).perm)
            np.add.at(m, (rows, cols), coeff)
        if diag:
            m[cols, cols] += diag
        return m

    if group_tag == "grigorchuk":
        g = build_group("grigorchuk")
        words = [("a", -float(grig_slice)), ("b", 1.0), ("c", 1.0), ("d", 1.0)]
        return accumulate(g, words, 2 ** n, diag=-1.0)
    if group_tag == "lamplighter":
        g = build_group("lamplighter")
        words = [("a", 1.0), ("a'", 1.0), ("b", 1.0), ("b'", 1.0)]
        return accumulate(g, words, 2 ** n)
    if group_tag == "hanoi":
        g = build_group("hanoi")
        words = [("a", 1.0), ("b", 1.0), ("c", 1.0)]
        return accumulate(g, words, 3 ** n)
    raise ValueError(f"unknown group tag '{group_tag}'")


@lru_cache(maxsize=64)
def _dos_eigenvalues(group_tag: str, n: int, grig_slice: float) -> tuple:
    m = slice_matrix(group_tag, n, grig_slice)
    vals = sym_eigenvalues(m)
    return tuple(float(v) for v in vals)


def dos(group_tag: str, n: int, grig_slice: float = -1.0) -> DOSResult:
    """Density of states of the level-n Schreier graph slice.

    For the grigorchuk tag the returned measure lives on the transformed
    axis x = (mu + 1)/4; ``grig_slice`` selects the line lam = grig_slice
    (the determinant is even in lam, so -1 and +1 agree; both are exposed).
    """
    budget = DOS_BUDGET.get(group_tag)
    if budget is None:
        raise ValueError(f"unknown group tag '{group_tag}'")
    if not 1 <= n <= budget:
        raise ValueError(f"level {n} outside the budget 1..{budget} for {group_tag}")
    vals = np.array(_dos_eigenvalues(group_tag, n, float(grig_slice)))
    if group_tag == "grigorchuk":
        vals = (vals + 1.0) / 4.0
        descriptor = f"lam={grig_slice:g}, x=(mu+1)/4"
    elif group_tag == "lamplighter":
        descriptor = "mu=0"
    else:
        descriptor = "mu=1"
    size = len(vals)
    measure = Measure1D.from_samples(vals, np.full(size, 1.0 / size))
    return DOSResult(group=group_tag, level=n, slice_descriptor=descriptor,
                     measure=measure, residual_bound=1e-10)


def atoms(measure: Measure1D, cluster_tol: float) -> list:
    """Cluster nearby support points; returns (center, mass) pairs.

    Points within ``cluster_tol`` of the running cluster edge merge; the
    center is the mass-weighted mean.
    """
    if cluster_tol <= 0:
        raise ValueError("cluster tolerance must be positive")
    out = []
    cur_pts: list = []
    cur_wts: list = []
    for p, w in zip(measure.points, measure.weights):
        if cur_pts and p - cur_pts[-1] > cluster_tol:
            out.append(_finish_cluster(cur_pts, cur_wts))
            cur_pts, cur_wts = [], []
        cur_pts.append(p)
        cur_wts.append(w)
    if cur_pts:
        out.append(_finish_cluster(cur_pts, cur_wts))
    return out


def _finish_cluster(pts, wts):
    total = sum(wts)
    center = sum(p * w for p, w in zip(pts, wts)) / total
    return (center, total)


def cdf_distance(m1: Measure1D, m2: Measure1D, metric: str = "kolmogorov") -> float:
    """Kolmogorov or 1-Wasserstein distance between two probability measures."""
    if abs(m1.mass - 1.0) > 1e-9 or abs(m2.mass - 1.0) > 1e-9:
        raise ValueError("both measures must have mass 1")
    grid = np.union1d(np.asarray(m1.points), np.asarray(m2.points))
    f1 = m1.cdf_array(grid)
    f2 = m2.cdf_array(grid)
    if metric == "kolmogorov":
        # CDFs are right-continuous steps: compare after each jump and just
        # before (the value after the previous grid point)
        left = np.abs(np.concatenate([[0.0], f1[:-1]]) - np.concatenate([[0.0], f2[:-1]]))
        return float(max(np.abs(f1 - f2).max(), left.max()))
    if metric == "wasserstein1":
        gaps = np.diff(grid)
        return float(np.sum(np.abs(f1[:-1] - f2[:-1]) * gaps))
    raise ValueError("metric must be 'kolmogorov' or 'wasserstein1'")


def tv_distance(m1: Measure1D, m2: Measure1D, atom_tol: float = 1e-7) -> float:
    """Total-variation distance between atomic measures, identifying atoms
    closer than ``atom_tol``.  This is the metric that tracks the mass of
    the defect measure between consecutive levels (1-Wasserstein also
    weights atom displacement).

    The signed union is clustered exactly like ``atoms``: runs of support
    points with gaps below the tolerance count as one atom.
    """
    signed = sorted(
        [(p, w) for p, w in zip(m1.points, m1.weights)]
        + [(p, -w) for p, w in zip(m2.points, m2.weights)]
    )
    total = 0.0
    acc = 0.0
    last = None
    for p, w in signed:
        if last is not None and p - last > atom_tol:
            total += abs(acc)
            acc = 0.0
        acc += w
        last = p
    total += abs(acc)
    return total


def kolmogorov_to_cdf(measure: Measure1D, cdf: Callable[[float], float]) -> float:
    """Sup-distance between an atomic measure and a continuous CDF."""
    if abs(measure.mass - 1.0) > 1e-9:
        raise ValueError("measure must have mass 1")
    best = 0.0
    acc = 0.0
    for p, w in zip(measure.points, measure.weights):
        f = cdf(p)
        best = max(best, abs(acc - f), abs(acc + w - f))
        acc += w
    return best


# ---------------------------------------------------------------------------
# Limit law of the two-letter four-generator group
# ---------------------------------------------------------------------------


def _chebyshev_cdf(t: float) -> float:
    if t <= -1.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    return 0.5 + math.asin(t) / math.pi


@dataclass(frozen=True)
class GrigLimitMeasure:
    """Slice of the hyperbola family measure by the line lam = lam0.

    The slice is the pushforward of the Chebyshev equilibrium measure
    d(theta)/(pi sqrt(1 - theta^2)) on [-1, 1] under the two branches
    mu = +-sqrt(4 + lam0^2 - 4 theta lam0), each carrying half the mass.
    With ``transformed`` the axis is x = (mu + 1)/4 (the density-of-states
    normalization at lam0 = -1).
    """

    lam0: float
    transformed: bool

    def __post_init__(self):
        if self.lam0 == 0:
            raise ValueError("lam0 must be nonzero")
        lo = 4.0 + self.lam0 ** 2 - 4.0 * abs(self.lam0)
        if lo < 0:
            raise ValueError(f"branch degeneracy: unsupported lam0={self.lam0}")

    def _g_range(self):
        g_min = 4.0 + self.lam0 ** 2 - 4.0 * abs(self.lam0)
        g_max = 4.0 + self.lam0 ** 2 + 4.0 * abs(self.lam0)
        return g_min, g_max

    def support(self) -> list:
        g_min, g_max = self._g_range()
        lo, hi = math.sqrt(g_min), math.sqrt(g_max)
        intervals = [(-hi, -lo), (lo, hi)]
        if self.transformed:
            intervals = [((a + 1) / 4, (b + 1) / 4) for a, b in intervals]
        return intervals

    def cdf(self, x: float) -> float:
        if self.transformed:
            x = 4.0 * x - 1.0
        return 0.5 * (self._branch_cdf(x, +1) + self._branch_cdf(x, -1))

    def _branch_cdf(self, x: float, branch: int) -> float:
        # P(branch * sqrt(g(theta)) <= x) with theta Chebyshev-distributed
        g_min, g_max = self._g_range()
        lo, hi = math.sqrt(g_min), math.sqrt(g_max)
        if branch == +1:
            if x < lo:
                return 0.0
            if x >= hi:
                return 1.0
            theta_star = (4.0 + self.lam0 ** 2 - x * x) / (4.0 * self.lam0)
            # g increasing in theta when lam0 < 0
            p_le = _chebyshev_cdf(theta_star)
            return p_le if self.lam0 < 0 else 1.0 - p_le
        if x >= -lo:
            return 1.0
        if x < -hi:
            return 0.0
        theta_star = (4.0 + self.lam0 ** 2 - x * x) / (4.0 * self.lam0)
        p_le = _chebyshev_cdf(theta_star)
        # -sqrt(g) <= x  <=>  g >= x^2
        return (1.0 - p_le) if self.lam0 < 0 else p_le

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        theta = np.cos(np.pi * rng.random(size))
        g = 4.0 + self.lam0 ** 2 - 4.0 * theta * self.lam0
        sign = np.where(rng.random(size) < 0.5, 1.0, -1.0)
        mu = sign * np.sqrt(np.maximum(g, 0.0))
        return (mu + 1.0) / 4.0 if self.transformed else mu


def grig_limit_measure(lam0: float = -1.0, transformed: bool | None = None) -> GrigLimitMeasure:
    if transformed is None:
        transformed = lam0 == -1.0
    return GrigLimitMeasure(lam0=float(lam0), transformed=transformed)


# ---------------------------------------------------------------------------
# Backward orbits of quadratic polynomials
# ---------------------------------------------------------------------------


def repelling_fixed_point(a: float, b: float, c: float) -> float:
    """Fixed point of a z^2 + b z + c with the largest multiplier modulus."""
    disc = (b - 1.0) ** 2 - 4.0 * a * c
    if disc < 0:
        raise ValueError("no real fixed point")
    r1 = (-(b - 1.0) + math.sqrt(disc)) / (2.0 * a)
    r2 = (-(b - 1.0) - math.sqrt(disc)) / (2.0 * a)
    mult = lambda z: abs(2.0 * a * z + b)
    best = max((r1, r2), key=mult)
    if mult(best) <= 1.0:
        raise ValueError("no repelling real fixed point")
    return best


def julia_backward(p: Sequence[float], depth: int, mode: str = "full_tree",
                   domain: str = "real", samples: int = 4096, seed: int = 0):
    """Backward orbit of the repelling fixed point of a quadratic polynomial.

    ``p`` is (a, b, c) for a z^2 + b z + c.  ``full_tree`` returns the
    complete 2^depth-point preimage set (depth <= 16); ``random_walk`` draws
    ``samples`` random inverse-branch paths.  In real mode a complex inverse
    image raises; ``domain='complex'`` allows them.

    Returns (points array, empirical Measure1D of the real-part support).
    """
    a, b, c = (float(v) for v in p)
    z0 = repelling_fixed_point(a, b, c)
    rng = np.random.default_rng(seed)
    if mode == "full_tree":
        if depth > 16:
            raise ValueError("full-tree depth capped at 16")
        pts = np.array([z0], dtype=complex if domain == "complex" else float)
        for _ in range(depth):
            pts = _inverse_both(a, b, c, pts, domain)
    elif mode == "random_walk":
        pts = np.full(samples, z0, dtype=complex if domain == "complex" else float)
        for _ in range(depth):
            signs = np.where(rng.random(len(pts)) < 0.5, 1.0, -1.0)
            pts = _inverse_pick(a, b, c, pts, signs, domain)
    else:
        raise ValueError("mode must be 'full_tree' or 'random_walk'")
    reals = np.real(pts)
    measure = Measure1D.from_samples(reals, np.full(len(reals), 1.0 / len(reals)))
    return pts, measure


def _inverse_both(a, b, c, w, domain):
    disc = b * b - 4.0 * a * (c - w)
    if domain == "real":
        if np.any(disc < 0):
            raise ValueError("complex inverse image in real mode")
        root = np.sqrt(disc)
    else:
        root = np.sqrt(disc.astype(complex))
    plus = (-b + root) / (2.0 * a)
    minus = (-b - root) / (2.0 * a)
    return np.concatenate([plus, minus])


def _inverse_pick(a, b, c, w, signs, domain):
    disc = b * b - 4.0 * a * (c - w)
    if domain == "real":
        if np.any(disc < 0):
            raise ValueError("complex inverse image in real mode")
        root = np.sqrt(disc)
    else:
        root = np.sqrt(disc.astype(complex))
    return (-b + signs * root) / (2.0 * a)


# ---------------------------------------------------------------------------
# Convergence diagnostics
# ---------------------------------------------------------------------------


def convergence_report(group_tag: str, n_range: Sequence[int]) -> dict:
    """Distances of the level measures to the best available limit.

    grigorchuk compares against the closed-form law (Kolmogorov); the other
    two compare against the largest computed level (1-Wasserstein).  A
    log-linear fit of the distances gives the observed decay rate; the
    target rates are n/2^(n-1) (lamplighter) and (2/3)^n (hanoi).
    """
    levels = sorted(n_range)
    if len(levels) < 3:
        raise ValueError("need at least 3 levels to fit a rate")
    rows = []
    if group_tag == "grigorchuk":
        limit = grig_limit_measure(-1.0)
        for n in levels:
            d = kolmogorov_to_cdf(dos(group_tag, n).measure, limit.cdf)
            rows.append({"level": n, "distance": d, "metric": "kolmogorov"})
        target = "continuous limit law"
    elif group_tag in ("lamplighter", "hanoi"):
        ref_level = max(levels)
        reference = dos(group_tag, ref_level).measure
        for n in levels:
            if n == ref_level:
                continue
            d = cdf_distance(dos(group_tag, n).measure, reference, "wasserstein1")
            row = {"level": n, "distance": d, "metric": "wasserstein1"}
            row["tv_to_next"] = tv_distance(dos(group_tag, n).measure,
                                            dos(group_tag, n + 1).measure)
            row["w1_to_next"] = cdf_distance(dos(group_tag, n).measure,
                                             dos(group_tag, n + 1).measure, "wasserstein1")
            rows.append(row)
        target = "n/2^(n-1)" if group_tag == "lamplighter" else "(2/3)^n"
    else:
        raise ValueError(f"unknown group tag '{group_tag}'")
    xs = np.array([r["level"] for r in rows], dtype=float)
    ds = np.array([max(r["distance"], 1e-300) for r in rows])
    slope, intercept = np.polyfit(xs, np.log(ds), 1)
    ratios = [float(ds[i + 1] / ds[i]) for i in range(len(ds) - 1)]
    return {
        "group": group_tag,
        "rows": rows,
        "fitted_rate_per_level": float(math.exp(slope)),
        "log_intercept": float(intercept),
        "successive_ratios": ratios,
        "target": target,
    }


# ---------------------------------------------------------------------------
# Reference densities
# ---------------------------------------------------------------------------


def free_group_density(h: int, x: np.ndarray) -> np.ndarray:
    """Unnormalized spectral density of the rank-h free group on
    [-sqrt(2h-1)/h, sqrt(2h-1)/h]."""
    x = np.asarray(x, dtype=float)
    inside = 2.0 * h - 1.0 - (x * h) ** 2
    denom = np.where(np.abs(x) < 1, 1.0 - x ** 2, 1.0)
    vals = np.where((inside > 0) & (np.abs(x) < 1),
                    np.sqrt(np.maximum(inside, 0.0)) / denom, 0.0)
    return vals


def free_abelian_samples(n: int, size: int, seed: int = 0) -> np.ndarray:
    """Samples of the Z^n spectral measure: mean of n cosines of independent
    uniform angles."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * math.pi, size=(size, n))
    return np.cos(theta).mean(axis=1)
