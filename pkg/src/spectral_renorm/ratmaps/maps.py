"""Projective rational maps with exact integer coefficients.

A map is three coprime homogeneous forms of a common degree.  Builtins cover
the three renormalization maps, the plane involution relating the two
two-letter-tree maps, and the one-dimensional model systems extended to the
plane.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from spectral_renorm.ratmaps.poly import BinaryForm, MultiPoly, binary_forms_gcd


class IndeterminacyError(ValueError):
    """Evaluation hit a point where all three components vanish."""


def _poly3(terms) -> MultiPoly:
    return MultiPoly(3, {e: Fraction(c) for e, c in terms.items()})


def _var(i):
    return MultiPoly.variable(3, i)


@dataclass(frozen=True)
class RationalMapP2:
    """Rational self-map of the projective plane.

    ``components`` are primitive integer homogeneous polynomials in
    (x0, x1, x2) with no common factor; ``degree`` is their common degree.
    """

    name: str
    components: tuple
    degree: int
    topological_degree: int | None = None

    def __post_init__(self):
        degs = {c.total_degree() for c in self.components}
        if len(degs) != 1:
            raise ValueError("components must share a common degree")
        if not all(c.is_homogeneous() for c in self.components):
            raise ValueError("components must be homogeneous")

    # -- evaluation ---------------------------------------------------------

    def eval_exact(self, point: Sequence) -> tuple:
        """Image of a projective point, as a primitive integer triple.

        Raises ``IndeterminacyError`` when the point is indeterminate.
        """
        pt = [Fraction(x) for x in point]
        lcm = 1
        for x in pt:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
        ints = [int(x * lcm) for x in pt]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        if g == 0:
            raise ValueError("zero vector is not a projective point")
        ints = [v // g for v in ints]
        image = [int(c.eval(ints)) for c in self.components]
        g = 0
        for v in image:
            g = gcd(g, abs(v))
        if g == 0:
            raise IndeterminacyError(f"{self.name} is indeterminate at {tuple(ints)}")
        image = [v // g for v in image]
        lead = next(v for v in image if v)
        if lead < 0:
            image = [-v for v in image]
        return tuple(image)

    def eval_exact_affine(self, x, y):
        """Affine image of (x, y); None when the image is at infinity or the
        point is indeterminate."""
        try:
            img = self.eval_exact((Fraction(x), Fraction(y), Fraction(1)))
        except IndeterminacyError:
            return None
        if img[2] == 0:
            return None
        return (Fraction(img[0], img[2]), Fraction(img[1], img[2]))

    def eval_float(self, point):
        """Float image, normalized to unit Euclidean norm."""
        import numpy as np

        pt = np.asarray(point, dtype=float)
        vals = np.array([float_eval_poly(c, pt) for c in self.components])
        norm = np.linalg.norm(vals)
        if norm == 0.0 or not np.isfinite(norm):
            raise IndeterminacyError(f"{self.name} numerically indeterminate at {point}")
        return vals / norm

    # -- algebra -------------------------------------------------------------

    def compose(self, inner: "RationalMapP2") -> "RationalMapP2":
        """Composition self o inner with content normalization.

        Common polynomial factors beyond content are not removed; use
        ``coprimality_certificate`` to detect them.
        """
        comps = tuple(c.subs(inner.components) for c in self.components)
        comps = _normalize_triple(comps)
        return RationalMapP2(
            name=f"{self.name}*{inner.name}",
            components=comps,
            degree=comps[0].total_degree(),
        )

    def restrict_to_line(self, line: Sequence) -> tuple:
        """Binary forms of the restriction to the parametrized line
        ``(s,t) -> (a0 s + b0 t, a1 s + b1 t, a2 s + b2 t)``."""
        basis = [BinaryForm([int(a), int(b)]) for a, b in line]
        return tuple(_eval_on_forms(c, basis) for c in self.components)

    def coprimality_certificate(self, lines: int = 3, seed: int = 17) -> bool:
        """True when the components share no curve, certified by constant gcd
        of the restricted binary forms on ``lines`` random lines.

        A common curve of zeros blocks every line, so finding ``lines`` many
        samples with trivial gcd certifies coprimality.  Lines hitting an
        isolated common zero (an indeterminacy point) or degenerating to a
        point are simply not counted.
        """
        rng = random.Random(seed)
        ok = 0
        attempts = 0
        while ok < lines and attempts < 40 * lines:
            attempts += 1
            line = [(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(3)]
            if _line_rank(line) < 2:
                continue
            forms = self.restrict_to_line(line)
            if all(f.is_zero() for f in forms):
                continue
            g = binary_forms_gcd([f for f in forms if not f.is_zero()])
            if g.degree == 0:
                ok += 1
        return ok >= lines


def _line_rank(line) -> int:
    """Rank of the 3x2 coefficient matrix of a line parametrization."""
    for i in range(3):
        for j in range(i + 1, 3):
            if line[i][0] * line[j][1] - line[i][1] * line[j][0] != 0:
                return 2
    return 1 if any(a or b for a, b in line) else 0


def _normalize_triple(comps) -> tuple:
    """Clear denominators and remove the joint content, preserving the
    coefficient ratios between components."""
    lcm = 1
    for c in comps:
        d = c.denominator_lcm()
        lcm = lcm * d // gcd(lcm, d)
    out = [c * lcm for c in comps]
    g = 0
    for c in out:
        for v in c.terms.values():
            g = gcd(g, abs(int(v)))
    if g > 1:
        out = [c * Fraction(1, g) for c in out]
    return tuple(out)


def float_eval_poly(poly: MultiPoly, values) -> float:
    total = 0.0
    for expo, coeff in poly.terms.items():
        term = float(coeff)
        for v, e in zip(values, expo):
            if e:
                term *= v ** e
        total += term
    return total


def _eval_on_forms(poly: MultiPoly, basis: Sequence[BinaryForm]) -> BinaryForm:
    degree = poly.total_degree()
    caches = [{0: BinaryForm([1], 0)} for _ in basis]

    def powered(i, e):
        cache = caches[i]
        if e not in cache:
            cache[e] = powered(i, e - 1) * basis[i]
        return cache[e]

    acc = BinaryForm([], -1)
    for expo, coeff in poly.terms.items():
        term = BinaryForm([int(coeff)], 0)
        for i, e in enumerate(expo):
            if e:
                term = term * powered(i, e)
        pad = degree - sum(expo)
        if pad:
            raise ValueError("polynomial is not homogeneous")
        acc = acc + term if not acc.is_zero() else term
    return acc


# ---------------------------------------------------------------------------
# Builtin maps
# ---------------------------------------------------------------------------


def builtin_map(name: str) -> RationalMapP2:
    """Construct a builtin map by name.

    R_G / G_G   renormalizations of the four-generator two-letter group
    H_inv       the plane involution with G_G = H_inv o R_G
    R_L         renormalization of the lamplighter pencil
    R_H         renormalization of the three-peg tower pencil
    model_*     plane extensions of the model systems (id x z^2, twist,
                skew product over z^2 - z - 3)
    cheb        id x (2z^2 - 1)
    """
    x, y, w = _var(0), _var(1), _var(2)
    if name == "R_G":
        four_w2_minus_mu2 = 4 * w * w - y * y
        comps = (2 * x * x * w, y * four_w2_minus_mu2 + y * x * x, w * four_w2_minus_mu2)
        return _mk(name, comps, 3, 2)
    if name == "G_G":
        four_w2_minus_mu2 = 4 * w * w - y * y
        comps = (2 * four_w2_minus_mu2 * w, -y * (x * x + four_w2_minus_mu2), x * x * w)
        return _mk(name, comps, 3, 2)
    if name == "H_inv":
        return _mk(name, (4 * w, -2 * y, x), 1, 1)
    if name == "R_L":
        comps = (-x * x + y * y + 2 * w * w, -2 * w * w, (y - x) * w)
        return _mk(name, comps, 2, 1)
    if name == "R_H":
        f1 = x - w - y
        f2 = x * x - w * w + y * w - y * y
        comps = (
            x * f1 * f2 + 2 * y * y * (-x * x + x * w + y * y),
            y * y * w * (x - w + y),
            f1 * f2 * w,
        )
        return _mk(name, comps, 4, 2)
    if name == "model_square":
        return _mk(name, (x * w, y * y, w * w), 2, 2)
    if name == "model_twist":
        return _mk(name, (x * y, x * y - 4 * w * w, y * w), 2, 1)
    if name == "model_skew":
        base = x * x - x * w - 3 * w * w
        comps = (base * (x + 3 * w), (x - w) * (x + 2 * w) * y, w * w * (x + 3 * w))
        return _mk(name, comps, 3, 2)
    if name == "cheb":
        return _mk(name, (x * w, 2 * y * y - w * w, w * w), 2, 2)
    raise ValueError(f"unknown builtin map '{name}'")


def _mk(name, comps, degree, dtop) -> RationalMapP2:
    comps = _normalize_triple(comps)
    m = RationalMapP2(name=name, components=comps, degree=degree, topological_degree=dtop)
    if m.components[0].total_degree() != degree:
        raise AssertionError(f"{name}: degree mismatch")
    return m


# ---------------------------------------------------------------------------
# Contracted curves and indeterminacy points
# ---------------------------------------------------------------------------


def _compose_curve(map_: RationalMapP2, param: Sequence[MultiPoly]) -> list:
    """Composition of the map with a rational curve parametrization (three
    univariate polynomials)."""
    if len(param) != 3:
        raise ValueError("curve parametrization needs three components")
    return [c.subs(list(param)) for c in map_.components]


def verify_contracted(map_: RationalMapP2, param: Sequence[MultiPoly], expected: Sequence) -> bool:
    """Exactly check that the map collapses the parametrized curve to
    ``expected``.

    The composed triple A must be projectively the constant ``expected`` e:
    ``A_i e_j - A_j e_i = 0`` for all pairs, with A not identically zero.
    """
    comp = _compose_curve(map_, param)
    if all(c.is_zero() for c in comp):
        raise IndeterminacyError("curve lies in the indeterminacy closure")
    e = [Fraction(v) for v in expected]
    for i in range(3):
        for j in range(i + 1, 3):
            if not (comp[i] * e[j] - comp[j] * e[i]).is_zero():
                return False
    return True


def verify_fixed_curve(map_: RationalMapP2, param: Sequence[MultiPoly]) -> bool:
    """Exactly check that the parametrized curve is fixed pointwise."""
    comp = _compose_curve(map_, param)
    if all(c.is_zero() for c in comp):
        raise IndeterminacyError("curve lies in the indeterminacy closure")
    for i in range(3):
        for j in range(i + 1, 3):
            if not (comp[i] * param[j] - comp[j] * param[i]).is_zero():
                return False
    return True


def verify_indeterminacy(map_: RationalMapP2, candidates: Sequence) -> dict:
    """Check that every candidate point kills all three components, and
    certify coprimality of the components on random lines."""
    confirmed = []
    rejected = []
    for point in candidates:
        pt = [Fraction(v) for v in point]
        vals = [c.eval(pt) for c in map_.components]
        (confirmed if all(v == 0 for v in vals) else rejected).append(tuple(point))
    return {
        "map": map_.name,
        "confirmed": confirmed,
        "rejected": rejected,
        "components_coprime": map_.coprimality_certificate(),
    }


def line_param(a: Sequence, b: Sequence) -> tuple:
    """Parametrize the line through two projective points as s*a + t*b in
    variables (s, t) -- returned as three arity-2 polynomials."""
    s = MultiPoly.variable(2, 0)
    t = MultiPoly.variable(2, 1)
    return tuple(s * Fraction(ai) + t * Fraction(bi) for ai, bi in zip(a, b))


def univariate_curve(coeff_lists: Sequence[Sequence]) -> tuple:
    """Curve parametrization from coefficient lists (ascending in t), e.g.
    [[0, 1], [2], [1]] is [t : 2 : 1]."""
    out = []
    for coeffs in coeff_lists:
        out.append(MultiPoly(1, {(k,): Fraction(c) for k, c in enumerate(coeffs) if c}))
    return tuple(out)
