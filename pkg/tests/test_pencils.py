"""Pencil assembly, exact determinants, Schur complements, recursions."""

import random
from fractions import Fraction

import pytest

from spectral_renorm.pencils import (
    assemble,
    assemble_symbolic,
    builtin_scheme,
    det_exact,
    det_symbolic,
    schur_complement,
    verify_recursion,
)
from spectral_renorm.ratmaps.poly import MultiPoly


def _p(terms):
    return MultiPoly(2, {e: Fraction(c) for e, c in terms.items()})


LAM = MultiPoly.variable(2, 0)
MU = MultiPoly.variable(2, 1)


def test_grigorchuk_level_zero_and_one():
    s = builtin_scheme("grigorchuk")
    m0 = assemble(s, 0, Fraction(0), Fraction(0))
    assert m0 == [[Fraction(2)]]
    sym = assemble_symbolic(s, 1)
    two_minus_mu = 2 - MU
    assert sym[0][0] == two_minus_mu and sym[1][1] == two_minus_mu
    assert sym[0][1] == -LAM and sym[1][0] == -LAM


def test_symbolic_determinants_match_closed_forms():
    # level-1 determinant of the four-generator pencil: (2-mu)^2 - lam^2
    s = builtin_scheme("grigorchuk")
    d1 = det_symbolic(assemble_symbolic(s, 1))
    assert d1 == (2 - MU - LAM) * (2 - MU + LAM)
    # seed at level 0
    d0 = det_symbolic(assemble_symbolic(s, 0))
    assert d0 == s.seed
    # three-letter tower at level 1: -(lam-1-2mu)(lam-1+mu)^2
    h = builtin_scheme("hanoi")
    d1 = det_symbolic(assemble_symbolic(h, 1))
    expected = -1 * (LAM - 1 - 2 * MU) * (LAM - 1 + MU) ** 2
    assert d1 == expected
    assert d1 == h.seed
    # lamplighter level 0 and the symbolic level-2 expansion
    l = builtin_scheme("lamplighter")
    assert det_symbolic(assemble_symbolic(l, 0)) == l.seed
    d2 = det_symbolic(assemble_symbolic(l, 2))
    assert d2 == (MU - LAM) * (LAM * LAM - MU * MU - 4) * (4 - LAM - MU)


def test_hanoi_level_one_is_coupled_all_ones():
    h = builtin_scheme("hanoi")
    lam, mu = Fraction(2, 3), Fraction(1, 5)
    m = assemble(h, 1, lam, mu)
    for i in range(3):
        for j in range(3):
            assert m[i][j] == (1 - lam if i == j else mu)
    with pytest.raises(ValueError):
        assemble(h, 0, lam, mu)


@pytest.mark.parametrize("name", ["grigorchuk", "lamplighter", "hanoi"])
def test_assembled_matrices_are_symmetric(name):
    s = builtin_scheme(name)
    rng = random.Random(4)
    for n in range(s.min_level - 1, s.min_level + 2):
        if s.has_coupling() and n < 1:
            continue
        lam = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        mu = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        m = assemble(s, n, lam, mu)
        assert all(m[i][j] == m[j][i] for i in range(len(m)) for j in range(len(m)))


def test_det_exact_examples():
    assert det_exact([[Fraction(2 - 1), Fraction(-1)], [Fraction(-1), Fraction(2 - 1)]]) == 0
    assert det_exact([[Fraction(int(i == j)) for j in range(8)] for i in range(8)]) == 1


def test_schur_complement_identity_and_examples():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(2)]]
    s1 = schur_complement(m, 1, which=1)
    assert s1 == [[Fraction(3, 2)]]
    assert det_exact(m) == Fraction(2) * det_exact(s1)
    # block diagonal: S1 = A
    m = [[Fraction(5), Fraction(0)], [Fraction(0), Fraction(7)]]
    assert schur_complement(m, 1, 1) == [[Fraction(5)]]
    with pytest.raises(ValueError):
        schur_complement([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]], 1, 1)


def test_schur_determinant_identity_on_random_matrices():
    rng = random.Random(9)
    done = 0
    while done < 50:
        n = rng.randint(2, 6)
        split = rng.randint(1, n - 1)
        m = [[Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]
             for _ in range(n)]
        d_block = [row[split:] for row in m[split:]]
        if det_exact(d_block) == 0:
            continue
        s1 = schur_complement(m, split, which=1)
        assert det_exact(m) == det_exact(d_block) * det_exact(s1)
        done += 1


def test_schur_second_complement():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(2)]]
    s2 = schur_complement(m, 1, which=2)
    assert s2 == [[Fraction(3, 2)]]
    assert det_exact(m) == Fraction(2) * det_exact(s2)


def test_grigorchuk_schur_step_reproduces_renormalized_pencil():
    # first Schur complement of the level-2 pencil against the level-1 pencil
    # at the image point: determinants match through the block identity
    s = builtin_scheme("grigorchuk")
    from spectral_renorm.ratmaps.maps import builtin_map

    rmap = builtin_map("R_G")
    lam, mu = Fraction(1, 3), Fraction(1, 7)
    m2 = assemble(s, 2, lam, mu)
    d_block = [row[2:] for row in m2[2:]]
    s1 = schur_complement(m2, 2, which=1)
    assert det_exact(m2) == det_exact(d_block) * det_exact(s1)
    image = rmap.eval_exact_affine(lam, mu)
    m1_image = assemble(s, 1, image[0], image[1])
    # det S1 equals det M_1(R(lam,mu)) up to the scalar from the recursion
    lhs = det_exact(s1)
    rhs = det_exact(m1_image)
    factor = det_exact(m2) / (det_exact(d_block) * rhs)
    assert lhs == factor * rhs


@pytest.mark.parametrize("name,levels", [
    ("grigorchuk", (2, 3)),
    ("lamplighter", (1, 2, 3)),
    ("hanoi", (2, 3)),
])
def test_verify_recursion_small_levels(name, levels):
    s = builtin_scheme(name)
    for n in levels:
        report = verify_recursion(s, n, samples=4, seed=11)
        assert report["failures"] == []
        assert len(report["points"]) == 4


def test_verify_recursion_budget_error():
    s = builtin_scheme("grigorchuk")
    with pytest.raises(ValueError):
        verify_recursion(s, 1, samples=1)


def test_recursion_identity_at_pinned_points():
    from spectral_renorm.ratmaps.maps import builtin_map

    # two-letter four-generator cascade at (1/3, 1/5), level 3
    s = builtin_scheme("grigorchuk")
    lam, mu = Fraction(1, 3), Fraction(1, 5)
    image = builtin_map("R_G").eval_exact_affine(lam, mu)
    lhs = det_exact(assemble(s, 3, lam, mu))
    q = s.factors[0][0].eval((lam, mu))
    rhs = s.sign(3) * q ** 2 * det_exact(assemble(s, 2, image[0], image[1]))
    assert lhs == rhs

    # three-letter tower at (2/7, 1/3), level 3: exponents 3^(n-2), 2*3^(n-2)
    h = builtin_scheme("hanoi")
    lam, mu = Fraction(2, 7), Fraction(1, 3)
    image = builtin_map("R_H").eval_exact_affine(lam, mu)
    q1 = h.factors[0][0].eval((lam, mu))
    q2 = h.factors[1][0].eval((lam, mu))
    lhs = det_exact(assemble(h, 3, lam, mu))
    rhs = q1 ** 3 * q2 ** 6 * det_exact(assemble(h, 2, image[0], image[1]))
    assert lhs == rhs
