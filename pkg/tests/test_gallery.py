"""Gallery constructors against the worked examples and combinatorial oracles."""

from math import comb

import pytest

from qhcover.fields import GF, QQ
from qhcover.gallery import (
    GalleryError,
    build_am,
    build_hecke,
    build_schur,
    build_tensor_space,
    compose_perm,
    dominates,
    hecke_element_is_in_kernel,
    partitions_at_most,
    permutations_of,
    schur_weyl_map,
    truncation_idempotent,
    weight_of,
)
from qhcover.linalg import Mat
from qhcover.modules import is_isomorphic, top
from qhcover.reldim import classical_domdim, relative_domdim

F2, F3 = GF(2), GF(3)


# -- zigzag algebras ---------------------------------------------------------


def test_build_a1_is_field():
    g = build_am(1, F3)
    assert g.algebra.dim == 1


def test_build_a2():
    g = build_am(2, F3)
    assert g.algebra.dim == 5
    v, _ = classical_domdim(g.algebra, 8)
    assert str(v.value) == "Exact(2)"


def test_build_a3_tilting_list():
    g = build_am(3, F3)
    assert g.algebra.dim == 9
    tilts = g.qh.tiltings()
    assert is_isomorphic(tilts[0], g.qh.projectives[1]) is not None  # T(1) = P(2)
    assert is_isomorphic(tilts[1], g.qh.projectives[2]) is not None  # T(2) = P(3)
    assert tilts[2].dim == 1  # T(3) = S(3)


# -- Hecke algebras -----------------------------------------------------------


def test_hecke_d1():
    h = build_hecke(1, 1, F3)
    assert h.algebra.dim == 1


def test_hecke_d2_gf3_semisimple():
    h = build_hecke(2, 1, F3)
    assert h.algebra.dim == 2
    assert h.algebra.radical_subspace().dim == 0  # Maschke: 2 invertible mod 3


def test_hecke_d3_gf3_radical():
    h = build_hecke(3, 1, F3)
    assert h.algebra.radical_subspace().dim == 4


def test_hecke_base_change_group_algebra():
    # u = 1 over QQ: structure constants are permutation products
    h = build_hecke(3, 1, QQ)
    for i, p in enumerate(h.perms):
        for j, q in enumerate(h.perms):
            prod = compose_perm(p, q)
            k = h.index[prod]
            for t in range(len(h.perms)):
                assert h.algebra.mult[i][j][t] == (1 if t == k else 0)


def test_hecke_quadratic_relation_generic_u():
    # over QQ with u = 2: T_s^2 = (u - u^{-1}) T_s + 1
    h = build_hecke(2, 2, QQ)
    s = h.element_of_permutation((1, 0))
    lhs = h.algebra.multiply(s, s)
    from fractions import Fraction

    coeff = Fraction(2) - Fraction(1, 2)
    rhs = s.scale(coeff) + h.algebra.one
    assert lhs == rhs


def test_hecke_zero_u_rejected():
    with pytest.raises(GalleryError, match="invertible"):
        build_hecke(2, 0, F3)


# -- tensor space --------------------------------------------------------------


def test_tensor_space_d1():
    ts = build_tensor_space(3, 1, 1, F3)
    assert ts.module.dim == 3
    ts.module.validate()


def test_tensor_space_place_permutation_at_u1():
    ts = build_tensor_space(2, 2, 1, F3)
    swap = ts.simple_action[0]
    # u = 1: plain place permutation, fixes e_00 and e_11, swaps e_01, e_10
    assert swap @ swap == Mat.identity(F3, 4)
    assert swap[0, 0] == 1 and swap[3, 3] == 1 and swap[1, 2] == 1 and swap[2, 1] == 1


def test_tensor_space_braid_and_quadratic_relations():
    from qhcover.fields import GF

    f = GF(5)
    u = 2  # generic-ish: q = u^{-2}
    ts = build_tensor_space(2, 3, u, f)
    s1, s2 = ts.simple_action
    coeff = f.add(f.normalize(u), f.neg(f.inv(f.normalize(u))))
    for s in (s1, s2):
        assert s @ s == s.scale(coeff) + Mat.identity(f, ts.module.dim)
    assert s1 @ (s2 @ s1) == s2 @ (s1 @ s2)
    ts.module.validate()


# -- Schur algebras ---------------------------------------------------------------


def test_schur_22_gf3_semisimple():
    s = build_schur(2, 2, 1, F3)
    assert s.algebra.dim == 10
    assert s.algebra.radical_subspace().dim == 0


def test_schur_22_gf2_domdim():
    s = build_schur(2, 2, 1, F2)
    v, _ = classical_domdim(s.algebra, 8)
    assert str(v.value) == "Exact(2)"


def test_schur_dimension_formula():
    for (n, d, p) in [(2, 2, 3), (2, 3, 3), (3, 2, 2)]:
        s = build_schur(n, d, 1, GF(p))
        assert s.algebra.dim == comb(n * n + d - 1, d)


def test_schur_qh_verifies():
    s = build_schur(2, 3, 1, F3)
    qh = s.qh()
    assert qh.verification.passed


def test_weight_idempotents_sum_to_one():
    s = build_schur(2, 3, 1, F3)
    total = s.algebra.zero_element()
    for lam in s.weights:
        xi = s.weight_idempotent(lam)
        assert s.algebra.multiply(xi, xi) == xi
        total = total + xi
    assert total == s.algebra.one
    # pairwise orthogonal
    for lam in s.weights:
        for mu in s.weights:
            if lam != mu:
                prod = s.algebra.multiply(s.weight_idempotent(lam), s.weight_idempotent(mu))
                assert prod.is_zero()


def test_weight_space_dims_of_standards():
    # xi_lambda Delta(mu): the highest-weight space at lambda = mu is a line
    s = build_schur(2, 3, 1, F3)
    qh = s.qh()
    for i, lam in enumerate(s.partitions):
        lab = str(lam)
        idx = qh.poset.labels.index(lab)
        delta = qh.standards[idx]
        xi = s.weight_idempotent(lam)
        mat = delta.act(xi)
        assert mat.rank() == 1
    # oracle: weight-space dimension of Delta((3,0)) = S^3(V) at weight (2,1)
    delta_top = qh.standards[qh.poset.labels.index(str((3, 0)))]
    xi21 = s.weight_idempotent((2, 1))
    assert delta_top.act(xi21).rank() == 1  # monomial x^2 y


def test_relative_domdim_bound_for_small_n():
    # V-domdim T >= inf{s : 1 + q + ... + q^s not invertible, s < d}
    s = build_schur(2, 3, 1, F3)
    qh = s.qh()
    t = qh.characteristic_tilting()
    v = relative_domdim(s.tensor_module, t, 8).value
    assert v.at_least_value() >= 2  # inf at s = 2 over GF(3)


def test_truncation_idempotent_small():
    s = build_schur(2, 2, 1, F3)
    f = truncation_idempotent(s, 1)
    assert s.algebra.multiply(f, f) == f
    from qhcover.algebra import corner_algebra

    corner, _ = corner_algebra(s.algebra, f)
    assert corner.dim == comb(1 + 2 - 1, 2)  # S(1,2) is 1-dimensional


# -- Schur-Weyl ---------------------------------------------------------------------


def test_schur_weyl_bijective_n_geq_d():
    s = build_schur(2, 2, 1, F3)
    data = schur_weyl_map(s)
    assert data.surjective and data.injective


def test_schur_weyl_kernel_n2_d3_char3():
    s = build_schur(2, 3, 1, F3)
    data = schur_weyl_map(s)
    assert data.surjective and not data.injective
    # the sign-alternating sum of all six permutations acts as zero
    coeffs = {}
    for sigma in permutations_of(3):
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if sigma[i] > sigma[j])
        coeffs[sigma] = 1 if inv % 2 == 0 else -1
    assert hecke_element_is_in_kernel(s, coeffs)
    # a^2 = 0 in the group algebra
    h = s.hecke
    a = h.algebra.zero_element()
    for sigma, c in coeffs.items():
        a = a + h.element_of_permutation(sigma).scale(F3.normalize(c))
    assert h.algebra.multiply(a, a).is_zero()


def test_dominance_order():
    assert dominates((3, 0), (2, 1)) and not dominates((2, 1), (3, 0))
    assert partitions_at_most(2, 3) == [(3, 0), (2, 1)]
    assert weight_of((0, 1, 0), 2) == (2, 1)


def test_q_schur_generic_parameter():
    # u = 2 over GF(5): q = 4; the q-Schur algebra is still split quasi-hereditary
    from qhcover.fields import GF

    s = build_schur(2, 2, "2", GF(5))
    assert s.algebra.dim == 10
    assert s.qh().verification.passed


def test_hecke_u_string_parse():
    from fractions import Fraction

    h = build_hecke(2, "1/2", QQ)
    assert h.q == Fraction(4)  # q = u^{-2}
