import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlie.charcluster import (Character, CharacterError, character_of, check_hom_law,
                              check_tensor_power_law, cluster, cluster_subset, defect_of, fp_span,
                              in_fp_span, sums_of)
from rlie.gf import gf, pth_root
from rlie.liealg import LieAlgebra, RestrictedLieAlgebra
from rlie.repmod import LModule, ModuleError, change_basis, direct_sum, is_restricted_module

from conftest import commuting_module, mat, natural_module, random_matrix


def abelian(F, n=1):
    return RestrictedLieAlgebra.from_lie(LieAlgebra.abelian(F, n), np.zeros((n, n, F.m), dtype=np.int64))


def chi(F, values, base=None):
    base = base or F
    return Character(F, tuple(F(v).coeffs for v in values), base)


def diag01():
    F = gf(3)
    return LModule(abelian(F), [mat(F, [[0, 0], [0, 1]])])


def test_character_examples():
    F = gf(5)
    L = abelian(F)
    assert character_of(LModule.one_dim(L, [1])) == chi(F, [1])
    assert character_of(LModule.one_dim(L, [3])) == chi(F, [3])
    assert character_of(LModule.trivial(L)).is_zero()


def test_cluster_examples():
    F = gf(3)
    L = abelian(F)
    assert [c.is_zero() for c in cluster(LModule.trivial(L, 2))] == [True]
    C = cluster(diag01())
    assert len(C) == 2 and C.has_zero() and chi(F, [1]) in C
    F2 = gf(2)
    comp = LModule(abelian(F2), [mat(F2, [[0, 1], [1, 1]])])
    C = cluster(comp)
    F4 = gf(2, 2)
    w = F4.gen
    assert C.field == F4
    assert chi(F4, [w], F2) in C and chi(F4, [w * w], F2) in C and len(C) == 2
    assert C.factor_dims == [1, 1]


def test_fp_span_examples():
    F = gf(3)
    assert len(fp_span([Character.zero(F, 1)])) == 1
    c = chi(F, [1])
    assert {x.values for x in fp_span([c])} == {chi(F, [k]).values for k in range(3)}
    F2 = gf(2)
    c1, c2 = chi(F2, [1, 0]), chi(F2, [0, 1])
    assert len(fp_span([c1, c2])) == 4


def test_cluster_subset_examples():
    C = cluster(diag01())
    assert cluster_subset(C, fp_span(C))
    F = gf(3)
    Z = [Character.zero(F, 1)]
    assert cluster_subset(Z, fp_span(C))
    assert not cluster_subset([chi(F, [1])], fp_span(Z))


def test_tensor_power_law_examples():
    rep = check_tensor_power_law(diag01(), 2)
    assert rep["holds"]
    assert sorted(rep["rhs"]) == [["0"], ["1"], ["2"]]
    F = gf(2)
    assert check_tensor_power_law(LModule.trivial(abelian(F), 2), 3)["holds"]


def test_hom_law_examples():
    F = gf(3)
    L = abelian(F)
    V = LModule.one_dim(L, [1])
    rep = check_hom_law(V, V)
    assert rep["holds"] and rep["hom_cluster"] == [["0"]]
    assert check_hom_law(diag01(), diag01())["zero_in_hom"]
    T = LModule.trivial(L, 1)
    assert check_hom_law(T, T)["holds"]


def test_characters_across_fields_compare_after_embedding():
    F2, F4 = gf(2), gf(2, 2)
    a = chi(F2, [1])
    b = chi(F4, [1], F2)
    assert a == b and hash(a) == hash(b)
    assert a + b == Character.zero(F2, 1)


def test_zero_module_has_no_cluster():
    with pytest.raises(CharacterError):
        cluster(LModule.trivial(abelian(gf(2)), 0))


def test_non_absolutely_irreducible_input_is_rejected():
    F2 = gf(2)
    comp = LModule(abelian(F2), [mat(F2, [[0, 1], [1, 1]])])
    with pytest.raises(CharacterError):
        character_of(comp)


@st.composite
def small_modules(draw):
    p = draw(st.sampled_from([2, 3]))
    F = gf(p)
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    d = draw(st.integers(1, 3))
    return commuting_module(F, draw(st.integers(1, 2)), d, rng), rng


@given(small_modules())
def test_cluster_invariant_under_conjugation(t):
    M, rng = t
    F = M.field
    while True:
        P = random_matrix(F, M.dim, rng)
        try:
            N = change_basis(M, P)
            break
        except ModuleError:
            pass
    A, B = cluster(M), cluster(N)
    assert cluster_subset(A, B) and cluster_subset(B, A)


@given(small_modules())
def test_factor_dims_add_up(t):
    M, _ = t
    C = cluster(M)
    # extension of scalars keeps dimensions, so the split factors still add up to dim M
    assert sum(C.factor_dims) == M.dim


@given(small_modules())
def test_fp_span_is_idempotent_and_matches_membership(t):
    M, _ = t
    C = cluster(M)
    S = fp_span(C)
    assert cluster_subset(fp_span(S), S) and cluster_subset(S, fp_span(S))
    F = S.field
    rng = random.Random(len(S))
    for _ in range(5):
        c = Character.from_array(F, np.asarray([F.random_element(rng).coeffs for _ in range(C.n)]), C.base)
        assert in_fp_span(C, c) == (c in S)


@given(small_modules())
def test_restricted_modules_have_zero_cluster(t):
    M, _ = t
    if is_restricted_module(M):
        assert [c.is_zero() for c in cluster(M)] == [True]


def test_natural_modules_have_zero_cluster():
    rng = random.Random(11)
    for p in (2, 3):
        for _ in range(10):
            M = natural_module(gf(p), 3, 2, rng)
            assert [c.is_zero() for c in cluster(M)] == [True]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_character_is_additive(p):
    F = gf(p)
    rng = random.Random(p)
    L = abelian(F, 2)
    for _ in range(20):
        a, b = F.random_element(rng), F.random_element(rng)
        M = LModule.one_dim(L, [a, b])
        c = character_of(M)
        x = np.asarray([F(1).coeffs, F(1).coeffs])
        s = defect_of(M, x).is_scalar()
        assert pth_root(s) == c(x) == c.elems()[0] + c.elems()[1]


def test_sums_of():
    F = gf(3)
    C = [chi(F, [0]), chi(F, [1])]
    assert len(sums_of(C, 2)) == 3
    assert len(sums_of(C, 1)) == 2


@pytest.mark.parametrize("p", [2, 3])
def test_cluster_matches_eigenvalue_oracle(p):
    # 1-dim abelian algebra with zero p-map: characters are the eigenvalues of rho(e)
    from rlie.gf import embedding
    from rlie.linalg import Matrix, kernel
    F = gf(p)
    big = gf(p, 6)
    e = embedding(F, big)
    rng = random.Random(40 + p)
    for _ in range(6):
        M = commuting_module(F, 1, rng.choice([2, 3]), rng)
        A = Matrix(big, e.apply_array(M.actions[0].a))
        eig = {lam.code for lam in big.elements()
               if kernel(A - Matrix.scalar(big, M.dim, lam)).dim}
        got = {Character(big, c.embed_into(big).values, F).elems()[0].code for c in cluster(M)}
        assert got == eig
