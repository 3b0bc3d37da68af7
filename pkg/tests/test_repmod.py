import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlie.charcluster import defect_of, semilinear_defect
from rlie.gf import embedding, gf
from rlie.liealg import (LieAlgebra, RestrictedLieAlgebra, Subalgebra, p_envelope)
from rlie.linalg import Matrix, Subspace, spin
from rlie.meataxe import (composition_factors, composition_series, endomorphism_algebra_dim,
                          irreducibility_test, is_irreducible)
from rlie.repmod import (DimensionCapError, LModule, ModuleError, ModuleMap, change_basis, direct_sum, dual,
                         extend_action_to_penvelope, extend_scalars, hom_module, hom_to_tensor_dual,
                         is_restricted_module, is_submodule, quotient, restrict_to, restrict_to_subalgebra,
                         sub_quotient, submodule, tensor, tensor_power, verify_module)

from conftest import commuting_module, mat, natural_module, random_matrix


def two_dim(p):
    L = LieAlgebra.from_brackets(gf(p), 2, {(0, 1): {1: 1}})
    return RestrictedLieAlgebra.from_lie(L, [[1, 0], [0, 0]])


def abelian1(F, image=0):
    return RestrictedLieAlgebra.from_lie(LieAlgebra.abelian(F, 1), [[image]])


def companion_module():
    F = gf(2)
    return LModule(abelian1(F), [mat(F, [[0, 1], [1, 1]])])


# -- oracle: a module is irreducible iff every nonzero vector spins to everything

def oracle_irreducible(M):
    F = M.field
    for code in range(1, F.order ** M.dim):
        v = np.asarray([F.from_code((code // F.order ** i) % F.order).coeffs for i in range(M.dim)])
        if spin(v[None], M.actions, F, M.dim).dim < M.dim:
            return False
    return True


def test_verify_module_examples():
    L = two_dim(3)
    assert not verify_module(LModule.trivial(L, 2))
    assert not verify_module(LModule.adjoint(L))
    bad = LModule.adjoint(L)
    a = bad.actions[0].a.copy()
    a[1, 1, 0] = 2
    bad = LModule(L, [Matrix(L.field, a), bad.actions[1]])
    rep = verify_module(bad)
    assert rep and rep[0]["pair"] == [0, 1]


def test_is_restricted_module_examples():
    F = gf(3)
    assert is_restricted_module(LModule.trivial(abelian1(F), 2))
    assert not is_restricted_module(LModule.one_dim(abelian1(F), [1]))
    assert is_restricted_module(LModule.adjoint(two_dim(5)))


def test_sums_tensors_homs_on_scalars():
    F = gf(3)
    L = abelian1(F)
    A = LModule.one_dim(L, [1])
    B = LModule.one_dim(L, [2])
    assert tensor(A, B).actions[0].is_scalar() == F(0)
    assert hom_module(A, B).actions[0].is_scalar() == F(1)
    assert dual(A).actions[0].is_scalar() == F(2)
    assert direct_sum(A, B).dim == 2
    T = tensor(LModule.adjoint(two_dim(3)), LModule.trivial(two_dim(3), 1))
    assert T.actions == LModule.adjoint(two_dim(3)).actions


def test_tensor_basis_order():
    F = gf(5)
    L = abelian1(F)
    A = LModule(L, [mat(F, [[1, 0], [0, 2]])])
    B = LModule(L, [mat(F, [[3, 0], [0, 4]])])
    diag = [tensor(A, B).actions[0][i, i] for i in range(4)]
    # index of A varies slower
    assert diag == [F(4), F(0), F(0), F(1)]


def test_hom_is_dual_tensor():
    rng = random.Random(2)
    for p in (2, 3):
        F = gf(p)
        A = natural_module(F, 2, 2, rng)
        B = LModule.adjoint(A.algebra)
        phi = hom_to_tensor_dual(A, B)
        assert phi.intertwines() and phi.is_isomorphism()


def test_dimension_cap():
    F = gf(2)
    V = LModule.trivial(abelian1(F), 20)
    with pytest.raises(DimensionCapError):
        tensor_power(V, 3)


def test_submodule_examples():
    L = two_dim(3)
    ad = LModule.adjoint(L)
    assert submodule(ad, [[1, 0], [0, 1]]).dim == 2
    assert submodule(LModule.trivial(L, 3), [[1, 0, 0]]).dim == 1
    U = submodule(ad, [[0, 1]])
    assert U.dim == 1 and U.contains([0, 1])
    assert is_submodule(ad, U)
    assert quotient(ad, U).actions[0].tolist() == [[0]]
    assert restrict_to(ad, U).actions[0].tolist() == [[1]]


def test_sub_quotient():
    F = gf(3)
    L = abelian1(F)
    N = mat(F, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    M = LModule(L, [N])
    U1 = submodule(M, [[1, 0, 0]])
    U2 = submodule(M, [[0, 1, 0]])
    Q = sub_quotient(M, U1, U2)
    assert Q.dim == 1 and Q.actions[0].is_zero()
    with pytest.raises(ModuleError):
        sub_quotient(M, U2, U1)


def test_irreducibility_examples():
    L = two_dim(3)
    assert irreducibility_test(LModule.one_dim(L, [1, 0])).irreducible
    r = irreducibility_test(LModule.trivial(L, 2))
    assert not r.irreducible and r.submodule.dim == 1
    r = irreducibility_test(LModule.adjoint(L))
    assert not r.irreducible
    assert r.submodule == Subspace.span(gf(3), 2, [[0, 1]])
    assert is_irreducible(companion_module())


def test_composition_series_examples():
    L = two_dim(3)
    cs = composition_series(LModule.adjoint(L))
    assert [f.dim for f in cs.factors] == [1, 1]
    assert cs.chain[1] == Subspace.span(gf(3), 2, [[0, 1]])
    assert [f.dim for f in composition_factors(LModule.trivial(L, 3))] == [1, 1, 1]
    assert len(composition_factors(companion_module())) == 1


def test_endomorphism_examples():
    L = two_dim(3)
    assert endomorphism_algebra_dim(LModule.one_dim(L, [0, 0])) == 1
    assert endomorphism_algebra_dim(LModule.trivial(L, 3)) == 9
    C = companion_module()
    assert endomorphism_algebra_dim(C, method="kron") == 2
    assert endomorphism_algebra_dim(C, method="cyclic") == 2


def test_extend_scalars_splits_companion():
    C = companion_module()
    F4 = gf(2, 2)
    C4 = extend_scalars(C, embedding(gf(2), F4))
    facs = composition_factors(C4)
    assert [f.dim for f in facs] == [1, 1]
    vals = {f.actions[0].is_scalar() for f in facs}
    w = F4.gen
    assert vals == {w, w * w}
    assert extend_scalars(C, embedding(gf(2), gf(2))).actions == C.actions


def test_restrict_to_subalgebra_examples():
    L = two_dim(3)
    ad = LModule.adjoint(L)
    assert restrict_to_subalgebra(ad, Subalgebra.whole(L)).actions == ad.actions
    S = Subalgebra.spanned_by(L, [[0, 1]])
    R = restrict_to_subalgebra(ad, S)
    assert R.algebra.dim == 1 and R.actions[0] == ad.actions[1]


def test_extend_action_examples():
    F = gf(2)
    # S = span(N) with N = J_3; L adds N^2
    N = mat(F, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    L, sub = p_envelope(LieAlgebra.abelian(F, 1), [N])
    M = LModule(sub.as_algebra(), [mat(F, [[0, 1], [0, 0]])])
    E = extend_action_to_penvelope(L, sub, M)
    assert E.actions[1] == M.actions[0] ** 2
    assert restrict_to_subalgebra(E, sub).actions == M.actions
    # L = S
    L2 = two_dim(3)
    ad = LModule.adjoint(L2)
    S = Subalgebra.whole(L2)
    assert extend_action_to_penvelope(L2, S, restrict_to_subalgebra(ad, S)).actions == ad.actions


def test_extend_action_on_the_adjoint_of_the_2dim_algebra():
    # here x^[3] = x already lies in S, so rho(x)^3 must equal rho(x)
    F = gf(3)
    S = LieAlgebra.from_brackets(F, 2, {(0, 1): {1: 1}})
    L, sub = p_envelope(S)
    ad = LModule.adjoint(S)
    E = extend_action_to_penvelope(L, sub, ad)
    assert not verify_module(E)
    assert restrict_to_subalgebra(E, sub).actions == ad.actions
    assert E.actions[0] ** 3 == E.action_of(L.pmap(L.basis_vector(0)))


@pytest.mark.parametrize("p", [2, 3])
def test_irreducibility_against_oracle(p):
    F = gf(p)
    rng = random.Random(p)
    for _ in range(40):
        d = rng.choice([2, 3])
        M = commuting_module(F, rng.choice([1, 2]), d, rng) if rng.random() < 0.5 \
            else natural_module(F, d, rng.choice([1, 2]), rng)
        assert is_irreducible(M, seed=rng.randrange(100)) == oracle_irreducible(M)


def test_irreducibility_against_oracle_extension_field():
    F = gf(2, 2)
    rng = random.Random(9)
    for _ in range(20):
        M = commuting_module(F, 1, rng.choice([2, 3]), rng)
        assert is_irreducible(M) == oracle_irreducible(M)


def _jh(M, seed):
    return sorted(f.dim for f in composition_factors(M, seed))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_jordan_hoelder_is_seed_independent(p):
    F = gf(p)
    rng = random.Random(100 + p)
    for _ in range(15):
        A = natural_module(F, rng.choice([2, 3]), 2, rng)
        M = direct_sum(A, LModule.adjoint(A.algebra)) if A.algebra.dim <= 4 else A
        dims = {tuple(_jh(M, s)) for s in range(5)}
        assert len(dims) == 1
        for f in composition_factors(M):
            assert is_irreducible(f)
        assert sum(dims.pop()) == M.dim


@pytest.mark.parametrize("p", [2, 3])
def test_end_dim_methods_agree(p):
    F = gf(p)
    rng = random.Random(7 * p)
    for _ in range(30):
        M = commuting_module(F, 2, rng.choice([2, 3, 4]), rng)
        k = endomorphism_algebra_dim(M, method="kron")
        try:
            c = endomorphism_algebra_dim(M, method="cyclic")
        except Exception:
            continue        # no cyclic vector among the candidates
        assert k == c


def test_extend_scalars_commutes_with_tensor_and_hom():
    rng = random.Random(5)
    F = gf(2)
    e = embedding(F, gf(2, 2))
    for _ in range(10):
        A = commuting_module(F, 2, 2, rng)
        B = commuting_module(F, 2, 2, rng)
        B = LModule(A.algebra, B.actions, F, 2)
        assert extend_scalars(tensor(A, B), e).actions == tensor(extend_scalars(A, e), extend_scalars(B, e)).actions
        assert extend_scalars(hom_module(A, B), e).actions == \
            hom_module(extend_scalars(A, e), extend_scalars(B, e)).actions


@st.composite
def modules_and_combinations(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    seed = draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    F = gf(p)
    M = commuting_module(F, 2, draw(st.integers(1, 3)), rng) if draw(st.booleans()) \
        else natural_module(F, 2, 2, rng)
    n = M.algebra.dim
    x = np.asarray([F.random_element(rng).coeffs for _ in range(n)])
    y = np.asarray([F.random_element(rng).coeffs for _ in range(n)])
    lam = F.random_element(rng)
    return M, x, y, lam


@given(modules_and_combinations())
def test_defect_is_p_semilinear(t):
    M, x, y, lam = t
    F = M.field
    assert defect_of(M, (x + y) % F.p) == defect_of(M, x) + defect_of(M, y)
    lx = F.amul(F.scalar_array(lam)[None], x)
    assert defect_of(M, lx) == defect_of(M, x).scale(lam ** F.p)


def test_defect_examples():
    F = gf(5)
    M = LModule.one_dim(abelian1(F), [3])
    assert semilinear_defect(M, 0).is_scalar() == F(3) ** 5
    assert semilinear_defect(LModule.adjoint(two_dim(5)), 0).is_zero()


def test_change_basis_and_json():
    rng = random.Random(1)
    F = gf(3)
    M = natural_module(F, 3, 2, rng)
    while True:
        P = random_matrix(F, 3, rng)
        try:
            N = change_basis(M, P)
            break
        except ModuleError:
            continue
    assert not verify_module(N)
    assert ModuleMap(N, M, P).intertwines()
    assert LModule.from_json(M.algebra, M.to_json()).actions == M.actions
