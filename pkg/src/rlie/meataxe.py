"""Irreducibility testing, composition series and endomorphism dimensions.

The irreducibility test follows Holt and Rees.  A random element theta of
the enveloping matrix algebra is drawn, g is an irreducible factor of the
order polynomial of a random vector, and N = ker g(theta).  Spinning one
nonzero vector of N (and of the transposed kernel under the transposed
action) either produces a proper submodule or, when dim N = deg g, proves
irreducibility.  If random draws keep missing, every projective point of
the smallest kernel seen is spun, which is conclusive by Norton's argument.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import poly
from .linalg import Matrix, Subspace, kernel, rref_array, spin
from .repmod import LModule, quotient, restrict_to

MAX_PROJECTIVE_POINTS = 200_000


class MeataxeError(RuntimeError):
    pass


@dataclass
class IrreducibilityResult:
    irreducible: bool
    submodule: Subspace | None = None
    method: str = ""


def _random_theta(mats: list[Matrix], rng: random.Random, max_word: int = 8) -> Matrix:
    F = mats[0].ctx
    d = mats[0].rows
    acc = Matrix.scalar(F, d, F.random_element(rng))
    for _ in range(len(mats) + 2):
        w = mats[rng.randrange(len(mats))]
        for _ in range(rng.randrange(max_word)):
            w = w @ mats[rng.randrange(len(mats))]
        acc = acc + w.scale(F.random_element(rng))
    return acc


def order_polynomial(theta: Matrix, v: np.ndarray) -> np.ndarray:
    """Monic polynomial of least degree with f(theta) v = 0."""
    F = theta.ctx
    d = theta.rows
    krylov = [v.reshape(d, F.m)]
    tT = theta.a.transpose(1, 0, 2)
    for _ in range(d):
        krylov.append(F.amatmul(krylov[-1][None], tT)[0])
    K = np.stack(krylov)                      # (d+1, d, m)
    R, piv = rref_array(F, np.ascontiguousarray(K.transpose(1, 0, 2)))
    k = next(j for j in range(d + 1) if j >= len(piv) or piv[j] != j)
    coeffs = F.zeros(k + 1)
    coeffs[:k] = (-R[:k, k]) % F.p
    coeffs[k, 0] = 1
    return coeffs


def poly_of_matrix(f: np.ndarray, theta: Matrix) -> Matrix:
    F = theta.ctx
    d = theta.rows
    acc = Matrix.zeros(F, d, d)
    I = Matrix.identity(F, d)
    for c in f[::-1]:
        acc = acc @ theta + I.scale(F.elem(c))
    return acc


def _annihilator(U: Subspace) -> Subspace:
    """{v : u.v = 0 for all u in U}."""
    return kernel(U.basis_matrix())


def _dual_witness(mats: list[Matrix], w: np.ndarray) -> Subspace | None:
    F = mats[0].ctx
    d = mats[0].rows
    UT = spin(w.reshape(1, d, F.m), [m.T for m in mats], F, d)
    if UT.dim < d:
        return _annihilator(UT)
    return None


def _projective_points(F, k: int):
    """Coordinate vectors in F^k with first nonzero entry 1."""
    q = F.order
    elems = [np.asarray(e.coeffs, dtype=np.int64) for e in F.elements()]
    for lead in range(k):
        tail = k - lead - 1
        for idx in range(q ** tail):
            c = F.zeros(k)
            c[lead, 0] = 1
            for j in range(tail):
                idx, r = divmod(idx, q)
                c[lead + 1 + j] = elems[r]
            yield c


def irreducibility_test(M: LModule, rng: random.Random | None = None, tries: int = 24) -> IrreducibilityResult:
    F = M.field
    d = M.dim
    if d == 0:
        raise MeataxeError("the zero module is not irreducible")
    if d == 1:
        return IrreducibilityResult(True, method="dim1")
    rng = rng or random.Random(0)
    mats = [a for a in M.actions if not a.is_zero()]
    if not mats:
        e0 = F.zeros((1, d))
        e0[0, 0, 0] = 1
        return IrreducibilityResult(False, Subspace.span(F, d, e0), "trivial")
    # a common null vector spans a submodule
    joint = kernel(Matrix.vstack(mats))
    if joint.dim:
        return IrreducibilityResult(False, Subspace.span(F, d, joint.basis[:1]), "joint-kernel")
    best = None
    for _ in range(tries):
        theta = _random_theta(mats, rng)
        v = F.zeros(d)
        for i in range(d):
            v[i] = F.random_element(rng).coeffs
        if not v.any():
            continue
        mu = order_polynomial(theta, v)
        _, factors = poly.smallest_degree_factors(F, mu, rng)
        for g in factors:
            th = poly_of_matrix(g, theta)
            N = kernel(th)
            U = spin(N.basis[:1], mats, F, d)
            if U.dim < d:
                return IrreducibilityResult(False, U, "holt-rees")
            w = kernel(th.T).basis[0]
            W = _dual_witness(mats, w)
            if W is not None:
                return IrreducibilityResult(False, W, "holt-rees-dual")
            if N.dim == len(g) - 1:
                return IrreducibilityResult(True, method="holt-rees")
            if best is None or N.dim < best[1].dim:
                best = (th, N)
    if best is None:
        raise MeataxeError("no usable random element found")
    return _exhaustive(mats, *best)


def _exhaustive(mats, th: Matrix, N: Subspace) -> IrreducibilityResult:
    F = th.ctx
    d = th.rows
    NT = kernel(th.T)
    npts = sum(F.order ** j for j in range(max(N.dim, NT.dim)))
    if npts > MAX_PROJECTIVE_POINTS:
        raise MeataxeError(f"exhaustive fallback needs {npts} spins")
    for c in _projective_points(F, N.dim):
        v = F.amatmul(c[None], N.basis)
        U = spin(v, mats, F, d)
        if U.dim < d:
            return IrreducibilityResult(False, U, "exhaustive")
    for c in _projective_points(F, NT.dim):
        W = _dual_witness(mats, F.amatmul(c[None], NT.basis)[0])
        if W is not None:
            return IrreducibilityResult(False, W, "exhaustive-dual")
    return IrreducibilityResult(True, method="exhaustive")


@dataclass
class CompositionSeries:
    """0 = chain[0] < chain[1] < ... < chain[-1] = M with factors[i] the
    action on chain[i+1] / chain[i]."""

    module: LModule
    chain: list[Subspace] = dc_field(default_factory=list)
    factors: list[LModule] = dc_field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.factors)


def _pull_back(U: Subspace, sub_vectors: np.ndarray) -> np.ndarray:
    """Vectors of the ambient space from coordinates in U's echelon basis."""
    return U.ctx.amatmul(sub_vectors, U.basis)


def composition_series(M: LModule, seed: int = 0, rng: random.Random | None = None) -> CompositionSeries:
    rng = rng or random.Random(seed)
    F = M.field
    if M.dim == 0:
        return CompositionSeries(M, [Subspace.zero(F, 0)], [])
    # each entry: (module, map from module coordinates to M, base subspace of M)
    chain_vecs, factors = _series(M, rng)
    chain = [Subspace.zero(F, M.dim)]
    acc = F.zeros((0, M.dim))
    for vecs in chain_vecs:
        acc = np.concatenate([acc, vecs], axis=0)
        chain.append(Subspace.span(F, M.dim, acc))
    return CompositionSeries(M, chain, factors)


def _series(M: LModule, rng: random.Random):
    """Returns (blocks, factors): blocks[i] are vectors of M extending the
    previous partial sum to the next term of a composition series."""
    F = M.field
    res = irreducibility_test(M, rng)
    if res.irreducible:
        return [Matrix.identity(F, M.dim).a], [M]
    U = res.submodule
    sub = restrict_to(M, U)
    top = quotient(M, U)
    b1, f1 = _series(sub, rng)
    b2, f2 = _series(top, rng)
    blocks = [_pull_back(U, b) for b in b1]
    blocks += [U.lift(b) for b in b2]
    return blocks, f1 + f2


def composition_factors(M: LModule, seed: int = 0) -> list[LModule]:
    return composition_series(M, seed).factors


# -- endomorphisms -----------------------------------------------------------

def _standard_basis(M: LModule, v: np.ndarray):
    """Spin v recording each new basis vector as a word: returns the list of
    word matrices W_j with b_j = W_j v, or None if v does not generate M."""
    F = M.field
    d = M.dim
    mats = M.actions
    words = [Matrix.identity(F, d)]
    vecs = [v.reshape(d, F.m)]
    S = Subspace.span(F, d, vecs[0][None])
    i = 0
    while i < len(vecs) and S.dim < d:
        for a in mats:
            w = a.apply(vecs[i][None])
            if S.reduce(w).any():
                S = Subspace.span(F, d, np.concatenate([S.basis, w], axis=0))
                vecs.append(w[0])
                words.append(a @ words[i])
                if S.dim == d:
                    break
        i += 1
    if S.dim < d:
        return None
    return words, np.stack(vecs)


def _inverse(F, B: np.ndarray) -> np.ndarray:
    n = B.shape[0]
    aug = np.concatenate([B, Matrix.identity(F, n).a], axis=1)
    R, piv = rref_array(F, aug)
    if piv[:n] != list(range(n)):
        raise MeataxeError("singular matrix")
    return np.ascontiguousarray(R[:, n:])


def _end_dim_cyclic(M: LModule, rng: random.Random) -> int | None:
    F = M.field
    d = M.dim
    cands = [Matrix.identity(F, d).a[i] for i in range(d)]
    for _ in range(4):
        v = F.zeros(d)
        for i in range(d):
            v[i] = F.random_element(rng).coeffs
        cands.append(v)
    sb = None
    for v in cands:
        if v.any():
            sb = _standard_basis(M, v)
            if sb is not None:
                break
    if sb is None:
        return None
    words, vecs = sb
    # phi_u(b_j) = W_j u; columns of Phi_l are W_j e_l
    Binv = Matrix(F, _inverse(F, np.ascontiguousarray(vecs.transpose(1, 0, 2))))
    W = np.stack([w.a for w in words])            # (d, d, d, m): j, row, l
    conds = []
    for l in range(d):
        C = Matrix(F, np.ascontiguousarray(W[:, :, l].transpose(1, 0, 2)))
        Phi = C @ Binv
        conds.append(np.concatenate([(Phi @ a - a @ Phi).a.reshape(-1, F.m) for a in M.actions]))
    A = np.stack(conds, axis=1)                    # (n d^2, d, m)
    return kernel(Matrix(F, A)).dim


def _end_dim_kron(M: LModule) -> int:
    F = M.field
    d = M.dim
    I = Matrix.identity(F, d)
    blocks = [I.kron(a.T) - a.kron(I) for a in M.actions]
    if not blocks:
        return d * d
    return kernel(Matrix.vstack(blocks)).dim


def endomorphism_algebra_dim(M: LModule, seed: int = 0, method: str = "auto") -> int:
    """dim of the algebra of matrices commuting with every rho(e_i)."""
    if M.dim == 0:
        return 0
    if method == "kron" or (method == "auto" and M.dim <= 8):
        return _end_dim_kron(M)
    r = _end_dim_cyclic(M, random.Random(seed))
    if r is None:
        if method == "cyclic":
            raise MeataxeError("module has no cyclic vector among the candidates")
        return _end_dim_kron(M)
    return r


def is_irreducible(M: LModule, seed: int = 0) -> bool:
    return irreducibility_test(M, random.Random(seed)).irreducible
