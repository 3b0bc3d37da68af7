"""Formations, central factors and hypercentres of modules."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .liealg import LieAlgebra, Subalgebra, is_nilpotent
from .linalg import Matrix, Subspace, kernel, spin
from .meataxe import composition_factors
from .repmod import LModule, ModuleError, quotient, restrict_to_subalgebra


@dataclass(frozen=True)
class Formation:
    """is_member decides membership of a Lie algebra; is_central_factor
    decides whether an irreducible module of a member algebra is central."""

    name: str
    is_member: Callable[[LieAlgebra], bool]
    is_central_factor: Callable[[LModule], bool]
    fast_hypercentre: Callable[[LModule], "tuple[Subspace, list[Subspace]]"] | None = None


def _annihilated(A: LModule) -> bool:
    return all(a.is_zero() for a in A.actions)


def nilpotent_formation() -> Formation:
    return Formation("nilpotent", lambda alg: alg.dim == 0 or is_nilpotent(Subalgebra.whole(alg)),
                     _annihilated, lambda M: _upper_annihilator_chain(M))


FORMATIONS = {"nilpotent": nilpotent_formation}


def formation_by_name(name: str) -> Formation:
    try:
        return FORMATIONS[name]()
    except KeyError:
        raise ValueError(f"unknown formation {name!r}; known: {sorted(FORMATIONS)}") from None


@dataclass
class HypercentralReport:
    module: LModule
    series: list[Subspace]
    hypercentre: Subspace
    is_hypercentral: bool
    obstruction: LModule | None = None

    def to_json(self) -> dict:
        out = {"dim": self.module.dim, "is_hypercentral": self.is_hypercentral,
               "series_dims": [U.dim for U in self.series],
               "series": [U.to_json() for U in self.series]}
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction.to_json()
        return out


def _as_s_module(S, M: LModule) -> LModule:
    """M restricted to S; S=None means M is already an S-module."""
    if S is None:
        if M.algebra.dim == 0:
            raise ModuleError("S must be nonzero")
        return M
    if not isinstance(S, Subalgebra) or S.parent.dim != M.algebra.dim:
        raise ModuleError("S must be a subalgebra of the module's algebra")
    if S.dim == 0:
        raise ModuleError("S must be nonzero")
    return restrict_to_subalgebra(M, S)


def _hom_images(A: LModule, Q: LModule) -> Subspace:
    """Sum of the images of all module maps A -> Q."""
    F = Q.field
    dA, dQ = A.dim, Q.dim
    # X with X rho_A = rho_Q X, X of shape dQ x dA flattened row-major
    IA = Matrix.identity(F, dA)
    IQ = Matrix.identity(F, dQ)
    blocks = [IQ.kron(a.T) - q.kron(IA) for a, q in zip(A.actions, Q.actions)]
    sol = kernel(Matrix.vstack(blocks)) if blocks else Subspace.full(F, dA * dQ)
    if sol.dim == 0:
        return Subspace.zero(F, dQ)
    cols = sol.basis.reshape(sol.dim, dQ, dA, F.m).transpose(0, 2, 1, 3).reshape(-1, dQ, F.m)
    return Subspace.span(F, dQ, cols)


def central_socle(Q: LModule, formation: Formation, seed: int = 0) -> Subspace:
    """Sum of the irreducible submodules of Q that are central."""
    F = Q.field
    types = []
    for A in composition_factors(Q, seed):
        if not formation.is_central_factor(A):
            continue
        if any(_isomorphic(A, B) for B in types):
            continue
        types.append(A)
    out = Subspace.zero(F, Q.dim)
    for A in types:
        img = _hom_images(A, Q)
        if img.dim:
            out = Subspace.span(F, Q.dim, np.concatenate([out.basis, img.basis]))
    return out


def _isomorphic(A: LModule, B: LModule) -> bool:
    # irreducible modules: a nonzero map between them is an isomorphism
    return A.dim == B.dim and _hom_images(A, B).dim > 0


def hypercentre(S, M: LModule, formation: Formation | None = None, seed: int = 0):
    """Largest submodule with an ascending chain of central factors.

    Returns (hypercentre, series) where series starts at 0."""
    formation = formation or nilpotent_formation()
    N = _as_s_module(S, M)
    F = N.field
    d = N.dim
    cur = Subspace.zero(F, d)
    series = [cur]
    while cur.dim < d:
        Q = quotient(N, cur)
        soc = central_socle(Q, formation, seed)
        if soc.dim == 0:
            break
        cur = Subspace.span(F, d, np.concatenate([cur.basis, cur.lift(soc.basis)]))
        series.append(cur)
    return cur, series


def _upper_annihilator_chain(N: LModule):
    F = N.field
    d = N.dim
    mats = [a for a in N.actions]
    cur = Subspace.zero(F, d)
    series = [cur]
    while cur.dim < d:
        # {v : a v in cur for all a}
        if cur.dim:
            proj = [Matrix(F, np.ascontiguousarray(cur.quotient_coords(a.a.transpose(1, 0, 2)).transpose(1, 0, 2)))
                    for a in mats]
        else:
            proj = mats
        if not proj:
            nxt = Subspace.full(F, d)
        else:
            nxt = kernel(Matrix.vstack(proj))
        if nxt.dim == cur.dim:
            break
        cur = nxt
        series.append(cur)
    return cur, series


def hypercentre_nilpotent_fast(S, M: LModule):
    """U_{i+1} = {v : rho(s) v in U_i for every basis vector s of S}."""
    return _upper_annihilator_chain(_as_s_module(S, M))


def is_hypercentral(S, M: LModule, formation: Formation | None = None, seed: int = 0,
                    fast: bool = False) -> HypercentralReport:
    formation = formation or nilpotent_formation()
    N = _as_s_module(S, M)
    if fast and formation.fast_hypercentre is not None:
        H, series = formation.fast_hypercentre(N)
    else:
        H, series = hypercentre(None, N, formation, seed)
    ok = H.dim == N.dim
    obstruction = None
    if not ok:
        Q = quotient(N, H)
        for A in composition_factors(Q, seed):
            if not formation.is_central_factor(A):
                obstruction = A
                break
    return HypercentralReport(M, series, H, ok, obstruction)


def enveloping_algebra_nilpotent(mats: list[Matrix]) -> bool:
    """Whether the associative algebra generated by mats (no identity) is
    nilpotent: iterate A_{k+1} = A_k * span(mats) down to zero."""
    if not mats:
        return True
    F = mats[0].ctx
    d = mats[0].rows
    flat = lambda ms: np.stack([m.a.reshape(-1, F.m) for m in ms])
    gens = Subspace.span(F, d * d, flat(mats))
    cur = gens
    for _ in range(d + 1):
        if cur.dim == 0:
            return True
        prods = [Matrix(F, b.reshape(d, d, F.m)) @ Matrix(F, g.reshape(d, d, F.m))
                 for b in cur.basis for g in gens.basis]
        cur = Subspace.span(F, d * d, flat(prods))
    return cur.dim == 0
