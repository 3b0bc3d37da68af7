"""Modules for Lie algebras as matrix representations, and constructions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .gf import Embedding, FieldCtx, FieldError, embedding
from .liealg import (LieAlgebra, LieError, RestrictedLieAlgebra, Subalgebra,
                     solve_coords)
from .linalg import (Matrix, NotInvariantError, Subspace, quotient_action,
                     restrict_action, spin)

MAX_MODULE_DIM = 4096


class ModuleError(ValueError):
    pass


class DimensionCapError(ModuleError):
    pass


def _cap(d: int, cap: int | None = None):
    cap = MAX_MODULE_DIM if cap is None else cap
    if d > cap:
        raise DimensionCapError(f"module dimension {d} exceeds the cap {cap}")


class LModule:
    """A representation x -> rho(x) given by rho(e_i) for each basis vector.

    The module field may be an extension of the algebra's field; algebra
    scalars enter through the canonical embedding.
    """

    def __init__(self, algebra: LieAlgebra, actions: Sequence[Matrix], field: FieldCtx | None = None,
                 dim: int | None = None):
        actions = list(actions)
        if len(actions) != algebra.dim:
            raise ModuleError(f"need {algebra.dim} action matrices, got {len(actions)}")
        if field is None:
            field = actions[0].ctx if actions else algebra.field
        if dim is None:
            dim = actions[0].rows if actions else 0
        for a in actions:
            if a.ctx != field:
                raise FieldError("action matrices over different fields")
            if a.shape != (dim, dim):
                raise ModuleError(f"action matrix of shape {a.shape} in a {dim}-dimensional module")
        self.algebra = algebra
        self.field = field
        self.dim = dim
        self.actions = actions

    def __repr__(self):
        return f"LModule(dim={self.dim}, {self.field}, algebra dim={self.algebra.dim})"

    # -- scalars from the algebra's field -----------------------------------
    @cached_property
    def scalar_map(self) -> Embedding:
        return embedding(self.algebra.field, self.field)

    def lift_scalars(self, arr: np.ndarray) -> np.ndarray:
        if self.field == self.algebra.field:
            return arr
        return self.scalar_map.apply_array(arr)

    @cached_property
    def stacked(self) -> np.ndarray:
        """(n, d, d, m) array of the action matrices."""
        if not self.actions:
            return self.field.zeros((0, self.dim, self.dim))
        return np.stack([a.a for a in self.actions])

    def action_of(self, x: np.ndarray) -> Matrix:
        """rho(x) for x in algebra coordinates."""
        F = self.field
        xs = self.lift_scalars(np.asarray(x))
        if self.algebra.dim == 0:
            return Matrix.zeros(F, self.dim, self.dim)
        a = F.amul(xs[:, None, None, :], self.stacked).sum(axis=0) % F.p
        return Matrix(F, a)

    # -- standard modules ------------------------------------------------------
    @classmethod
    def trivial(cls, algebra: LieAlgebra, d: int = 1, field: FieldCtx | None = None) -> "LModule":
        field = field or algebra.field
        return cls(algebra, [Matrix.zeros(field, d, d) for _ in range(algebra.dim)], field, d)

    @classmethod
    def adjoint(cls, algebra: LieAlgebra) -> "LModule":
        F = algebra.field
        return cls(algebra, [Matrix(F, algebra.ad_basis[i].copy()) for i in range(algebra.dim)], F, algebra.dim)

    @classmethod
    def one_dim(cls, algebra: LieAlgebra, values, field: FieldCtx | None = None) -> "LModule":
        field = field or algebra.field
        return cls(algebra, [Matrix.scalar(field, 1, v) for v in values], field, 1)

    @classmethod
    def natural(cls, L: RestrictedLieAlgebra) -> "LModule":
        if not getattr(L, "realization", None):
            raise ModuleError("algebra has no matrix realization")
        return cls(L, [m for m in L.realization], L.field)

    def to_json(self) -> dict:
        return {"dim": self.dim, "field": self.field.to_json(),
                "action": [a.to_json() for a in self.actions]}

    @classmethod
    def from_json(cls, algebra: LieAlgebra, data: dict) -> "LModule":
        field = FieldCtx.from_json(data["field"]) if "field" in data else algebra.field
        d = int(data["dim"])
        acts = [Matrix.from_json(field, m) if d else Matrix.zeros(field, 0, 0) for m in data["action"]]
        return cls(algebra, acts, field, d)


def _bracket_op(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def verify_module(M: LModule) -> list[dict]:
    """Violations of rho([e_i, e_j]) = [rho(e_i), rho(e_j)] (empty = valid)."""
    out = []
    L = M.algebra
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = M.action_of(L.sc[i, j])
            rhs = _bracket_op(M.actions[i], M.actions[j])
            if lhs != rhs:
                out.append({"axiom": "bracket", "pair": [i, j]})
    return out


def is_restricted_module(M: LModule) -> bool:
    """rho(e_i)^p == rho(e_i^[p]) for every basis vector."""
    L = M.algebra
    if not isinstance(L, RestrictedLieAlgebra):
        raise ModuleError("restrictedness needs a restricted Lie algebra")
    p = M.field.p
    return all(M.actions[i] ** p == M.action_of(L.pmap_images[i]) for i in range(L.dim))


def _same_algebra(A: LModule, B: LModule):
    if A.algebra is not B.algebra and not (
            A.algebra.dim == B.algebra.dim and A.algebra.field == B.algebra.field
            and (A.algebra.sc == B.algebra.sc).all()):
        raise ModuleError("modules over different algebras")
    if A.field != B.field:
        raise ModuleError("modules over different fields")


def direct_sum(A: LModule, B: LModule, cap: int | None = None) -> LModule:
    _same_algebra(A, B)
    _cap(A.dim + B.dim, cap)
    acts = [Matrix.block_diag([a, b]) for a, b in zip(A.actions, B.actions)]
    return LModule(A.algebra, acts, A.field, A.dim + B.dim)


def direct_sum_all(mods: Sequence[LModule], cap: int | None = None) -> LModule:
    mods = list(mods)
    _cap(sum(m.dim for m in mods), cap)
    for m in mods[1:]:
        _same_algebra(mods[0], m)
    acts = [Matrix.block_diag([m.actions[i] for m in mods]) for i in range(mods[0].algebra.dim)]
    return LModule(mods[0].algebra, acts, mods[0].field, sum(m.dim for m in mods))


def tensor(A: LModule, B: LModule, cap: int | None = None) -> LModule:
    """x.(a (x) b) = (x.a) (x) b + a (x) (x.b); the index of A varies slower."""
    _same_algebra(A, B)
    _cap(A.dim * B.dim, cap)
    F = A.field
    IA = Matrix.identity(F, A.dim)
    IB = Matrix.identity(F, B.dim)
    acts = [a.kron(IB) + IA.kron(b) for a, b in zip(A.actions, B.actions)]
    return LModule(A.algebra, acts, F, A.dim * B.dim)


def tensor_power(V: LModule, r: int, cap: int | None = None) -> LModule:
    if r < 1:
        raise ModuleError("tensor power needs r >= 1")
    _cap(V.dim ** r, cap)
    out = V
    for _ in range(r - 1):
        out = tensor(out, V, cap)
    return out


def dual(A: LModule) -> LModule:
    return LModule(A.algebra, [-(a.T) for a in A.actions], A.field, A.dim)


def hom_module(A: LModule, B: LModule, cap: int | None = None) -> LModule:
    """Hom(A, B) with (x.f) = rho_B(x) f - f rho_A(x).

    f is a dim B x dim A matrix, flattened row-major (index of B slower)."""
    _same_algebra(A, B)
    _cap(A.dim * B.dim, cap)
    F = A.field
    IA = Matrix.identity(F, A.dim)
    IB = Matrix.identity(F, B.dim)
    acts = [b.kron(IA) - IB.kron(a.T) for a, b in zip(A.actions, B.actions)]
    return LModule(A.algebra, acts, F, A.dim * B.dim)


@dataclass
class ModuleMap:
    source: LModule
    target: LModule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ModuleError("module map matrix has the wrong shape")

    def intertwines(self) -> bool:
        return all(self.matrix @ a == b @ self.matrix
                   for a, b in zip(self.source.actions, self.target.actions))

    def image(self) -> Subspace:
        F = self.target.field
        cols = np.ascontiguousarray(self.matrix.a.transpose(1, 0, 2))
        if self.target.dim == 0:
            return Subspace.zero(F, 0)
        if not self.target.actions:
            return Subspace.span(F, self.target.dim, cols)
        return spin(cols, self.target.actions, F, self.target.dim)

    def is_isomorphism(self) -> bool:
        from .linalg import rank
        return self.source.dim == self.target.dim and rank(self.matrix) == self.source.dim

    def to_json(self) -> dict:
        return {"source_dim": self.source.dim, "target_dim": self.target.dim,
                "matrix": self.matrix.to_json()}


def hom_to_tensor_dual(A: LModule, B: LModule) -> ModuleMap:
    """Canonical isomorphism Hom(A, B) -> dual(A) (x) B, f -> sum f_ij a_j* (x) b_i."""
    H = hom_module(A, B)
    T = tensor(dual(A), B)
    F = A.field
    P = F.zeros((T.dim, H.dim))
    for i in range(B.dim):
        for j in range(A.dim):
            P[j * B.dim + i, i * A.dim + j, 0] = 1
    return ModuleMap(H, T, Matrix(F, P))


def submodule(M: LModule, generators) -> Subspace:
    F = M.field
    gens = np.asarray(generators).reshape(-1, M.dim, F.m) if np.size(generators) else F.zeros((0, M.dim))
    if not M.actions:
        return Subspace.span(F, M.dim, gens)
    return spin(gens, M.actions, F, M.dim)


def is_submodule(M: LModule, U: Subspace) -> bool:
    return all(U.contains_all(a.apply(U.basis)) for a in M.actions) if U.dim else True


def restrict_to(M: LModule, U: Subspace) -> LModule:
    """The submodule U with its action in U's echelon basis."""
    return LModule(M.algebra, [restrict_action(a, U) for a in M.actions], M.field, U.dim)


def quotient(M: LModule, U: Subspace) -> LModule:
    if not is_submodule(M, U):
        raise NotInvariantError("not a submodule")
    return LModule(M.algebra, [quotient_action(a, U, check=False) for a in M.actions], M.field,
                   M.dim - U.dim)


def sub_quotient(M: LModule, U: Subspace, U2: Subspace) -> LModule:
    """U2 / U for submodules U inside U2."""
    if not (U <= U2):
        raise ModuleError("sub_quotient needs U inside U2")
    top = restrict_to(M, U2)
    inner = Subspace.span(M.field, U2.dim, U2.coords(U.basis)) if U.dim else Subspace.zero(M.field, U2.dim)
    return quotient(top, inner)


def restrict_to_subalgebra(M: LModule, S: Subalgebra) -> LModule:
    """M as a module for S, in the coordinates of S's echelon basis."""
    if S.parent.dim != M.algebra.dim:
        raise ModuleError("subalgebra of a different algebra")
    salg = S.as_algebra()
    acts = [M.action_of(b) for b in S.space.basis]
    return LModule(salg, acts, M.field, M.dim)


def extend_scalars(M: LModule, e: Embedding) -> LModule:
    """Same action matrices with entries pushed through e."""
    if e.source != M.field:
        raise FieldError(f"embedding from {e.source} applied to a module over {M.field}")
    F = M.algebra.field
    if F.m > 1 and e.source != e.target:
        want = embedding(F, e.target).image_of_generator
        if e(M.scalar_map.image_of_generator) != want:
            raise FieldError("embedding is incompatible with the algebra's field")
    acts = [Matrix(e.target, e.apply_array(a.a)) for a in M.actions]
    return LModule(M.algebra, acts, e.target, M.dim)


def change_basis(M: LModule, P: Matrix) -> LModule:
    """The isomorphic module with actions P^-1 rho(x) P."""
    from .linalg import rref_array
    F = M.field
    n = M.dim
    aug = np.concatenate([P.a, Matrix.identity(F, n).a], axis=1)
    R, piv = rref_array(F, aug)
    if piv != list(range(n)):
        raise ModuleError("change of basis matrix is singular")
    Pinv = Matrix(F, np.ascontiguousarray(R[:, n:]))
    return LModule(M.algebra, [Pinv @ a @ P for a in M.actions], F, n)


def extend_action_to_penvelope(L: RestrictedLieAlgebra, S: Subalgebra, M: LModule) -> LModule:
    """Extend an S-module to L, where L is generated by the ideal S under
    the p-map.

    Starting from S's echelon basis, repeatedly take t^[p] for assigned
    vectors t; each one outside the assigned span becomes a new basis vector
    c with rho(c) = rho(t)^p.  M must be a module over S.as_algebra().
    """
    F = L.field
    if M.algebra.dim != S.dim:
        raise ModuleError("module is not over the given subalgebra")
    if not S.space.contains_all(L.brackets_of(L.full_space().basis, S.space.basis)):
        raise LieError("S is not an ideal of L")
    p = F.p
    vecs = [b for b in S.space.basis]
    acts = list(M.actions)
    span = S.space
    i = 0
    while i < len(vecs):
        t = vecs[i]
        tp = L.pmap(t)
        if not span.contains(tp):
            vecs.append(tp)
            acts.append(acts[i] ** p)
            span = Subspace.span(F, L.dim, np.stack(vecs))
        i += 1
    if len(vecs) != L.dim:
        raise LieError("L is not generated by S under the p-map")
    coords = solve_coords(F, np.stack(vecs), np.stack([L.basis_vector(k) for k in range(L.dim)]))
    stacked = np.stack([a.a for a in acts])
    G = M.field
    if G != F:
        coords = embedding(F, G).apply_array(coords)
    out_acts = []
    for k in range(L.dim):
        a = G.amul(coords[k][:, None, None, :], stacked).sum(axis=0) % G.p
        out_acts.append(Matrix(G, a))
    out = LModule(L, out_acts, G, M.dim)
    bad = verify_module(out)
    if bad:
        raise ModuleError(f"extended action is not a representation: {bad[:3]}")
    return out
