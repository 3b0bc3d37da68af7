"""Lie algebras by structure constants, p-maps, series, subnormality and
p-envelopes."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .gf import FieldCtx
from .linalg import Matrix, Subspace, kernel, rref_array, spin


class LieError(ValueError):
    pass


def solve_coords(ctx: FieldCtx, rows: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Coordinates of `vectors` in the linearly independent `rows`.

    rows: (k, N, m); vectors: (t, N, m); returns (t, k, m)."""
    k = len(rows)
    t = len(vectors)
    if t == 0:
        return ctx.zeros((0, k))
    if k == 0:
        if vectors.any():
            raise LieError("vector outside the span")
        return ctx.zeros((t, 0))
    aug = np.concatenate([rows, vectors], axis=0).transpose(1, 0, 2)
    R, piv = rref_array(ctx, np.ascontiguousarray(aug))
    if piv[:k] != list(range(k)) or (len(piv) > k):
        raise LieError("vector outside the span (or dependent basis)")
    return np.ascontiguousarray(R[:k, k:].transpose(1, 0, 2))


class LieAlgebra:
    """[e_i, e_j] = sum_k sc[i, j, k] e_k over `field`."""

    def __init__(self, field: FieldCtx, sc: np.ndarray):
        n = sc.shape[0]
        if sc.shape != (n, n, n, field.m):
            raise LieError(f"structure constants must have shape (n, n, n, {field.m})")
        self.field = field
        self.dim = n
        self.sc = sc % field.p

    # -- construction --------------------------------------------------------
    @classmethod
    def abelian(cls, field: FieldCtx, n: int) -> "LieAlgebra":
        return cls(field, field.zeros((n, n, n)))

    @classmethod
    def from_brackets(cls, field: FieldCtx, n: int, brackets: dict) -> "LieAlgebra":
        """brackets maps (i, j) with i < j to {k: coefficient}; the other
        half follows by antisymmetry."""
        sc = field.zeros((n, n, n))
        for (i, j), terms in brackets.items():
            for k, c in terms.items():
                v = field.scalar_array(c)
                sc[i, j, k] = v
                sc[j, i, k] = (-v) % field.p
        return cls(field, sc)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, {self.field})"

    # -- vectors -------------------------------------------------------------
    def vec(self, coords) -> np.ndarray:
        return self.field.asarray(list(coords)).reshape(self.dim, self.field.m)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i, 0] = 1
        return v

    def zero_vector(self) -> np.ndarray:
        return self.field.zeros(self.dim)

    @cached_property
    def ad_basis(self) -> np.ndarray:
        """(n, n, n, m): ad_basis[i] is the matrix of ad(e_i)."""
        return np.ascontiguousarray(self.sc.transpose(0, 2, 1, 3))

    def ad(self, x: np.ndarray) -> Matrix:
        F = self.field
        if self.dim == 0:
            return Matrix.zeros(F, 0, 0)
        a = F.amul(x[:, None, None, :], self.ad_basis).sum(axis=0) % F.p
        return Matrix(F, a)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.ad(x).apply(y[None])[0]

    def brackets_of(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """All [a, b] for rows a of A and b of B, stacked."""
        out = [self.ad(a).apply(B) for a in A]
        if not out:
            return self.field.zeros((0, self.dim))
        return np.concatenate(out, axis=0)

    def bracket_space(self, A: Subspace, B: Subspace) -> Subspace:
        return Subspace.span(self.field, self.dim, self.brackets_of(A.basis, B.basis))

    def full_space(self) -> Subspace:
        return Subspace.full(self.field, self.dim)

    def to_sparse(self) -> list:
        out = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(self.dim):
                    if self.sc[i, j, k].any():
                        out.append([i, j, k, [int(c) for c in self.sc[i, j, k]]])
        return out


def bracket(L: LieAlgebra, x, y) -> np.ndarray:
    return L.bracket(np.asarray(x), np.asarray(y))


def verify_lie(alg: LieAlgebra) -> list[dict]:
    """Violations of antisymmetry and the Jacobi identity (empty = valid)."""
    F = alg.field
    n = alg.dim
    out = []
    sc = alg.sc
    for i in range(n):
        if sc[i, i].any():
            out.append({"axiom": "alternating", "pair": [i, i]})
        for j in range(i + 1, n):
            if ((sc[i, j] + sc[j, i]) % F.p).any():
                out.append({"axiom": "antisymmetry", "pair": [i, j]})
    ads = [Matrix(F, alg.ad_basis[i]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = alg.ad(sc[i, j])
            rhs = ads[i] @ ads[j] - ads[j] @ ads[i]
            if lhs != rhs:
                out.append({"axiom": "jacobi", "pair": [i, j]})
    return out


class RestrictedLieAlgebra(LieAlgebra):
    """A Lie algebra with p-map images of the basis vectors.

    `realization`, when present, is a list of matrices giving a faithful
    Lie representation; `realization_restricted` records whether the p-map
    is matrix p-th power under it.
    """

    def __init__(self, field: FieldCtx, sc: np.ndarray, pmap_images: np.ndarray,
                 realization: Sequence[Matrix] | None = None, realization_restricted: bool = False):
        super().__init__(field, sc)
        n = self.dim
        if pmap_images.shape != (n, n, field.m):
            raise LieError("pmap images must have shape (n, n, m)")
        self.pmap_images = pmap_images % field.p
        self.realization = list(realization) if realization is not None else None
        self.realization_restricted = bool(realization_restricted and realization is not None)

    @classmethod
    def from_lie(cls, alg: LieAlgebra, pmap_images, **kw) -> "RestrictedLieAlgebra":
        imgs = np.asarray(pmap_images) if isinstance(pmap_images, np.ndarray) else alg.field.asarray(pmap_images)
        return cls(alg.field, alg.sc, imgs.reshape(alg.dim, alg.dim, alg.field.m), **kw)

    def underlying(self) -> LieAlgebra:
        return LieAlgebra(self.field, self.sc)

    def jacobson_sum(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """sum_{i=1}^{p-1} s_i(x, y), where i*s_i(x, y) is the coefficient of
        t^(i-1) in ad(t x + y)^(p-1)(x)."""
        F = self.field
        p = F.p
        A = self.ad(x)
        B = self.ad(y)
        coeffs = [x.copy()]
        for _ in range(p - 1):
            new = [F.zeros(self.dim) for _ in range(len(coeffs) + 1)]
            for k, v in enumerate(coeffs):
                new[k + 1] = (new[k + 1] + A.apply(v[None])[0]) % p
                new[k] = (new[k] + B.apply(v[None])[0]) % p
            coeffs = new
        total = F.zeros(self.dim)
        for i in range(1, p):
            inv_i = pow(i, p - 2, p)
            total = (total + coeffs[i - 1] * inv_i) % p
        return total

    def pmap(self, x: np.ndarray) -> np.ndarray:
        """x^[p] from the basis images via semilinearity and Jacobson's
        formula."""
        F = self.field
        acc = None
        accp = F.zeros(self.dim)
        for i in range(self.dim):
            if not x[i].any():
                continue
            term = F.zeros(self.dim)
            term[i] = x[i]
            lam_p = F.apow_scalar(x[i], F.p)
            termp = F.amul(self.pmap_images[i], lam_p[None, :])
            if acc is None:
                acc, accp = term, termp
            else:
                accp = (accp + termp + self.jacobson_sum(acc, term)) % F.p
                acc = (acc + term) % F.p
        return accp

    def to_json_pmap(self) -> list:
        return [[list(map(int, e)) for e in row] for row in self.pmap_images]


def verify_pmap(L: RestrictedLieAlgebra, scalars: Sequence | None = None) -> list[dict]:
    """Violations of the p-map axioms (empty = valid).

    Checks ad(e_i^[p]) = ad(e_i)^p; ad((e_i + c e_j)^[p]) = ad(e_i + c e_j)^p
    with the Jacobson-computed p-map; (c x)^[p] = c^p x^[p] on basis pairs;
    and agreement with matrix p-th powers under a restricted realization.
    """
    F = L.field
    p = F.p
    n = L.dim
    out = []
    if scalars is None:
        scalars = [F.from_code(c) for c in range(1, min(F.order, 6))]
        if F.m > 1:
            scalars.append(F.gen)
    scal = [F.scalar_array(c) for c in scalars]
    for i in range(n):
        if L.ad(L.pmap_images[i]) != L.ad(L.basis_vector(i)) ** p:
            out.append({"axiom": "ad_pmap", "basis": i})
    for i in range(n):
        for j in range(i + 1, n):
            for c in scal:
                x = L.basis_vector(i)
                x[j] = c
                xp = L.pmap(x)
                if L.ad(xp) != L.ad(x) ** p:
                    out.append({"axiom": "jacobson", "pair": [i, j], "scalar": c.tolist()})
                cx = F.amul(x, c[None, :])
                lhs = L.pmap(cx)
                rhs = F.amul(xp, F.apow_scalar(c, p)[None, :])
                if (lhs != rhs).any():
                    out.append({"axiom": "semilinear", "pair": [i, j], "scalar": c.tolist()})
    if L.realization_restricted:
        R = L.realization

        def phi(v):
            acc = Matrix.zeros(F, R[0].rows, R[0].cols)
            for k in range(n):
                if v[k].any():
                    acc = acc + R[k].scale(F.elem(v[k]))
            return acc

        for i in range(n):
            if phi(L.pmap_images[i]) != R[i] ** p:
                out.append({"axiom": "realization_pmap", "basis": i})
            for j in range(i + 1, n):
                x = (L.basis_vector(i) + L.basis_vector(j)) % p
                if phi(L.pmap(x)) != phi(x) ** p:
                    out.append({"axiom": "realization_jacobson", "pair": [i, j]})
    return out


def centre(L: LieAlgebra) -> Subspace:
    """{z : [z, e_i] = 0 for all i}."""
    F = L.field
    n = L.dim
    if n == 0:
        return Subspace.zero(F, 0)
    # row (i, k), column j: coefficient c[j, i, k]
    stacked = L.sc.transpose(1, 2, 0, 3).reshape(n * n, n, F.m)
    return kernel(Matrix(F, np.ascontiguousarray(stacked)))


@dataclass
class Subalgebra:
    parent: LieAlgebra
    space: Subspace

    def __post_init__(self):
        if self.space.ambient_dim != self.parent.dim:
            raise LieError("subspace dimension does not match the algebra")

    @classmethod
    def spanned_by(cls, L: LieAlgebra, vectors) -> "Subalgebra":
        S = Subspace.span(L.field, L.dim, np.asarray(vectors).reshape(-1, L.dim, L.field.m)
                          if np.size(vectors) else L.field.zeros((0, L.dim)))
        sub = cls(L, S)
        if not sub.is_closed():
            raise LieError("span is not closed under the bracket")
        return sub

    @classmethod
    def whole(cls, L: LieAlgebra) -> "Subalgebra":
        return cls(L, L.full_space())

    @property
    def dim(self) -> int:
        return self.space.dim

    def is_closed(self) -> bool:
        br = self.parent.brackets_of(self.space.basis, self.space.basis)
        return self.space.contains_all(br)

    def as_algebra(self) -> LieAlgebra:
        """The subalgebra in the coordinates of its echelon basis."""
        L = self.parent
        F = L.field
        k = self.dim
        sc = F.zeros((k, k, k))
        B = self.space.basis
        for i in range(k):
            imgs = L.ad(B[i]).apply(B)
            sc[i] = self.space.coords(imgs)
        return LieAlgebra(F, sc)

    def vectors(self) -> np.ndarray:
        return self.space.basis


def _as_sub(S) -> Subalgebra:
    if isinstance(S, Subalgebra):
        return S
    if isinstance(S, LieAlgebra):
        return Subalgebra.whole(S)
    raise TypeError("expected a Subalgebra or LieAlgebra")


def lower_central_series(S) -> list[Subspace]:
    S = _as_sub(S)
    L = S.parent
    series = [S.space]
    while True:
        nxt = L.bracket_space(S.space, series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def derived_series(S) -> list[Subspace]:
    S = _as_sub(S)
    L = S.parent
    series = [S.space]
    while True:
        nxt = L.bracket_space(series[-1], series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def is_nilpotent(S) -> bool:
    return lower_central_series(S)[-1].dim == 0


def is_soluble(S) -> bool:
    return derived_series(S)[-1].dim == 0


def nilpotency_class(S) -> int | None:
    series = lower_central_series(S)
    if series[-1].dim:
        return None
    return len(series) - 1


def ideal_closure(S, M: Subspace) -> Subspace:
    """Smallest subspace of M containing S and stable under ad(M)."""
    S = _as_sub(S)
    L = S.parent
    if M.dim == 0 or S.dim == 0:
        return S.space
    ops = [L.ad(m) for m in M.basis]
    return spin(S.space, ops, L.field, L.dim)


def is_subnormal(S, L: LieAlgebra | None = None) -> tuple[bool, list[Subspace]]:
    """Successive ideal closures L_0 = L, L_{i+1} = ideal_closure(S, L_i);
    S is subnormal iff this reaches S."""
    S = _as_sub(S)
    if L is None:
        L = S.parent
    cur = L.full_space()
    chain = [cur]
    if cur == S.space:
        return True, chain
    for _ in range(L.dim + 1):
        nxt = ideal_closure(S, cur)
        if nxt == cur:
            return False, chain
        chain.append(nxt)
        if nxt == S.space:
            return True, chain
        cur = nxt
    return False, chain


def is_ideal(L: LieAlgebra, I: Subspace, M: Subspace | None = None) -> bool:
    M = M if M is not None else L.full_space()
    return I.contains_all(L.brackets_of(M.basis, I.basis))


def generated_subalgebra(L: LieAlgebra, vectors: np.ndarray) -> Subalgebra:
    S = Subspace.span(L.field, L.dim, vectors)
    while True:
        br = L.brackets_of(S.basis, S.basis)
        if S.contains_all(br):
            return Subalgebra(L, S)
        S = Subspace.span(L.field, L.dim, np.concatenate([S.basis, br], axis=0))


def p_closure(L: RestrictedLieAlgebra, space: Subspace) -> Subspace:
    """Smallest restricted subalgebra containing `space`."""
    S = generated_subalgebra(L, space.basis).space
    while True:
        extra = [L.pmap(b) for b in S.basis]
        if not extra or S.contains_all(np.stack(extra)):
            return S
        S = generated_subalgebra(L, np.concatenate([S.basis, np.stack(extra)], axis=0)).space


# -- matrix realisations ---------------------------------------------------

def matrix_p_closure(generators: Sequence[Matrix]) -> RestrictedLieAlgebra:
    """Smallest space of matrices containing the generators and closed under
    commutators and p-th powers.  Basis order: independent generators first,
    then new elements in order of discovery."""
    gens = list(generators)
    if not gens:
        raise LieError("need at least one generator")
    F = gens[0].ctx
    p = F.p
    n = gens[0].rows
    N = n * n
    basis: list[Matrix] = []
    span = Subspace.zero(F, N)

    def add(M: Matrix) -> bool:
        nonlocal span
        v = M.a.reshape(1, N, F.m)
        if span.contains_all(v):
            return False
        span = Subspace.span(F, N, np.concatenate([span.basis, v], axis=0))
        basis.append(M)
        return True

    for g in gens:
        if g.shape != (n, n) or g.ctx != F:
            raise LieError("generators must be square matrices of one size over one field")
        add(g)
    done = 0
    while done < len(basis):
        b = basis[done]
        for a in list(basis[: done + 1]):
            add(a @ b - b @ a)
        add(b ** p)
        done += 1
    k = len(basis)
    if k == 0:
        return RestrictedLieAlgebra(F, F.zeros((0, 0, 0)), F.zeros((0, 0)), realization=[],
                                    realization_restricted=True)
    rows = np.stack([b.a.reshape(N, F.m) for b in basis])
    sc = F.zeros((k, k, k))
    for i in range(k):
        comms = np.stack([(basis[i] @ basis[j] - basis[j] @ basis[i]).a.reshape(N, F.m) for j in range(k)])
        sc[i] = solve_coords(F, rows, comms)
    powers = np.stack([(b ** p).a.reshape(N, F.m) for b in basis])
    pm = solve_coords(F, rows, powers)
    return RestrictedLieAlgebra(F, sc, pm, realization=basis, realization_restricted=True)


def is_representation(alg: LieAlgebra, mats: Sequence[Matrix]) -> bool:
    F = alg.field
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            lhs = _combine(F, mats, alg.sc[i, j])
            if lhs != mats[i] @ mats[j] - mats[j] @ mats[i]:
                return False
    return True


def _combine(F: FieldCtx, mats: Sequence[Matrix], coeffs: np.ndarray) -> Matrix:
    a = F.amul(coeffs[:, None, None, :], np.stack([m.a for m in mats])).sum(axis=0) % F.p
    return Matrix(F, a)


def p_envelope(S: LieAlgebra, faithful: Sequence[Matrix] | None = None
               ) -> tuple[RestrictedLieAlgebra, Subalgebra]:
    """A restricted algebra L generated by a copy of S as an ideal.

    Uses the adjoint representation when S has trivial centre; otherwise a
    faithful matrix representation must be supplied.  The copy of S spans
    the first dim(S) basis vectors of L.
    """
    F = S.field
    if faithful is None:
        if centre(S).dim:
            raise LieError("S has a nontrivial centre: supply a faithful matrix representation")
        faithful = [Matrix(F, S.ad_basis[i]) for i in range(S.dim)]
    faithful = list(faithful)
    if len(faithful) != S.dim:
        raise LieError("need one matrix per basis vector of S")
    if not is_representation(S, faithful):
        raise LieError("supplied matrices do not form a representation")
    N = faithful[0].rows ** 2
    flat = np.stack([m.a.reshape(N, F.m) for m in faithful])
    if Subspace.span(F, N, flat).dim != S.dim:
        raise LieError("supplied representation is not faithful")
    L = matrix_p_closure(faithful)
    sub = Subalgebra(L, Subspace.span(F, L.dim, np.stack([L.basis_vector(i) for i in range(S.dim)])))
    if not is_ideal(L, sub.space):
        raise LieError("internal: S is not an ideal of its envelope")
    if not sub.space.contains_all(L.brackets_of(L.full_space().basis, L.full_space().basis)):
        raise LieError("internal: [L, L] not inside S")
    return L, sub


def adjust_pmap_centre_kill(L: RestrictedLieAlgebra) -> RestrictedLieAlgebra:
    """Subtract a p-semilinear map into the centre so central elements get
    zero p-th power.

    On the basis {z_1..z_r} (echelon basis of the centre) together with the
    standard basis vectors at non-pivot positions, phi(z_i) = z_i^[p] and
    phi vanishes on the complement; the new map is x -> x^[p] - phi(x).
    """
    F = L.field
    p = F.p
    Z = centre(L)
    if Z.dim == 0:
        return L
    zp = np.stack([L.pmap(z) for z in Z.basis])
    new = L.pmap_images.copy()
    for k in range(L.dim):
        # coordinate of e_k along z_i in the adapted basis is e_k[pivot_i]
        if k in Z.pivots:
            i = Z.pivots.index(k)
            new[k] = (new[k] - zp[i]) % p
    out = RestrictedLieAlgebra(F, L.sc, new, realization=L.realization,
                               realization_restricted=L.realization_restricted and (new == L.pmap_images).all())
    bad = verify_pmap(out)
    if bad:
        raise LieError(f"internal: adjusted p-map fails its axioms: {bad[:3]}")
    for z in Z.basis:
        if out.pmap(z).any():
            raise LieError("internal: a central element kept a nonzero p-th power")
    return out
