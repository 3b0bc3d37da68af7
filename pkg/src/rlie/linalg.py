"""Dense exact linear algebra over GF(p^m).

Vectors are arrays of shape (n, m); matrices wrap arrays of shape
(rows, cols, m).  Operators act on column vectors, so a batch of row
vectors V is mapped by an operator A as V @ A^T.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .gf import FieldCtx, FieldElem, FieldError


class DimensionError(ValueError):
    pass


class NotInvariantError(ValueError):
    pass


class Matrix:
    __slots__ = ("ctx", "a")

    def __init__(self, ctx: FieldCtx, a: np.ndarray):
        if a.ndim != 3 or a.shape[2] != ctx.m:
            raise DimensionError(f"matrix array must have shape (r, c, {ctx.m}), got {a.shape}")
        self.ctx = ctx
        self.a = a

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows, ncols: int | None = None) -> "Matrix":
        rows = list(rows)
        if not rows:
            return cls(ctx, ctx.zeros((0, ncols or 0)))
        return cls(ctx, ctx.asarray(rows).reshape(len(rows), -1, ctx.m))

    @classmethod
    def zeros(cls, ctx: FieldCtx, r: int, c: int) -> "Matrix":
        return cls(ctx, ctx.zeros((r, c)))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Matrix":
        a = ctx.zeros((n, n))
        a[np.arange(n), np.arange(n), 0] = 1
        return cls(ctx, a)

    @classmethod
    def scalar(cls, ctx: FieldCtx, n: int, c) -> "Matrix":
        a = ctx.zeros((n, n))
        a[np.arange(n), np.arange(n)] = ctx.scalar_array(c)
        return cls(ctx, a)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape[0], self.a.shape[1]

    def __getitem__(self, ij) -> FieldElem:
        i, j = ij
        return self.ctx.elem(self.a[i, j])

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.ctx != self.ctx:
            raise FieldError(f"matrices over {self.ctx} and {other.ctx}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.ctx, self.rows, other.cols)
        return Matrix(self.ctx, self.ctx.amatmul(self.a, other.a))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return Matrix(self.ctx, (self.a + other.a) % self.ctx.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return Matrix(self.ctx, (self.a - other.a) % self.ctx.p)

    def __neg__(self) -> "Matrix":
        return Matrix(self.ctx, (-self.a) % self.ctx.p)

    def scale(self, c) -> "Matrix":
        c = self.ctx.scalar_array(c)
        return Matrix(self.ctx, self.ctx.amul(self.a, c))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ctx, np.ascontiguousarray(self.a.transpose(1, 0, 2)))

    def __pow__(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionError("power of a non-square matrix")
        result = Matrix.identity(self.ctx, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ctx == other.ctx and self.a.shape == other.a.shape and bool((self.a == other.a).all())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.a.any()

    def is_scalar(self) -> FieldElem | None:
        """The scalar c if self == c * I, else None."""
        n = self.rows
        if n != self.cols:
            return None
        if n == 0:
            return self.ctx.zero
        d = self.a[np.arange(n), np.arange(n)]
        if (d != d[0]).any():
            return None
        off = self.a.copy()
        off[np.arange(n), np.arange(n)] = 0
        if off.any():
            return None
        return self.ctx.elem(d[0])

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        """Images of a batch of row vectors (k, n, m)."""
        if len(vectors) == 0:
            return self.ctx.zeros((0, self.rows))
        return self.ctx.amatmul(vectors, self.a.transpose(1, 0, 2))

    def to_json(self) -> list:
        return [[list(map(int, e)) for e in row] for row in self.a]

    @classmethod
    def from_json(cls, ctx: FieldCtx, data) -> "Matrix":
        rows = list(data)
        if not rows:
            return cls(ctx, ctx.zeros((0, 0)))
        a = ctx.zeros((len(rows), len(rows[0])))
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                a[i, j] = ctx.scalar_array(list(e) if not isinstance(e, int) else e)
        return cls(ctx, a)

    def tolist(self) -> list:
        if self.ctx.m == 1:
            return self.a[..., 0].tolist()
        return [[self.ctx.elem(e) for e in row] for row in self.a]

    def __repr__(self):
        return f"Matrix({self.ctx}, {self.tolist()})"

    @staticmethod
    def hstack(mats: Sequence["Matrix"]) -> "Matrix":
        return Matrix(mats[0].ctx, np.concatenate([m.a for m in mats], axis=1))

    @staticmethod
    def vstack(mats: Sequence["Matrix"]) -> "Matrix":
        return Matrix(mats[0].ctx, np.concatenate([m.a for m in mats], axis=0))

    @staticmethod
    def block_diag(mats: Sequence["Matrix"]) -> "Matrix":
        ctx = mats[0].ctx
        n = sum(m.rows for m in mats)
        c = sum(m.cols for m in mats)
        a = ctx.zeros((n, c))
        i = j = 0
        for m in mats:
            a[i:i + m.rows, j:j + m.cols] = m.a
            i += m.rows
            j += m.cols
        return Matrix(ctx, a)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; the index of self varies slower."""
        self._check(other)
        ctx = self.ctx
        r1, c1 = self.shape
        r2, c2 = other.shape
        prod = ctx.amul(self.a[:, None, :, None, :], other.a[None, :, None, :, :])
        return Matrix(ctx, prod.reshape(r1 * r2, c1 * c2, ctx.m))


# -- elimination ---------------------------------------------------------------

def _rref_prime(a2: np.ndarray, p: int):
    a = a2.copy()
    r, c = a.shape
    row = 0
    piv = []
    for col in range(c):
        if row == r:
            break
        nz = np.flatnonzero(a[row:, col])
        if len(nz) == 0:
            continue
        k = row + nz[0]
        if k != row:
            a[[row, k]] = a[[k, row]]
        inv = pow(int(a[row, col]), p - 2, p)
        if inv != 1:
            a[row, col:] = (a[row, col:] * inv) % p
        f = a[:, col].copy()
        f[row] = 0
        nzr = np.flatnonzero(f)
        if len(nzr):
            a[nzr, col:] = (a[nzr, col:] - np.outer(f[nzr], a[row, col:])) % p
        piv.append(col)
        row += 1
    return a, piv


def _rref_ext(ctx: FieldCtx, a3: np.ndarray):
    a = a3.copy()
    p = ctx.p
    r, c = a.shape[:2]
    row = 0
    piv = []
    for col in range(c):
        if row == r:
            break
        nz = np.flatnonzero(a[row:, col].any(axis=1))
        if len(nz) == 0:
            continue
        k = row + nz[0]
        if k != row:
            a[[row, k]] = a[[k, row]]
        inv = ctx.ainv_scalar(a[row, col])
        a[row, col:] = ctx.amul(a[row, col:], inv[None, :])
        f = a[:, col].copy()
        f[row] = 0
        nzr = np.flatnonzero(f.any(axis=1))
        if len(nzr):
            upd = ctx.amul(f[nzr][:, None, :], a[row, col:][None, :, :])
            a[nzr, col:] = (a[nzr, col:] - upd) % p
        piv.append(col)
        row += 1
    return a, piv


def rref_array(ctx: FieldCtx, a: np.ndarray):
    """Reduced row echelon form of an (r, c, m) array: (R, pivots)."""
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a.copy(), []
    if ctx.m == 1:
        r2, piv = _rref_prime(a[..., 0], ctx.p)
        return r2[..., None], piv
    return _rref_ext(ctx, a)


def rref(M: Matrix) -> tuple[Matrix, int, list[int]]:
    R, piv = rref_array(M.ctx, M.a)
    return Matrix(M.ctx, R), len(piv), piv


def rank(M: Matrix) -> int:
    return rref(M)[1]


# -- subspaces -----------------------------------------------------------------

class Subspace:
    """A subspace of F^n stored by its reduced echelon basis (rows)."""

    __slots__ = ("ctx", "ambient_dim", "basis", "pivots")

    def __init__(self, ctx: FieldCtx, ambient_dim: int, basis: np.ndarray, pivots: Sequence[int]):
        self.ctx = ctx
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, ctx: FieldCtx, n: int, vectors) -> "Subspace":
        if isinstance(vectors, Matrix):
            vectors = vectors.a
        vectors = np.asarray(vectors, dtype=np.int64) if not isinstance(vectors, np.ndarray) else vectors
        if vectors.size == 0:
            return cls.zero(ctx, n)
        vectors = vectors.reshape(-1, n, ctx.m)
        R, piv = rref_array(ctx, vectors)
        return cls(ctx, n, R[: len(piv)], piv)

    @classmethod
    def zero(cls, ctx: FieldCtx, n: int) -> "Subspace":
        return cls(ctx, n, ctx.zeros((0, n)), ())

    @classmethod
    def full(cls, ctx: FieldCtx, n: int) -> "Subspace":
        return cls(ctx, n, Matrix.identity(ctx, n).a, range(n))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis_matrix(self) -> Matrix:
        return Matrix(self.ctx, self.basis)

    @property
    def nonpivots(self) -> tuple[int, ...]:
        ps = set(self.pivots)
        return tuple(j for j in range(self.ambient_dim) if j not in ps)

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """Remainders of row vectors modulo the subspace."""
        if self.dim == 0 or len(vectors) == 0:
            return vectors % self.ctx.p
        coeff = vectors[:, list(self.pivots)]
        return (vectors - self.ctx.amatmul(coeff, self.basis)) % self.ctx.p

    def coords(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates in the echelon basis of vectors assumed to lie inside."""
        return vectors[:, list(self.pivots)].copy()

    def contains_all(self, vectors: np.ndarray) -> bool:
        return not self.reduce(vectors).any()

    def contains(self, v) -> bool:
        v = np.asarray(v).reshape(1, self.ambient_dim, self.ctx.m)
        return self.contains_all(v)

    def quotient_coords(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates in F^n / self, using the non-pivot positions."""
        return self.reduce(vectors)[:, list(self.nonpivots)]

    def lift(self, qvectors: np.ndarray) -> np.ndarray:
        out = self.ctx.zeros((len(qvectors), self.ambient_dim))
        out[:, list(self.nonpivots)] = qvectors
        return out

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(f"ambient dimensions {self.ambient_dim} and {other.ambient_dim}")
        if self.ctx != other.ctx:
            raise FieldError("subspaces over different fields")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ctx == other.ctx and self.ambient_dim == other.ambient_dim
                and self.pivots == other.pivots and bool((self.basis == other.basis).all()))

    __hash__ = None

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return other.contains_all(self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, {self.ctx})"

    def to_json(self) -> list:
        return [[list(map(int, e)) for e in row] for row in self.basis]


def kernel(M: Matrix) -> Subspace:
    ctx = M.ctx
    n = M.cols
    if M.rows == 0:
        return Subspace.full(ctx, n)
    R, piv = rref_array(ctx, M.a)
    free = [j for j in range(n) if j not in set(piv)]
    if not free:
        return Subspace.zero(ctx, n)
    vecs = ctx.zeros((len(free), n))
    for t, f in enumerate(free):
        vecs[t, f, 0] = 1
        for i, pc in enumerate(piv):
            vecs[t, pc] = (-R[i, f]) % ctx.p
    return Subspace.span(ctx, n, vecs)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    A._check(B)
    ctx = A.ctx
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(ctx, A.ambient_dim)
    # (a, b) with a.A + b.B = 0 gives a.A in both
    stacked = np.concatenate([A.basis, B.basis], axis=0)
    K = kernel(Matrix(ctx, np.ascontiguousarray(stacked.transpose(1, 0, 2))))
    if K.dim == 0:
        return Subspace.zero(ctx, A.ambient_dim)
    a_part = K.basis[:, : A.dim]
    return Subspace.span(ctx, A.ambient_dim, ctx.amatmul(a_part, A.basis))


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    A._check(B)
    return Subspace.span(A.ctx, A.ambient_dim, np.concatenate([A.basis, B.basis], axis=0))


def contains(A: Subspace, v) -> bool:
    return A.contains(v)


def _merge(S: Subspace, new: np.ndarray, newpiv: Sequence[int]) -> Subspace:
    """Combine S with rows `new` that are in RREF and reduced modulo S."""
    ctx = S.ctx
    if len(newpiv) == 0:
        return S
    B = S.basis
    if S.dim:
        B = (B - ctx.amatmul(B[:, list(newpiv)], new)) % ctx.p
    rows = np.concatenate([B, new], axis=0)
    piv = list(S.pivots) + list(newpiv)
    order = np.argsort(piv, kind="stable")
    return Subspace(ctx, S.ambient_dim, rows[order], [piv[i] for i in order])


def spin(generators, operators: Sequence[Matrix], ctx: FieldCtx | None = None,
         n: int | None = None) -> Subspace:
    """Smallest subspace containing `generators` and stable under every
    operator."""
    ops = list(operators)
    if ctx is None:
        ctx = ops[0].ctx
    if n is None:
        n = ops[0].rows
    if isinstance(generators, Subspace):
        S = generators
    else:
        gens = np.asarray(generators, dtype=np.int64) if not isinstance(generators, np.ndarray) else generators
        S = Subspace.span(ctx, n, gens.reshape(-1, n, ctx.m)) if gens.size else Subspace.zero(ctx, n)
    frontier = S.basis
    opsT = [op.a.transpose(1, 0, 2) for op in ops]
    while len(frontier) and ops:
        imgs = np.concatenate([ctx.amatmul(frontier, t) for t in opsT], axis=0)
        red = S.reduce(imgs)
        keep = red.any(axis=(1, 2))
        if not keep.any():
            break
        R, piv = rref_array(ctx, red[keep])
        new = R[: len(piv)]
        S = _merge(S, new, piv)
        frontier = new
    return S


def restrict_action(M: Matrix, U: Subspace) -> Matrix:
    """Matrix of M on U in U's echelon basis (U must be M-invariant)."""
    if U.dim == 0:
        return Matrix.zeros(M.ctx, 0, 0)
    imgs = M.apply(U.basis)
    if U.reduce(imgs).any():
        raise NotInvariantError("subspace is not invariant under the operator")
    return Matrix(M.ctx, np.ascontiguousarray(U.coords(imgs).transpose(1, 0, 2)))


def quotient_action(M: Matrix, U: Subspace, check: bool = True) -> Matrix:
    """Induced operator on F^n / U in the coordinates of U's non-pivots."""
    ctx = M.ctx
    if check and U.dim:
        if U.reduce(M.apply(U.basis)).any():
            raise NotInvariantError("subspace is not invariant under the operator")
    nonpiv = list(U.nonpivots)
    if not nonpiv:
        return Matrix.zeros(ctx, 0, 0)
    cols = np.ascontiguousarray(M.a[:, nonpiv].transpose(1, 0, 2))
    q = U.quotient_coords(cols)
    return Matrix(ctx, np.ascontiguousarray(q.transpose(1, 0, 2)))


def solve_left_coords(S: Subspace, vectors: np.ndarray) -> np.ndarray:
    """Coordinates of vectors in S, raising if some vector lies outside."""
    if S.reduce(vectors).any():
        raise ValueError("vector not in subspace")
    return S.coords(vectors)


def stack_rows(ctx: FieldCtx, n: int, vectors: Iterable[np.ndarray]) -> np.ndarray:
    vs = [np.asarray(v).reshape(-1, n, ctx.m) for v in vectors]
    if not vs:
        return ctx.zeros((0, n))
    return np.concatenate(vs, axis=0)
