"""Characters of absolutely irreducible modules and character clusters."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .gf import (MAX_EXTENSION_DEGREE, FieldCtx, FieldElem, embedding,
                 extend_field, gf, pth_root)
from .liealg import RestrictedLieAlgebra
from .linalg import Matrix, rref_array
from .meataxe import composition_factors, endomorphism_algebra_dim
from .repmod import LModule, ModuleError, extend_scalars, hom_module, tensor_power


class CharacterError(ValueError):
    pass


def semilinear_defect(M: LModule, i: int) -> Matrix:
    """rho(e_i)^p - rho(e_i^[p])."""
    L = M.algebra
    if not isinstance(L, RestrictedLieAlgebra):
        raise ModuleError("defects need a restricted Lie algebra")
    return M.actions[i] ** M.field.p - M.action_of(L.pmap_images[i])


def defect_of(M: LModule, x: np.ndarray) -> Matrix:
    """rho(x)^p - rho(x^[p]) for an arbitrary algebra vector x."""
    L = M.algebra
    return M.action_of(x) ** M.field.p - M.action_of(L.pmap(x))


@dataclass(frozen=True, eq=False)
class Character:
    """Values c(e_i) in `field`; `base` is the field of the Lie algebra."""

    field: FieldCtx
    values: tuple           # tuple of coefficient tuples
    base: FieldCtx

    @classmethod
    def from_array(cls, field: FieldCtx, arr: np.ndarray, base: FieldCtx) -> "Character":
        return cls(field, tuple(tuple(int(c) for c in row) for row in arr), base)

    @classmethod
    def zero(cls, base: FieldCtx, n: int) -> "Character":
        return cls(base, tuple((0,) * base.m for _ in range(n)), base)

    @property
    def n(self) -> int:
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64).reshape(self.n, self.field.m)

    def elems(self) -> list[FieldElem]:
        return [FieldElem(self.field, v) for v in self.values]

    def is_zero(self) -> bool:
        return not any(any(v) for v in self.values)

    def embed_into(self, target: FieldCtx) -> "Character":
        if target == self.field:
            return self
        e = embedding(self.field, target, over=self.base)
        return Character.from_array(target, e.apply_array(self.array()), self.base)

    def _aligned(self, other: "Character"):
        if self.n != other.n or self.base != other.base:
            raise CharacterError("characters of different algebras")
        F = _lcm_field([self.field, other.field])
        return self.embed_into(F), other.embed_into(F)

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        if self.n != other.n or self.base != other.base:
            return False
        a, b = self._aligned(other)
        return a.values == b.values

    def __hash__(self):
        return hash((self.n, self.base, self.is_zero()))

    def __add__(self, other: "Character") -> "Character":
        a, b = self._aligned(other)
        return Character.from_array(a.field, (a.array() + b.array()) % a.field.p, a.base)

    def __sub__(self, other: "Character") -> "Character":
        a, b = self._aligned(other)
        return Character.from_array(a.field, (a.array() - b.array()) % a.field.p, a.base)

    def __neg__(self) -> "Character":
        return Character.from_array(self.field, (-self.array()) % self.field.p, self.base)

    def scale(self, k: int) -> "Character":
        return Character.from_array(self.field, (k * self.array()) % self.field.p, self.base)

    def __call__(self, x) -> FieldElem:
        """Value at an algebra vector (c is linear over the base field)."""
        xs = np.asarray(x).reshape(self.n, self.base.m)
        F = self.field
        lift = embedding(self.base, F).apply_array(xs)
        return F.elem(F.amul(lift, self.array()).sum(axis=0) % F.p)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "values": [list(v) for v in self.values]}

    def __repr__(self):
        return f"Character({[str(e) for e in self.elems()]} over {self.field})"


def _lcm_field(fields: Iterable[FieldCtx], cap: int = MAX_EXTENSION_DEGREE) -> FieldCtx:
    fields = list(fields)
    m = 1
    for f in fields:
        m = lcm(m, f.m)
    if m > cap:
        from .gf import ExtensionCapError
        raise ExtensionCapError(f"common field of degree {m} exceeds cap {cap}")
    return gf(fields[0].p, m)


def character_of(M: LModule, check: bool = True) -> Character:
    """Character of an absolutely irreducible module."""
    if M.dim == 0:
        raise CharacterError("the zero module has no character")
    if check and endomorphism_algebra_dim(M) != 1:
        raise CharacterError("module is not absolutely irreducible")
    F = M.field
    vals = []
    for i in range(M.algebra.dim):
        sigma = semilinear_defect(M, i).is_scalar()
        if sigma is None:
            raise CharacterError(f"defect of basis vector {i} is not a scalar")
        vals.append(pth_root(sigma).coeffs)
    return Character(F, tuple(vals), M.algebra.field)


@dataclass
class CharacterCluster:
    """A deduplicated set of characters over a common field."""

    field: FieldCtx
    base: FieldCtx
    n: int
    characters: list[Character] = dc_field(default_factory=list)
    factor_dims: list[int] = dc_field(default_factory=list)
    factor_fields: list[int] = dc_field(default_factory=list)

    @classmethod
    def from_characters(cls, chars: Sequence[Character], base: FieldCtx, n: int,
                        cap: int = MAX_EXTENSION_DEGREE, **kw) -> "CharacterCluster":
        F = _lcm_field([base] + [c.field for c in chars], cap)
        seen = {}
        for c in chars:
            ce = c.embed_into(F)
            seen.setdefault(ce.values, ce)
        out = sorted(seen.values(), key=_char_sort_key)
        return cls(F, base, n, out, **kw)

    def __len__(self):
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    def __contains__(self, c: Character) -> bool:
        if c.n != self.n:
            return False
        F = _lcm_field([self.field, c.field])
        key = c.embed_into(F).values
        return any(x.embed_into(F).values == key for x in self.characters)

    def embed_into(self, F: FieldCtx) -> "CharacterCluster":
        return CharacterCluster.from_characters([c.embed_into(F) for c in self.characters],
                                                self.base, self.n, cap=F.m,
                                                factor_dims=self.factor_dims,
                                                factor_fields=self.factor_fields)

    def has_zero(self) -> bool:
        return any(c.is_zero() for c in self.characters)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(),
                "characters": [[list(v) for v in c.values] for c in self.characters]}

    def describe(self) -> list[list[str]]:
        return [[str(e) for e in c.elems()] for c in self.characters]


def _char_sort_key(c: Character):
    F = c.field
    return tuple(sum(int(x) * F.p ** k for k, x in enumerate(v)) for v in c.values)


def absolutely_irreducible_factors(M: LModule, seed: int = 0, cap: int = MAX_EXTENSION_DEGREE):
    """Composition factors of M after extending scalars far enough that each
    factor has a one-dimensional endomorphism algebra."""
    pending = composition_factors(M, seed)
    done = []
    base = M.algebra.field
    rounds = 0
    while pending:
        rounds += 1
        if rounds > 64:
            raise CharacterError("splitting escalation did not terminate")
        dims = [endomorphism_algebra_dim(f, seed) for f in pending]
        big = [f for f, d in zip(pending, dims) if d > 1]
        done += [f for f, d in zip(pending, dims) if d == 1]
        if not big:
            break
        k = lcm(*[d for d in dims if d > 1])
        nxt = []
        for f in big:
            E2, e = extend_field(f.field, k, cap, over=base)
            nxt += composition_factors(extend_scalars(f, e), seed)
        pending = nxt
    return done


def cluster(M: LModule, seed: int = 0, cap: int = MAX_EXTENSION_DEGREE) -> CharacterCluster:
    if M.dim == 0:
        raise CharacterError("cluster of the zero module is undefined")
    factors = absolutely_irreducible_factors(M, seed, cap)
    chars = [character_of(f, check=False) for f in factors]
    return CharacterCluster.from_characters(chars, M.algebra.field, M.algebra.dim, cap,
                                            factor_dims=[f.dim for f in factors],
                                            factor_fields=[f.field.m for f in factors])


# -- F_p spans -----------------------------------------------------------------

def _fp_coords(chars: Sequence[Character], F: FieldCtx) -> np.ndarray:
    """Each character as a vector over F_p of length n * F.m."""
    return np.stack([c.embed_into(F).array().reshape(-1) for c in chars]) if chars else np.zeros((0, 0), np.int64)


def fp_basis(C) -> tuple[FieldCtx, list[Character]]:
    chars = list(C)
    if not chars:
        raise CharacterError("empty character set")
    base, n = chars[0].base, chars[0].n
    F = _lcm_field([c.field for c in chars] + [base])
    X = _fp_coords(chars, F)
    Fp = gf(F.p)
    R, piv = rref_array(Fp, X[:, :, None])
    basis = [Character.from_array(F, R[i, :, 0].reshape(n, F.m), base) for i in range(len(piv))]
    return F, basis


def fp_span(C, max_size: int = 1 << 20) -> CharacterCluster:
    """All F_p-linear combinations of the characters in C."""
    chars = list(C)
    base, n = chars[0].base, chars[0].n
    F, basis = fp_basis(chars)
    p = F.p
    if p ** len(basis) > max_size:
        raise CharacterError(f"span has {p ** len(basis)} elements")
    out = []
    arrs = [b.array() for b in basis]
    zero = np.zeros((n, F.m), dtype=np.int64)
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        acc = zero.copy()
        for a, b in zip(coeffs, arrs):
            if a:
                acc += a * b
        out.append(Character.from_array(F, acc % p, base))
    return CharacterCluster.from_characters(out, base, n)


def in_fp_span(C, c: Character) -> bool:
    """Membership by F_p linear algebra (no enumeration)."""
    chars = list(C)
    F = _lcm_field([x.field for x in chars] + [c.field, c.base])
    X = _fp_coords(chars + [c], F)
    Fp = gf(F.p)
    _, piv_all = rref_array(Fp, X[:, :, None])
    _, piv = rref_array(Fp, X[:-1, :, None])
    return len(piv_all) == len(piv)


def cluster_subset(A, B) -> bool:
    """Every character of A lies in the set B (after a common embedding)."""
    A = list(A)
    B = list(B)
    if not A:
        return True
    if not B:
        return False
    F = _lcm_field([c.field for c in A + B] + [A[0].base])
    keys = {b.embed_into(F).values for b in B}
    return all(a.embed_into(F).values in keys for a in A)


def sums_of(C, r: int) -> CharacterCluster:
    """{c_1 + ... + c_r : c_i in C}."""
    chars = list(C)
    base, n = chars[0].base, chars[0].n
    F = _lcm_field([c.field for c in chars] + [base])
    arrs = {c.embed_into(F).values: c.embed_into(F).array() for c in chars}
    cur = dict(arrs)
    for _ in range(r - 1):
        nxt = {}
        for a in cur.values():
            for b in arrs.values():
                s = (a + b) % F.p
                nxt[tuple(tuple(int(x) for x in row) for row in s)] = s
        cur = nxt
    return CharacterCluster.from_characters([Character.from_array(F, a, base) for a in cur.values()], base, n)


def differences(A, B) -> CharacterCluster:
    """{d - c : c in A, d in B}."""
    A, B = list(A), list(B)
    out = [d - c for c in A for d in B]
    return CharacterCluster.from_characters(out, A[0].base, A[0].n)


def check_tensor_power_law(V: LModule, r: int, seed: int = 0) -> dict:
    lhs = cluster(tensor_power(V, r), seed)
    rhs = sums_of(cluster(V, seed), r)
    holds = cluster_subset(lhs, rhs) and cluster_subset(rhs, lhs)
    return {"law": "tensor_power", "r": r, "holds": holds,
            "lhs": lhs.describe(), "rhs": rhs.describe()}


def check_hom_law(V: LModule, W: LModule, seed: int = 0) -> dict:
    cV, cW = cluster(V, seed), cluster(W, seed)
    cH = cluster(hom_module(V, W), seed)
    common = [c for c in cV if c in cW]
    zero_ok = (not common) or cH.has_zero()
    diff_ok = cluster_subset(cH, differences(cV, cW))
    return {"law": "hom", "holds": zero_ok and diff_ok, "zero_in_hom": cH.has_zero(),
            "common": len(common), "hom_within_differences": diff_ok,
            "hom_cluster": cH.describe()}
