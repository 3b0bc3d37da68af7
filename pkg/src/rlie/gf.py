"""Finite fields GF(p^m) realised as F_p[t]/(f) for a monic irreducible f.

Elements are dense little-endian coefficient vectors in the generator t.
Bulk arithmetic works on integer arrays whose trailing axis has length m,
so a matrix over GF(p^m) is an int64 array of shape (rows, cols, m).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator, Sequence

import numpy as np

MAX_EXTENSION_DEGREE = 12


class FieldError(ValueError):
    pass


class ExtensionCapError(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class FieldCtx:
    """The field F_p[t]/(modulus).

    `modulus` is the full monic coefficient list, little-endian, so a
    degree-m field stores m + 1 numbers with modulus[m] == 1.
    """

    __slots__ = ("p", "m", "modulus", "order", "_red", "_key")

    def __init__(self, p: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        mod = tuple(int(c) % p for c in modulus)
        while mod and mod[-1] == 0:
            mod = mod[:-1]
        if len(mod) < 2 or mod[-1] != 1:
            raise FieldError(f"modulus {list(modulus)} must be monic of degree >= 1")
        if len(mod) > 2 and not _modulus_ok(p, mod):
            raise FieldError(f"modulus {list(mod)} is reducible over F_{p}")
        self.p = p
        self.m = len(mod) - 1
        self.modulus = mod
        self.order = p ** self.m
        self._key = (p, mod)
        self._red = _reduction_matrix(p, mod)

    # -- identity ----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> "FieldCtx":
        ctx = cls(int(d["p"]), d["modulus"])
        if "m" in d and int(d["m"]) != ctx.m:
            raise FieldError("field record: m disagrees with modulus degree")
        return ctx

    # -- scalars -----------------------------------------------------------
    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise FieldError(f"element of {value.ctx} used in {self}")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElem(self, (int(value) % self.p,) + (0,) * (self.m - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.m:
            raise FieldError(f"{len(coeffs)} coefficients for a degree-{self.m} field")
        coeffs += [0] * (self.m - len(coeffs))
        return FieldElem(self, tuple(coeffs))

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, (0,) * self.m)

    @property
    def one(self) -> "FieldElem":
        return self(1)

    @property
    def gen(self) -> "FieldElem":
        """The class of t (for m == 1 this is -modulus[0])."""
        if self.m == 1:
            return self(-self.modulus[0])
        return self([0, 1])

    def from_code(self, code: int) -> "FieldElem":
        coeffs = []
        for _ in range(self.m):
            code, r = divmod(code, self.p)
            coeffs.append(r)
        return FieldElem(self, tuple(coeffs))

    def elements(self) -> Iterator["FieldElem"]:
        for code in range(self.order):
            yield self.from_code(code)

    def random_element(self, rng: random.Random) -> "FieldElem":
        return self.from_code(rng.randrange(self.order))

    # tuple-level kernels used by FieldElem
    def _mul(self, a: tuple, b: tuple) -> tuple:
        p = self.p
        if self.m == 1:
            return ((a[0] * b[0]) % p,)
        m = self.m
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = np.asarray(conv, dtype=np.int64) @ self._red
        return tuple(int(c) for c in out % p)

    def _pow(self, a: tuple, e: int) -> tuple:
        if e < 0:
            a = self._inv(a)
            e = -e
        result = (1,) + (0,) * (self.m - 1)
        base = a
        while e:
            if e & 1:
                result = self._mul(result, base)
            e >>= 1
            if e:
                base = self._mul(base, base)
        return result

    def _inv(self, a: tuple) -> tuple:
        if not any(a):
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.m == 1:
            return (pow(a[0], self.p - 2, self.p),)
        return self._pow(a, self.order - 2)

    # -- array kernels -----------------------------------------------------
    def asarray(self, values) -> np.ndarray:
        """Coerce nested lists of ints or FieldElems to an int64 array with
        trailing axis m. Int leaves are prime-field constants."""
        arr = _to_array(values, self)
        return arr % self.p

    def zeros(self, shape) -> np.ndarray:
        if isinstance(shape, int):
            shape = (shape,)
        return np.zeros(tuple(shape) + (self.m,), dtype=np.int64)

    def scalar_array(self, a) -> np.ndarray:
        return np.asarray(self(a).coeffs, dtype=np.int64)

    def amul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product with numpy broadcasting over leading axes."""
        p = self.p
        if self.m == 1:
            return (a * b) % p
        m = self.m
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        conv = np.zeros(shape + (2 * m - 1,), dtype=np.int64)
        for i in range(m):
            conv[..., i:i + m] += a[..., i:i + 1] * b
        return (conv @ self._red) % p

    def amatmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product of (r, l, m) and (l, c, m) arrays."""
        p = self.p
        if self.m == 1:
            prod = _float_matmul(a[..., 0], b[..., 0])
            return (prod % p)[..., None]
        m = self.m
        af = [a[..., i].astype(np.float64) for i in range(m)]
        bf = [b[..., j].astype(np.float64) for j in range(m)]
        conv = np.zeros((a.shape[0], b.shape[1], 2 * m - 1))
        for i in range(m):
            for j in range(m):
                conv[..., i + j] += af[i] @ bf[j]
        conv = (np.rint(conv).astype(np.int64)) % p
        return (conv @ self._red) % p

    def ainv_scalar(self, c: np.ndarray) -> np.ndarray:
        return np.asarray(self._inv(tuple(int(x) for x in c)), dtype=np.int64)

    def apow_scalar(self, c: np.ndarray, e: int) -> np.ndarray:
        return np.asarray(self._pow(tuple(int(x) for x in c), e), dtype=np.int64)

    def elem(self, c: np.ndarray) -> "FieldElem":
        return FieldElem(self, tuple(int(x) for x in c))

    def code_of(self, c) -> int:
        code = 0
        for x in reversed(list(c)):
            code = code * self.p + int(x)
        return code


def _float_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # entries are < p <= small, so float64 products are exact up to ~2^53
    return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)


def _reduction_matrix(p: int, mod: tuple) -> np.ndarray:
    m = len(mod) - 1
    rows = []
    cur = [0] * m
    cur[0] = 1
    for k in range(2 * m - 1):
        if k > 0:
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * mod[i]) % p for i, c in enumerate(cur)]
        rows.append(list(cur))
    return np.asarray(rows, dtype=np.int64).reshape(2 * m - 1, m)


def _to_array(values, ctx: FieldCtx) -> np.ndarray:
    if isinstance(values, np.ndarray):
        if values.ndim >= 1 and values.shape[-1] == ctx.m and values.dtype != object:
            return values.astype(np.int64)
        raise FieldError("ambiguous ndarray; pass nested lists or an array with trailing axis m")
    if isinstance(values, FieldElem):
        return np.asarray(ctx(values).coeffs, dtype=np.int64)
    if isinstance(values, (int, np.integer)):
        return np.asarray(ctx(values).coeffs, dtype=np.int64)
    values = list(values)
    if not values:
        return np.zeros((0, ctx.m), dtype=np.int64)
    return np.stack([_to_array(v, ctx) for v in values])


@dataclass(frozen=True, slots=True)
class FieldElem:
    ctx: FieldCtx
    coeffs: tuple

    def _coerce(self, other) -> tuple:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise FieldError(f"mixing elements of {self.ctx} and {other.ctx}")
            return other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.ctx(int(other)).coeffs
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((x + y) % p for x, y in zip(self.coeffs, b)))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((x - y) % p for x, y in zip(self.coeffs, b)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((-x) % p for x in self.coeffs))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.ctx, self.ctx._mul(self.coeffs, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.ctx, self.ctx._mul(self.coeffs, self.ctx._inv(b)))

    def __rtruediv__(self, other):
        return self.ctx(other) / self

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx._pow(self.coeffs, int(e)))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx._inv(self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.coeffs == self.ctx(int(other)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __int__(self):
        return self.code

    @property
    def code(self) -> int:
        return self.ctx.code_of(self.coeffs)

    def __repr__(self):
        if self.ctx.m == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                coef = str(c) if (c != 1 or i == 0) else ""
                terms.append(coef + ("*" if coef and mono else "") + mono)
        return "+".join(reversed(terms)) or "0"

    def to_json(self) -> list:
        return list(self.coeffs)


def arithmetic(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if not isinstance(a, FieldElem) or not isinstance(b, FieldElem):
        raise TypeError("arithmetic expects two FieldElem values")
    if a.ctx != b.ctx:
        raise FieldError(f"context mismatch: {a.ctx} vs {b.ctx}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def frobenius(a: FieldElem) -> FieldElem:
    return a ** a.ctx.p


def pth_root(a: FieldElem) -> FieldElem:
    """The unique b with b^p == a, namely a^(p^(m-1))."""
    return a ** (a.ctx.p ** (a.ctx.m - 1))


# -- field construction ----------------------------------------------------

@lru_cache(maxsize=None)
def prime_field(p: int) -> FieldCtx:
    return FieldCtx(p, (0, 1))


@lru_cache(maxsize=None)
@lru_cache(maxsize=None)
def gf(p: int, m: int = 1) -> FieldCtx:
    """GF(p^m) with the lexicographically first monic irreducible modulus.

    Candidates t^m + c_{m-1} t^{m-1} + ... + c_0 are ordered by the integer
    sum(c_i p^i), smallest first.
    """
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    if m == 1:
        return prime_field(p)
    return FieldCtx(p, first_irreducible(p, m))


@lru_cache(maxsize=None)
def _modulus_ok(p: int, mod: tuple) -> bool:
    from . import poly

    base = prime_field(p)
    return poly.is_irreducible(base, base.asarray(list(mod)))


@lru_cache(maxsize=None)
def first_irreducible(p: int, m: int) -> tuple:
    from . import poly

    base = prime_field(p)
    for code in range(p ** m):
        coeffs = []
        c = code
        for _ in range(m):
            c, r = divmod(c, p)
            coeffs.append(r)
        if m > 1 and coeffs[0] == 0:
            continue
        f = base.asarray(coeffs + [1])
        if poly.is_irreducible(base, f):
            return tuple(coeffs + [1])
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")  # unreachable


def is_irreducible_bruteforce(p: int, modulus: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    from . import poly

    base = prime_field(p)
    f = poly.trim(base.asarray(list(modulus)))
    n = poly.deg(f)
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for code in range(p ** d):
            coeffs = []
            c = code
            for _ in range(d):
                c, r = divmod(c, p)
                coeffs.append(r)
            g = base.asarray(coeffs + [1])
            _, r = poly.divmod_(base, f, g)
            if len(r) == 0:
                return False
    return True


@dataclass(frozen=True)
class Embedding:
    """Field homomorphism source -> target determined by the image of t."""

    source: FieldCtx
    target: FieldCtx
    image_of_generator: FieldElem

    def __post_init__(self):
        if self.target.p != self.source.p or self.target.m % self.source.m:
            raise FieldError(f"{self.source} does not embed in {self.target}")
        if self.image_of_generator.ctx != self.target:
            raise FieldError("generator image must live in the target field")

    @property
    def power_matrix(self) -> np.ndarray:
        return _power_matrix(self.source, self.target, self.image_of_generator.coeffs)

    def __call__(self, a: FieldElem) -> FieldElem:
        return embed(self, a)

    def apply_array(self, arr: np.ndarray) -> np.ndarray:
        """Embed every scalar of an array with trailing axis source.m."""
        if arr.shape[-1] != self.source.m:
            raise FieldError("array trailing axis does not match the source field")
        out = np.tensordot(arr, self.power_matrix, axes=([-1], [0]))
        return out.astype(np.int64) % self.target.p

    def then(self, other: "Embedding") -> "Embedding":
        """The composite other o self."""
        if other.source != self.target:
            raise FieldError("embeddings do not compose")
        return Embedding(self.source, other.target, other(self.image_of_generator))

    def is_identity(self) -> bool:
        return self.source == self.target and self.image_of_generator == self.source.gen

    def check(self) -> bool:
        """The generator image is a root of the source modulus."""
        x = self.image_of_generator
        acc = self.target.zero
        for c in reversed(self.source.modulus):
            acc = acc * x + c
        return not acc


@lru_cache(maxsize=None)
def _power_matrix(src: FieldCtx, tgt: FieldCtx, img: tuple) -> np.ndarray:
    rows = []
    cur = tgt.one
    g = FieldElem(tgt, img)
    for _ in range(src.m):
        rows.append(cur.coeffs)
        cur = cur * g
    return np.asarray(rows, dtype=np.int64)


def embed(e: Embedding, a: FieldElem) -> FieldElem:
    if a.ctx != e.source:
        raise FieldError(f"element of {a.ctx} given to an embedding from {e.source}")
    out = np.asarray(a.coeffs, dtype=np.int64) @ e.power_matrix
    return FieldElem(e.target, tuple(int(c) for c in out % e.target.p))


def identity_embedding(ctx: FieldCtx) -> Embedding:
    return Embedding(ctx, ctx, ctx.gen)


_EMBED_CACHE: dict = {}


def embedding(source: FieldCtx, target: FieldCtx, over: FieldCtx | None = None) -> Embedding:
    """Canonical embedding source -> target.

    The generator goes to the smallest root (by code) of source.modulus in
    target. With `over` given, only roots compatible with the canonical
    maps over -> source and over -> target are admissible, so that scalars
    coming from a common base field stay consistent.
    """
    key = (source, target, over)
    if key in _EMBED_CACHE:
        return _EMBED_CACHE[key]
    if source.p != target.p or target.m % source.m:
        raise FieldError(f"{source} does not embed in {target}")
    if source == target:
        e = identity_embedding(source)
    else:
        from . import poly

        f = target.asarray(list(source.modulus))
        roots = poly.roots(target, f)
        if over is not None and over.m > 1:
            lo_s = embedding(over, source)
            lo_t = embedding(over, target)
            want = lo_t.image_of_generator
            ok = []
            for r in roots:
                cand = Embedding(source, target, r)
                if cand(lo_s.image_of_generator) == want:
                    ok.append(r)
            roots = ok
        if not roots:
            raise FieldError(f"no admissible root of the {source} modulus in {target}")
        e = Embedding(source, target, min(roots, key=lambda r: r.code))
    _EMBED_CACHE[key] = e
    return e


def extend_field(ctx: FieldCtx, k: int, cap: int = MAX_EXTENSION_DEGREE,
                 over: FieldCtx | None = None) -> tuple[FieldCtx, Embedding]:
    if k < 1:
        raise FieldError("degree multiplier must be >= 1")
    total = ctx.m * k
    if total > cap:
        raise ExtensionCapError(f"extension degree {total} over F_{ctx.p} exceeds cap {cap}")
    if k == 1:
        return ctx, identity_embedding(ctx)
    big = gf(ctx.p, total)
    return big, embedding(ctx, big, over)


def common_field(fields: Sequence[FieldCtx], cap: int = MAX_EXTENSION_DEGREE) -> FieldCtx:
    fields = list(fields)
    p = fields[0].p
    m = 1
    for f in fields:
        if f.p != p:
            raise FieldError("fields of different characteristic")
        m = m * f.m // gcd(m, f.m)
    if m > cap:
        raise ExtensionCapError(f"common extension degree {m} exceeds cap {cap}")
    if len(fields) == 1 or all(f == fields[0] for f in fields):
        return fields[0]
    return gf(p, m)
