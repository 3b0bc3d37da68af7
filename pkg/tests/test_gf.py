import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlie.gf import (ExtensionCapError, FieldCtx, FieldError, embedding, extend_field,
                     first_irreducible, frobenius, gf, pth_root, common_field)


# -- independent oracle: plain integer-list polynomials over F_p ---------------

def _polymod(a, b, p):
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        s = len(a) - len(b)
        for i, bi in enumerate(b):
            a[s + i] = (a[s + i] - c * bi) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def oracle_irreducible(p, f):
    """Trial division by every monic polynomial of degree 1 .. deg f // 2."""
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not _polymod(f, list(tail) + [1], p):
                return False
    return True


def oracle_first_irreducible(p, m):
    for code in range(p ** m):
        tail = [(code // p ** i) % p for i in range(m)]
        f = tail + [1]
        if oracle_irreducible(p, f):
            return tuple(f)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 3), (2, 6), (3, 4)])
def test_modulus_is_lexicographically_first(p, m):
    assert first_irreducible(p, m) == oracle_first_irreducible(p, m)


def test_frozen_moduli():
    # values obtained from the trial-division oracle above
    assert gf(2, 2).modulus == (1, 1, 1)
    assert gf(3, 2).modulus == (1, 0, 1)
    assert gf(5, 2).modulus == (2, 0, 1)
    assert gf(2, 3).modulus == (1, 1, 0, 1)


def test_small_arithmetic():
    F9 = gf(3, 2)
    t = F9.gen
    assert t * t == F9(2)
    assert frobenius(t) == F9([0, 2])
    F4 = gf(2, 2)
    assert pth_root(F4.gen) == F4([1, 1])
    assert F4.gen ** 3 == F4.one


def test_bad_inputs():
    with pytest.raises(FieldError):
        FieldCtx(4, [1, 1])
    with pytest.raises(FieldError):
        FieldCtx(3, [0, 0, 1])  # reducible
    with pytest.raises(ExtensionCapError):
        extend_field(gf(2, 4), 4)
    with pytest.raises(FieldError):
        gf(3)(1) + gf(2)(1)


def test_elements_and_codes():
    F = gf(3, 2)
    els = list(F.elements())
    assert len(els) == 9 and len(set(els)) == 9
    assert [e.code for e in els] == list(range(9))


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 1), (5, 2)])
def test_multiplicative_group_is_cyclic_of_right_order(p, m):
    F = gf(p, m)
    for a in F.elements():
        if a:
            assert a ** (F.order - 1) == F.one
            assert a * a.inverse() == F.one


FIELDS = [(2, 1), (2, 3), (3, 2), (5, 2), (2, 4)]


@st.composite
def field_triples(draw):
    p, m = draw(st.sampled_from(FIELDS))
    F = gf(p, m)
    codes = st.integers(0, F.order - 1)
    return F, F.from_code(draw(codes)), F.from_code(draw(codes)), F.from_code(draw(codes))


@given(field_triples())
def test_field_axioms(t):
    F, a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == F.zero
    if b:
        assert (a / b) * b == a


@given(field_triples())
def test_frobenius_is_a_ring_map(t):
    F, a, b, _ = t
    assert frobenius(a + b) == frobenius(a) + frobenius(b)
    assert frobenius(a * b) == frobenius(a) * frobenius(b)
    assert pth_root(frobenius(a)) == a


@given(field_triples())
def test_array_kernels_match_scalar_ops(t):
    F, a, b, c = t
    A = np.asarray([a.coeffs, b.coeffs])
    B = np.asarray([c.coeffs, a.coeffs])
    prod = F.amul(A, B)
    assert F.elem(prod[0]) == a * c and F.elem(prod[1]) == b * a


def test_amatmul_matches_naive():
    F = gf(3, 2)
    rng = random.Random(3)
    A = [[F.random_element(rng) for _ in range(3)] for _ in range(2)]
    B = [[F.random_element(rng) for _ in range(4)] for _ in range(3)]
    arrA = np.asarray([[e.coeffs for e in r] for r in A])
    arrB = np.asarray([[e.coeffs for e in r] for r in B])
    got = F.amatmul(arrA, arrB)
    for i in range(2):
        for j in range(4):
            acc = F.zero
            for k in range(3):
                acc = acc + A[i][k] * B[k][j]
            assert F.elem(got[i, j]) == acc


@pytest.mark.parametrize("p,m1,m2", [(2, 1, 4), (2, 2, 4), (3, 2, 4), (2, 3, 6), (5, 1, 2)])
def test_embedding_is_a_homomorphism(p, m1, m2):
    e = embedding(gf(p, m1), gf(p, m2))
    assert e.check()
    src = list(gf(p, m1).elements())
    for a in src:
        for b in src[:: max(1, len(src) // 16)]:
            assert e(a + b) == e(a) + e(b)
            assert e(a * b) == e(a) * e(b)
    assert len({e(a) for a in src}) == len(src)


def test_embedding_picks_smallest_root():
    F4, F16 = gf(2, 2), gf(2, 4)
    e = embedding(F4, F16)
    roots = [r for r in F16.elements() if r * r + r + 1 == F16.zero]
    assert len(roots) == 2
    assert e.image_of_generator == min(roots, key=lambda r: r.code)
    assert embedding(gf(2), F4)(gf(2).one) == F4.one


def test_embeddings_over_a_common_base_are_compatible():
    F4, F16, F64, F4096 = gf(2, 2), gf(2, 4), gf(2, 6), gf(2, 12)
    a = embedding(F16, F4096, over=F4)
    b = embedding(F4, F16)
    c = embedding(F4, F4096)
    assert b.then(a).image_of_generator == c.image_of_generator
    d = embedding(F64, F4096, over=F4)
    assert embedding(F4, F64).then(d).image_of_generator == c.image_of_generator


def test_common_field():
    assert common_field([gf(2, 2), gf(2, 3)]) == gf(2, 6)
    with pytest.raises(ExtensionCapError):
        common_field([gf(2, 5), gf(2, 7)])


def test_json_roundtrip():
    F = gf(3, 2)
    assert FieldCtx.from_json(F.to_json()) == F
    a = F([1, 2])
    assert F(a.to_json()) == a
