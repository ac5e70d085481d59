"""Spans, product spans, translates and subspace enumeration."""
import random

import pytest

from conftest import ff_all_subspace_sets, ff_dim, ff_span_set
from spanbound import SetInstance, Subspace, backend_create, inverse_set, product_span, span_of, translate
from spanbound.errors import BackendMismatch, EmptySet, NotAUnit
from spanbound.spans import (
    count_subspaces,
    count_subspaces_containing_one,
    gaussian_binomial,
    iter_subspaces,
    iter_subspaces_containing_one,
    progressive_sum_decomposition,
    random_subspace,
)


def S(b, *items):
    return SetInstance.of(b, list(items))


def test_span_of_examples(gf16):
    # [DERIVED] 1 + x is a combination of 1 and x
    A = S(gf16, "1", "x", "x+1")
    assert span_of(A).dim == 2 == ff_dim(gf16, A.values)
    for spec in ("FF:2^4", "QUAT", "RF:QQ", "GA:GF(5):S3", "EXT:QQ:y^3-2"):
        b = backend_create(spec)
        assert span_of(S(b, "1")).dim == 1


def test_span_rf_shifted_lines():
    # [PAPER] dim span{t-1, t-2, t-3} = 2
    b = backend_create("RF:QQ")
    A = S(b, "t-1", "t-2", "t-3")
    assert span_of(A).dim == 2
    assert all(span_of(A).contains(v) for v in A.values)


def test_span_empty():
    with pytest.raises(EmptySet):
        span_of(SetInstance(backend_create("QUAT"), ()))


def test_product_span_examples(gf16, quat):
    # [DERIVED] {1, x, x^2}
    A = S(gf16, "1", "x")
    assert product_span(A, A).dim == 3
    assert product_span(A, A) == span_of(S(gf16, "1", "x", "x^2"))
    # [DERIVED] 1, i, j, k independent
    assert product_span(S(quat, "1", "i"), S(quat, "1", "j")).dim == 4
    B = S(gf16, "x^3", "x^7+1", "x")
    assert product_span(S(gf16, "1"), B) == span_of(B)


def test_product_span_mismatch(gf16, quat):
    with pytest.raises(BackendMismatch):
        product_span(S(gf16, "1"), S(quat, "1"))


def test_inverse_set_examples(quat):
    rf = backend_create("RF:QQ")
    # [PAPER] the inverses of t-1, t-2, t-3 are independent
    assert span_of(inverse_set(S(rf, "t-1", "t-2", "t-3"))).dim == 3
    assert inverse_set(S(rf, "1")).values == S(rf, "1").values
    # [DERIVED] i^-1 = -i, j^-1 = -j
    inv = inverse_set(S(quat, "i", "j"))
    assert [quat.format(v) for v in inv.values] == ["-i", "-j"]
    assert span_of(inv) == span_of(S(quat, "i", "j"))
    g = backend_create("GA:GF(2):Z/2:modular")
    with pytest.raises(NotAUnit):
        inverse_set(S(g, "e[0]+e[1]"))


def test_translate_examples(gf16, quat):
    k = Subspace.base_field(gf16)
    x = gf16("x")
    assert translate(x, k).dim == 1
    # [DERIVED]
    assert translate(x, span_of(S(gf16, "1", "x"))) == span_of(S(gf16, "x", "x^2"))
    assert translate(quat("i"), span_of(S(quat, "1", "j"))) == span_of(S(quat, "i", "k"))
    assert translate(quat("i"), span_of(S(quat, "1", "j")), "right") == span_of(S(quat, "i", "-k"))


def test_progressive_sum_decomposition(gf16):
    U = span_of(S(gf16, "1", "x"))
    assert progressive_sum_decomposition([gf16("x^3")], U) == [U]
    parts = progressive_sum_decomposition([gf16(1), gf16(1)], U)
    assert parts[0] == U and parts[1].dim == 0
    # [DERIVED] U + xU = span{1, x, x^2}
    parts = progressive_sum_decomposition([gf16(1), gf16("x")], U)
    assert [p.dim for p in parts] == [2, 1]


def test_subspace_equality_is_canonical():
    b = backend_create("RF:QQ")
    V1 = span_of(S(b, "t-1", "t-2"))
    V2 = span_of(S(b, "1", "t"))
    assert V1 == V2 and hash(V1) == hash(V2)
    g = backend_create("GA:GF(5):Z/4")
    W1 = span_of(S(g, "e[0]+e[1]", "e[1]"))
    W2 = span_of(S(g, "e[0]", "e[1]"))
    assert W1 == W2 and hash(W1) == hash(W2)


def test_sum_meet_dimension_formula(gf64):
    rng = random.Random(3)
    K = Subspace.whole(gf64)
    for _ in range(50):
        U, V = random_subspace(K, rng), random_subspace(K, rng)
        assert (U + V).dim + (U & V).dim == U.dim + V.dim
        assert U.contains_subspace(U & V) and (U + V).contains_subspace(V)


# -- enumeration -----------------------------------------------------------------


def test_gaussian_binomials():
    assert gaussian_binomial(4, 2, 2) == 35
    assert count_subspaces(6, 2) == 2824  # nonzero subspaces of GF(2)^6
    assert count_subspaces_containing_one(6, 2) == 374


def test_enumeration_matches_bruteforce(gf16):
    # [DERIVED] the closure-based oracle finds every subspace of GF(16)/GF(2)
    K = Subspace.whole(gf16)
    ours = {frozenset(ff_span_set(gf16, W.basis_values())) for W in iter_subspaces(K)}
    oracle = ff_all_subspace_sets(gf16, K.basis_values())
    assert ours == oracle
    assert len(ours) == count_subspaces(4, 2)
    with_one = list(iter_subspaces_containing_one(K))
    assert len(with_one) == count_subspaces_containing_one(4, 2) == sum(1 for W in oracle if 1 in W)
    assert len(set(with_one)) == len(with_one)


def test_enumeration_inside_subspace(gf64):
    V = span_of(S(gf64, "1", "x", "x^3"))
    subs = list(iter_subspaces(V, [2]))
    assert len(subs) == gaussian_binomial(3, 2, 2) == 7
    assert all(V.contains_subspace(W) and W.dim == 2 for W in subs)
