"""Property-based checks of the algebraic invariants."""
import random
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from spanbound import (
    ConnectivityContext,
    SetInstance,
    Subspace,
    backend_create,
    connectivity_cost,
    division_closure,
    kneser_check,
    plunnecke_powers,
    product_of_subspaces,
    rho_minimize,
    sample_element,
    span_of,
    stabilizer,
    translate,
)
from spanbound.fields import PrimeField, RationalField
from spanbound.linalg import rank, rref, subspace_intersect, subspace_sum, transpose
from spanbound.spans import random_subspace

SPECS = ["FF:2^4", "FF:3^2", "QUAT", "RF:GF(3)", "EXT:QQ:y^2-2", "EXT:GF(2)(s):y^2-s", "GA:GF(5):S3", "GA:QQ:Z"]
SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

seeds = st.integers(0, 2**32)


def elems(spec, seed, n):
    b = backend_create(spec)
    return b, [sample_element(b, seed * 7 + i, 2) for i in range(n)]


@SETTINGS
@given(st.sampled_from(SPECS), seeds)
def test_ring_axioms(spec, seed):
    b, (x, y, z) = elems(spec, seed, 3)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z
    assert x + y == y + x
    assert x * b(1) == x == b(1) * x
    assert x - x == b(0)
    if b.is_commutative:
        assert x * y == y * x


@SETTINGS
@given(st.sampled_from(SPECS), seeds, st.integers(-5, 5))
def test_scalars_are_central(spec, seed, c):
    b, (x,) = elems(spec, seed, 1)
    s = b(c)
    assert s * x == x * s


@SETTINGS
@given(st.sampled_from(SPECS), seeds)
def test_inverses(spec, seed):
    b, (x,) = elems(spec, seed, 1)
    if x.is_zero() or not x.is_unit():
        return
    if b.kind == "GA" and len(x.value) > 1 and b.dimension is None:
        return
    inv = x.inverse()
    assert x * inv == b(1) == inv * x


@SETTINGS
@given(st.sampled_from(SPECS), seeds)
def test_format_parse_round_trip(spec, seed):
    b, (x,) = elems(spec, seed, 1)
    assert b(str(x)) == x
    assert str(b(str(x))) == str(x)


@SETTINGS
@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
def test_group_algebra_law(g, h, k):
    b = backend_create("GA:GF(5):S3")
    G = b.group
    e = lambda i: b(f"e[{i}]")
    assert e(g) * e(h) == e(G.mul(g, h))
    assert (e(g) * e(h)) * e(k) == e(g) * (e(h) * e(k))


matrices = st.lists(st.lists(st.integers(0, 4), min_size=4, max_size=4), min_size=1, max_size=5)


@SETTINGS
@given(matrices)
def test_rref_idempotent_and_rank_of_transpose(m):
    F = PrimeField(5)
    rows = [tuple(r) for r in m]
    r1, rk, _ = rref(rows, F)
    r2, rk2, _ = rref(r1, F)
    assert r1 == r2 and rk == rk2
    assert rank(rows, F) == rank(transpose(rows, 4), F)


@SETTINGS
@given(matrices, matrices)
def test_dimension_formula_rationals(m1, m2):
    F = RationalField()
    U = [tuple(Fraction(v - 2) for v in r) for r in m1]
    W = [tuple(Fraction(v - 2) for v in r) for r in m2]
    assert len(subspace_sum(U, W, F)) + len(subspace_intersect(U, W, F)) == rank(U, F) + rank(W, F)


@SETTINGS
@given(st.sampled_from(SPECS), seeds, st.integers(1, 4))
def test_span_invariants(spec, seed, n):
    b, vals = elems(spec, seed, n)
    vals = [v for v in vals if not v.is_zero()] or [b(1)]
    A = SetInstance.of(b, [str(v) for v in vals])
    V = span_of(A)
    assert V.dim <= len(A)
    assert all(V.contains(v.value) for v in vals)
    # adding a combination does not change the span
    extra = vals[0] + vals[-1]
    if not extra.is_zero():
        assert span_of(SetInstance.of(b, [str(v) for v in vals] + [str(extra)])) == V


@SETTINGS
@given(st.sampled_from(["FF:2^6", "FF:3^2", "FF:2^4"]), seeds)
def test_stabilizer_properties(spec, seed):
    b = backend_create(spec)
    rng = random.Random(seed)
    V = random_subspace(Subspace.whole(b), rng)
    if not V.dim:
        return
    st_ = stabilizer(V)
    H = st_.H
    assert b.dimension % H.dim == 0 and V.dim % H.dim == 0
    assert H.contains(b.one) and product_of_subspaces(H, H) == H
    assert product_of_subspaces(H, V) == V
    # maximality: no element outside H stabilizes V
    for _ in range(10):
        h = b.sample(rng)
        if not H.contains(h):
            assert not V.contains_subspace(translate(h, V))


@SETTINGS
@given(st.sampled_from(["FF:2^6", "QUAT", "GA:GF(5):Z/4"]), seeds)
def test_division_closure_sound(spec, seed):
    b, vals = elems(spec, seed, 2)
    vals = [v for v in vals if not v.is_zero()] or [b(1)]
    D = division_closure(SetInstance.of(b, [str(v) for v in vals]))
    assert D.contains(b.one) and all(D.contains(v.value) for v in vals)
    assert product_of_subspaces(D, D) == D


@SETTINGS
@given(seeds)
def test_kneser_translate_invariance(seed):
    b = backend_create("FF:2^6")
    rng = random.Random(seed)
    A = SetInstance(b, tuple(rng.randrange(1, 64) for _ in range(rng.randint(1, 3))))
    B = SetInstance(b, tuple(rng.randrange(1, 64) for _ in range(rng.randint(1, 3))))
    x = rng.randrange(1, 64)
    xA = SetInstance(b, tuple(b.mul(x, a) for a in A.values))
    v1, v2 = kneser_check(A, B), kneser_check(xA, B)
    assert (v1.dim_product, v1.dim_H, v1.slack) == (v2.dim_product, v2.dim_H, v2.slack)
    assert v1.holds


@SETTINGS
@given(seeds)
def test_plunnecke_first_power_is_rho(seed):
    b = backend_create("FF:2^6")
    rng = random.Random(seed)
    A = SetInstance(b, tuple(rng.randrange(1, 64) for _ in range(rng.randint(1, 3))))
    B = SetInstance(b, tuple(rng.randrange(1, 64) for _ in range(rng.randint(1, 2))))
    rep = plunnecke_powers(A, B, 1)
    rho = rho_minimize(A, B)
    row = rep.quantities["powers"][0]
    assert Fraction(row["dim_XBn"], rep.quantities["dim_X"]) == rho.rho


@SETTINGS
@given(seeds, st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]))
def test_connectivity_translation_invariance(seed, lam):
    b = backend_create("FF:2^6")
    rng = random.Random(seed)
    K = Subspace.whole(b)
    V, W = random_subspace(K, rng), random_subspace(K, rng)
    if not V.dim or not W.dim:
        return
    ctx = ConnectivityContext(V, lam)
    x = rng.randrange(1, 64)
    c = connectivity_cost(W, ctx)
    assert connectivity_cost(translate(x, W), ctx) == c
    assert c >= (1 - lam) * W.dim
