"""Shared brute-force oracles.

The helpers here avoid the library's linear algebra: spans over GF(p) are
enumerated as explicit sets of field elements, and finite field products are
recomputed by schoolbook polynomial multiplication.
"""
import itertools
import math

import pytest

from spanbound import backend_create


def poly_mulmod(a, b, modulus, p):
    """Product of coefficient lists (low degree first) reduced by a monic modulus."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    n = len(modulus) - 1
    for d in range(len(out) - 1, n - 1, -1):
        c = out[d]
        if c:
            for i in range(n + 1):
                out[d - n + i] = (out[d - n + i] - c * modulus[i]) % p
    out = out[:n] + [0] * max(0, n - len(out))
    return out


def ff_span_set(b, values):
    """All GF(p)-combinations of ``values`` in a finite field backend."""
    p = b.p
    elems = {0}
    for v in values:
        elems = {b.add(e, b.mul(b.scalar(c), v)) for e in elems for c in range(p)}
    return frozenset(elems)


def ff_dim(b, values) -> int:
    n = len(ff_span_set(b, values))
    return round(math.log(n, b.p))


def ff_stabilizer_set(b, values):
    """{h in K : h * span(values) <= span(values)} by trying every h."""
    S = ff_span_set(b, values)
    return frozenset(h for h in range(b.q) if all(b.mul(h, v) in S for v in values))


def ff_all_subspace_sets(b, ambient_values):
    """Every nonzero subspace of span(ambient) as a frozenset of elements."""
    S = sorted(ff_span_set(b, ambient_values) - {0})
    seen = set()
    frontier = {frozenset({0})}
    while frontier:
        nxt = set()
        for W in frontier:
            for v in S:
                if v not in W:
                    W2 = ff_span_set(b, list(W) + [v])
                    if W2 not in seen:
                        seen.add(W2)
                        nxt.add(W2)
        frontier = nxt
    return seen


def ff_set_product(b, X, Y):
    return ff_span_set(b, [b.mul(x, y) for x in X for y in Y])


@pytest.fixture(scope="session")
def gf16():
    return backend_create("FF:2:x^4+x+1")


@pytest.fixture(scope="session")
def gf64():
    return backend_create("FF:2^6")


@pytest.fixture(scope="session")
def quat():
    return backend_create("QUAT")


def gf4_in_gf16(b):
    """Basis {1, w} of GF(4) inside GF(16), w = x^5 (order 3)."""
    return [b.one, b.pow(b.parse("x"), 5)]


def subsets(items, min_size=1):
    items = list(items)
    for r in range(min_size, len(items) + 1):
        yield from itertools.combinations(items, r)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
