"""k-spans of finite sets of ring elements.

A :class:`Subspace` stores its basis in reduced row echelon form relative to a
coordinatization computed from the space itself (fixed basis for FF/EXT/QUAT,
union of supports for GA, common denominator and degree bound for RF).  Since
the coordinatization is intrinsic, two Subspace objects are equal exactly when
they describe the same k-subspace of K.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BackendMismatch, EmptySet, NotAUnit, WitnessCheckFailed, ZeroInverse
from .fields import PrimeField
from .linalg import echelon_basis, subspace_intersect
from .scalars import Backend, Element


def _reduce(vec, rows, pivots, k):
    """Residual of ``vec`` modulo the row space of an rref basis."""
    if isinstance(k, PrimeField):
        p = k.p
        v = list(vec)
        for row, c in zip(rows, pivots):
            f = v[c]
            if f:
                v = [(a - f * b) % p for a, b in zip(v, row)]
        return v
    v = list(vec)
    for row, c in zip(rows, pivots):
        f = v[c]
        if not k.is_zero(f):
            v = [k.sub(a, k.mul(f, b)) for a, b in zip(v, row)]
    return v


class Subspace:
    """A finite-dimensional k-subspace of K (immutable, hashable)."""

    __slots__ = ("backend", "coords", "rows", "pivots", "_values", "_hash")

    def __init__(self, backend: Backend, coords, rows, pivots):
        self.backend = backend
        self.coords = coords
        self.rows = tuple(tuple(r) for r in rows)
        self.pivots = tuple(pivots)
        self._values = None
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_values(cls, backend: Backend, values: Iterable) -> "Subspace":
        vals = [v for v in values if not backend.is_zero(v)]
        coords = backend.coordinatization(vals)
        vecs = [coords.vector(v) for v in vals]
        rows, pivots = echelon_basis(vecs, backend.k, coords.dim)
        if backend.kind in ("GA", "RF") and rows:
            # basis rows of the same space determine the intrinsic coordinatization
            basis = [coords.value(r) for r in rows]
            c2 = backend.coordinatization(basis)
            if c2 != coords:
                coords = c2
                rows, pivots = echelon_basis([c2.vector(v) for v in basis], backend.k, c2.dim)
        return cls(backend, coords, rows, pivots)

    @classmethod
    def zero(cls, backend: Backend) -> "Subspace":
        return cls.from_values(backend, [])

    @classmethod
    def base_field(cls, backend: Backend) -> "Subspace":
        return cls.from_values(backend, [backend.one])

    @classmethod
    def whole(cls, backend: Backend) -> "Subspace":
        if backend.dimension is None or backend.kind in ("RF",):
            raise ValueError("K is not finite-dimensional")
        if backend.kind == "GA":
            return cls.from_values(backend, [((g, backend.k.one),) for g in backend.group.elements()])
        zero = backend.k.zero
        unit = []
        for i in range(backend.dimension):
            vec = [zero] * backend.dimension
            vec[i] = backend.k.one
            unit.append(backend.from_coords(vec))
        return cls.from_values(backend, unit)

    # -- basic queries ----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def basis_values(self) -> list:
        if self._values is None:
            self._values = [self.coords.value(r) for r in self.rows]
        return self._values

    def basis(self) -> list[Element]:
        return [Element(self.backend, v) for v in self.basis_values()]

    def _val(self, x):
        if isinstance(x, Element):
            if x.backend != self.backend:
                raise BackendMismatch(f"{x.backend.descriptor} vs {self.backend.descriptor}")
            return x.value
        return x

    def contains(self, x) -> bool:
        v = self._val(x)
        if self.backend.is_zero(v):
            return True
        if not self.coords.covers(v):
            return False
        res = _reduce(self.coords.vector(v), self.rows, self.pivots, self.backend.k)
        z = self.backend.k.is_zero
        return all(z(c) for c in res)

    __contains__ = contains

    def contains_subspace(self, other: "Subspace") -> bool:
        return other.dim <= self.dim and all(self.contains(v) for v in other.basis_values())

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.backend == other.backend and self.coords == other.coords and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.backend.descriptor, self.coords, self.rows))
        return self._hash

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis=[{', '.join(str(b) for b in self.basis())}])"

    def contains_one(self) -> bool:
        return self.contains(self.backend.one)

    def to_json(self) -> list[str]:
        return [str(b) for b in self.basis()]

    # -- lattice operations -----------------------------------------------

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_add(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_meet(self, other)

    def __mul__(self, other):
        if isinstance(other, Subspace):
            return product_of_subspaces(self, other)
        if isinstance(other, Element):
            return translate(other, self, "right")
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Element):
            return translate(other, self, "left")
        return NotImplemented


def _same(V: Subspace, W: Subspace):
    if V.backend != W.backend:
        raise BackendMismatch(f"{V.backend.descriptor} vs {W.backend.descriptor}")


def subspace_add(V: Subspace, W: Subspace) -> Subspace:
    _same(V, W)
    if V.coords == W.coords:
        rows, pivots = echelon_basis(list(V.rows) + list(W.rows), V.backend.k, V.coords.dim)
        return Subspace(V.backend, V.coords, rows, pivots)
    return Subspace.from_values(V.backend, V.basis_values() + W.basis_values())


def subspace_meet(V: Subspace, W: Subspace) -> Subspace:
    _same(V, W)
    b = V.backend
    if not V.dim or not W.dim:
        return Subspace.zero(b)
    if V.coords == W.coords:
        c = V.coords
        vu, vw = V.rows, W.rows
    else:
        c = b.join(V.coords, W.coords)
        vu = [c.vector(v) for v in V.basis_values()]
        vw = [c.vector(v) for v in W.basis_values()]
    rows = subspace_intersect(vu, vw, b.k, c.dim)
    return Subspace.from_values(b, [c.value(r) for r in rows])


def product_of_subspaces(V: Subspace, W: Subspace) -> Subspace:
    """k<VW>, the span of all products v*w."""
    _same(V, W)
    b = V.backend
    mul = b.mul
    wv = W.basis_values()
    return Subspace.from_values(b, [mul(x, y) for x in V.basis_values() for y in wv])


def power_of_subspace(V: Subspace, n: int) -> Subspace:
    if n < 1:
        raise ValueError("power must be >= 1")
    out = V
    for _ in range(n - 1):
        out = product_of_subspaces(out, V)
    return out


# ---------------------------------------------------------------------------
# sets


@dataclass(frozen=True)
class SetInstance:
    """A finite ordered list of nonzero elements of one backend."""

    backend: Backend
    values: tuple
    name: str | None = None

    def __post_init__(self):
        vals = tuple(self.values)
        for v in vals:
            if self.backend.is_zero(v):
                raise ValueError("sets of K* may not contain 0")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, backend: Backend, items: Sequence, name=None) -> "SetInstance":
        """Build from Elements, raw values or element strings."""
        vals = []
        for it in items:
            if isinstance(it, Element):
                if it.backend != backend:
                    raise BackendMismatch(f"{it.backend.descriptor} vs {backend.descriptor}")
                vals.append(it.value)
            elif isinstance(it, str):
                vals.append(backend.parse(it))
            else:
                vals.append(it)
        return cls(backend, tuple(vals), name)

    @property
    def elements(self) -> list[Element]:
        return [Element(self.backend, v) for v in self.values]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.elements)

    def to_json(self) -> list[str]:
        return [self.backend.format(v) for v in self.values]

    def without(self, i: int) -> "SetInstance":
        return SetInstance(self.backend, self.values[:i] + self.values[i + 1:], self.name)

    def is_commutative_set(self) -> bool:
        b = self.backend
        if b.is_commutative:
            return True
        vals = self.values
        return all(b.mul(x, y) == b.mul(y, x) for i, x in enumerate(vals) for y in vals[i + 1:])


def _nonempty(*sets):
    for A in sets:
        if not len(A):
            raise EmptySet("sets must be nonempty")


def _same_backend(*sets):
    b = sets[0].backend
    for A in sets[1:]:
        if A.backend != b:
            raise BackendMismatch(f"{A.backend.descriptor} vs {b.descriptor}")
    return b


def span_of(A) -> Subspace:
    """k<A> for a SetInstance (or an iterable of Elements)."""
    if not isinstance(A, SetInstance):
        items = list(A)
        if not items:
            raise EmptySet("span of the empty set")
        A = SetInstance.of(items[0].backend, items)
    _nonempty(A)
    return Subspace.from_values(A.backend, A.values)


def product_set_values(sets: Sequence[SetInstance]) -> list:
    """All ordered products a_1 * ... * a_n (deduplicated)."""
    b = sets[0].backend
    cur = list(dict.fromkeys(sets[0].values))
    for S in sets[1:]:
        nxt = {}
        for x in cur:
            for y in S.values:
                nxt[b.mul(x, y)] = None
        cur = [v for v in nxt if not b.is_zero(v)]
    return cur


def product_span(*sets) -> Subspace:
    """k<A_1 ... A_n>; accepts sets as arguments or a single list of sets.

    Computed as k<k<A_1> ... k<A_n>> from bases, which equals the span of the
    Minkowski product.  In division backends the two-sided bound
    max(dim A, dim B) <= dim AB <= dim A dim B is checked.
    """
    if len(sets) == 1 and not isinstance(sets[0], SetInstance):
        sets = tuple(sets[0])
    _nonempty(*sets)
    b = _same_backend(*sets)
    spans = [span_of(A) for A in sets]
    out = spans[0]
    for S in spans[1:]:
        prod = product_of_subspaces(out, S)
        if b.is_division_ring and not (max(out.dim, S.dim) <= prod.dim <= out.dim * S.dim):
            raise WitnessCheckFailed("product span violates max(dim A, dim B) <= dim AB <= dim A dim B")
        out = prod
    return out


def inverse_set(A: SetInstance) -> SetInstance:
    b = A.backend
    out = []
    for v in A.values:
        if not b.is_unit(v):
            raise NotAUnit(f"{b.format(v)} is not invertible")
        out.append(b.inv(v))
    return SetInstance(b, tuple(out), A.name)


def translate(x, V: Subspace, side: str = "left") -> Subspace:
    """x*V (side='left') or V*x (side='right')."""
    b = V.backend
    xv = x.value if isinstance(x, Element) else x
    if b.is_zero(xv):
        raise ZeroInverse("translation by zero")
    if not b.is_unit(xv):
        raise NotAUnit(f"{b.format(xv)} is not a unit")
    if side == "left":
        vals = [b.mul(xv, v) for v in V.basis_values()]
    elif side == "right":
        vals = [b.mul(v, xv) for v in V.basis_values()]
    else:
        raise ValueError("side must be 'left' or 'right'")
    return Subspace.from_values(b, vals)


def translate_set(x, A: SetInstance, side: str = "left") -> SetInstance:
    b = A.backend
    xv = x.value if isinstance(x, Element) else x
    if side == "left":
        vals = tuple(b.mul(xv, v) for v in A.values)
    else:
        vals = tuple(b.mul(v, xv) for v in A.values)
    return SetInstance(b, vals, A.name)


def progressive_sum_decomposition(c: Sequence, U: Subspace) -> list[Subspace]:
    """Subspaces U_1 = U, U_2, ..., U_r of U with sum_i c_i U = (+)_i c_i U_i direct.

    U_i is spanned by the basis vectors u of U (in canonical order) whose
    translate c_i u is not already in the running sum.
    """
    b = U.backend
    cs = [x.value if isinstance(x, Element) else x for x in c]
    for x in cs:
        if not b.is_unit(x):
            raise NotAUnit(f"{b.format(x)} is not a unit")
    basis = U.basis_values()
    running = Subspace.zero(b)
    out = []
    for x in cs:
        chosen = []
        for u in basis:
            t = b.mul(x, u)
            if not running.contains(t):
                chosen.append(u)
                running = running + Subspace.from_values(b, [t])
        out.append(Subspace.from_values(b, chosen))
    return out


# ---------------------------------------------------------------------------
# enumeration of subspaces over a finite base field


def gaussian_binomial(n: int, d: int, q: int) -> int:
    if d < 0 or d > n:
        return 0
    num = den = 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n: int, q: int, dims=None) -> int:
    dims = range(1, n + 1) if dims is None else dims
    return sum(gaussian_binomial(n, d, q) for d in dims)


def _rref_matrices(n: int, d: int, p: int) -> Iterator[list[list[int]]]:
    """All d x n reduced echelon matrices of rank d over GF(p), in lexicographic
    order of (pivot columns, free entries)."""
    import itertools

    for piv in itertools.combinations(range(n), d):
        free = []
        for r, c in enumerate(piv):
            for j in range(c + 1, n):
                if j not in piv:
                    free.append((r, j))
        for entries in itertools.product(range(p), repeat=len(free)):
            m = [[0] * n for _ in range(d)]
            for r, c in enumerate(piv):
                m[r][c] = 1
            for (r, j), e in zip(free, entries):
                m[r][j] = e
            yield m


def _combine(b: Backend, coeffs, basis):
    acc = b.zero
    for c, v in zip(coeffs, basis):
        if c:
            acc = b.add(acc, b.scale(c, v))
    return acc


def iter_subspaces(V: Subspace, dims=None) -> Iterator[Subspace]:
    """All nonzero subspaces of V (finite prime base field), by dimension."""
    b = V.backend
    if not isinstance(b.k, PrimeField):
        raise ValueError("enumeration needs a finite base field")
    n = V.dim
    basis = V.basis_values()
    for d in (range(1, n + 1) if dims is None else dims):
        for m in _rref_matrices(n, d, b.k.p):
            yield Subspace.from_values(b, [_combine(b, row, basis) for row in m])


def iter_subspaces_containing_one(V: Subspace, dims=None) -> Iterator[Subspace]:
    """All subspaces W of V with 1 in W, as k*1 (+) U for U inside a fixed
    complement of k*1 in V."""
    b = V.backend
    if not V.contains(b.one):
        return
    # complement: basis vectors of V not needed once 1 is added
    comp = []
    acc = Subspace.from_values(b, [b.one])
    for v in V.basis_values():
        if not acc.contains(v):
            comp.append(v)
            acc = acc + Subspace.from_values(b, [v])
    C = Subspace.from_values(b, comp)
    want = None if dims is None else set(dims)
    if want is None or 1 in want:
        yield Subspace.from_values(b, [b.one])
    sub_dims = None if want is None else [d - 1 for d in sorted(want) if d >= 2]
    if C.dim:
        for U in iter_subspaces(C, sub_dims):
            yield Subspace.from_values(b, [b.one] + U.basis_values())


def count_subspaces_containing_one(n: int, q: int) -> int:
    return 1 + count_subspaces(n - 1, q) if n >= 1 else 0


def random_subspace(V: Subspace, rng: random.Random, dim: int | None = None) -> Subspace:
    """A random nonzero subspace of V spanned by random combinations (finite k)."""
    b = V.backend
    basis = V.basis_values()
    k = b.k
    n = V.dim
    d = rng.randint(1, n) if dim is None else dim
    while True:
        vals = [_combine(b, [k.random(rng) for _ in range(n)], basis) for _ in range(d)]
        W = Subspace.from_values(b, vals)
        if W.dim == d:
            return W
