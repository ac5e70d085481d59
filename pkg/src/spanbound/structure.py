"""Stabilizers, division closures and coset decompositions of subspaces."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BudgetExceeded,
    EmptySet,
    NotDivisionClosed,
    NotStabilized,
    UnsupportedBackend,
    WitnessCheckFailed,
    ZeroSubspace,
)
from .fields import PrimeField
from .linalg import echelon_basis, kernel
from .spans import SetInstance, Subspace, _reduce, product_of_subspaces

DEFAULT_CLOSURE_BUDGET = 64


@dataclass(frozen=True)
class StabilizerReport:
    side: str
    H: Subspace
    contains_one: bool
    is_multiplicatively_closed: bool
    is_division_closed: bool | None
    equals_base_field: bool

    @property
    def dim(self) -> int:
        return self.H.dim

    def to_json(self):
        return {
            "side": self.side,
            "dim": self.dim,
            "basis": self.H.to_json(),
            "contains_one": self.contains_one,
            "is_division_closed": self.is_division_closed,
            "equals_base_field": self.equals_base_field,
        }


def _anchor(V: Subspace):
    """A unit of V to restrict the stabilizer search, or None."""
    b = V.backend
    if b.is_division_ring:
        return V.basis_values()[0]
    for g in getattr(V.coords, "support", ()):
        mono = ((g, b.k.one),)
        if V.contains(mono):
            return mono
    for v in V.basis_values():
        if b.group.is_finite and b.is_unit(v):
            return v
    return None


def _stabilizer_space(V: Subspace, side: str) -> Subspace:
    b = V.backend
    if b.kind == "RF":
        # a finite-dimensional subring of k(t) is algebraic over k, and k is
        # algebraically closed in k(t)
        return Subspace.base_field(b)
    anchor = _anchor(V)
    if anchor is not None:
        inv = b.inv(anchor)
        if side == "left":
            cands = [b.mul(v, inv) for v in V.basis_values()]
        else:
            cands = [b.mul(inv, v) for v in V.basis_values()]
        cands = Subspace.from_values(b, cands).basis_values()
    elif b.kind == "GA" and b.group.is_finite:
        cands = Subspace.whole(b).basis_values()
    else:
        raise UnsupportedBackend("stabilizer over an infinite group needs a unit in V")
    basis = V.basis_values()
    if side == "left":
        prods = [[b.mul(c, v) for v in basis] for c in cands]
    else:
        prods = [[b.mul(v, c) for v in basis] for c in cands]
    coords = b.coordinatization(basis + [p for row in prods for p in row])
    k = b.k
    vrows, vpiv = echelon_basis([coords.vector(v) for v in basis], k, coords.dim)
    # row j: residuals of c_j * b_i modulo V, concatenated over i
    big = []
    for row in prods:
        flat = []
        for p in row:
            flat.extend(_reduce(coords.vector(p), vrows, vpiv, k))
        big.append(flat)
    width = len(big[0]) if big else 0
    # x with sum_j x_j big[j] = 0, i.e. the kernel of big^T
    bt = [[big[j][c] for j in range(len(big))] for c in range(width)]
    sols = kernel(bt, k, len(cands)) if width else [[k.one if i == j else k.zero for i in range(len(cands))] for j in range(len(cands))]
    hvals = []
    for x in sols:
        acc = b.zero
        for xi, c in zip(x, cands):
            if not k.is_zero(xi):
                acc = b.add(acc, b.scale(xi, c))
        hvals.append(acc)
    return Subspace.from_values(b, hvals)


def _is_division_closed(H: Subspace) -> bool | None:
    b = H.backend
    if b.is_division_ring or H.dim == 1:
        return True
    # non-division algebra: a finite subalgebra is a division ring iff it has no
    # zero divisors; decidable by enumeration when small
    if isinstance(b.k, PrimeField) and b.k.p ** H.dim <= 4096:
        from itertools import product as iproduct

        basis = H.basis_values()
        elems = []
        for coeffs in iproduct(range(b.k.p), repeat=H.dim):
            if any(coeffs):
                acc = b.zero
                for c, v in zip(coeffs, basis):
                    if c:
                        acc = b.add(acc, b.scale(c, v))
                elems.append(acc)
        return all(b.is_unit(h) for h in elems)
    if b.kind == "GA" and all(len(v) == 1 for v in H.basis_values()) and H.dim > 1:
        return False  # span of a nontrivial subgroup: sum over a cyclic subgroup is a zero divisor
    return None


def stabilizer(V: Subspace, side: str = "left") -> StabilizerReport:
    """H = {h : hV <= V} (left) or {h : Vh <= V} (right), verified."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if not V.dim:
        raise ZeroSubspace("stabilizer of the zero subspace")
    b = V.backend
    H = _stabilizer_space(V, side)
    HV = product_of_subspaces(H, V) if side == "left" else product_of_subspaces(V, H)
    if not V.contains_subspace(HV):
        raise WitnessCheckFailed("computed stabilizer does not stabilize V")
    closed = H.contains_subspace(product_of_subspaces(H, H))
    one = H.contains(b.one)
    if not (closed and one):
        raise WitnessCheckFailed("stabilizer is not a unital subring")
    if b.dimension is not None and b.is_division_ring and b.dimension % H.dim:
        raise WitnessCheckFailed("stabilizer dimension does not divide dim K")
    return StabilizerReport(
        side=side,
        H=H,
        contains_one=one,
        is_multiplicatively_closed=closed,
        is_division_closed=_is_division_closed(H),
        equals_base_field=H.dim == 1,
    )


def is_periodic(V: Subspace, side: str = "left") -> bool:
    return stabilizer(V, side).dim > 1


def coset_decompose(V: Subspace, H: Subspace, side: str = "left") -> list:
    """Representatives S with V = (+)_{s in S} H s (left) or (+) s H (right).

    Greedy: walk the canonical basis of V and keep each vector not yet covered.
    Returns raw values; ``len(S) * dim H == dim V`` is verified.
    """
    b = V.backend
    if not H.contains(b.one) or not H.contains_subspace(product_of_subspaces(H, H)):
        raise NotDivisionClosed("H must contain 1 and be closed under multiplication")
    if not b.is_division_ring and _is_division_closed(H) is not True:
        raise NotDivisionClosed("H is not a division ring")
    HV = product_of_subspaces(H, V) if side == "left" else product_of_subspaces(V, H)
    if HV != V:
        raise NotStabilized("H does not stabilize V on the requested side")
    if V.dim % H.dim:
        raise NotStabilized("dim H does not divide dim V")
    reps = []
    cur = Subspace.zero(b)
    for v in V.basis_values():
        if not cur.contains(v):
            reps.append(v)
            line = Subspace.from_values(b, [v])
            coset = product_of_subspaces(H, line) if side == "left" else product_of_subspaces(line, H)
            cur = cur + coset
    if cur != V or len(reps) * H.dim != V.dim:
        raise WitnessCheckFailed("coset decomposition does not reconstruct V")
    return reps


def division_closure(A, budget: int = DEFAULT_CLOSURE_BUDGET) -> Subspace:
    """Smallest multiplicatively closed subspace containing k and A.

    ``budget`` caps the dimension; exceeding it raises BudgetExceeded.
    """
    if isinstance(A, Subspace):
        b = A.backend
        vals = A.basis_values()
    else:
        if isinstance(A, SetInstance):
            b, vals = A.backend, list(A.values)
        else:
            items = list(A)
            if not items:
                raise EmptySet("empty set")
            b, vals = items[0].backend, [x.value for x in items]
    V = Subspace.from_values(b, [b.one] + list(vals))
    while True:
        if V.dim > budget:
            raise BudgetExceeded(f"division closure exceeds dimension budget {budget}")
        W = product_of_subspaces(V, V)
        if W == V:
            return V
        V = W


def ff_subfield(backend, d: int) -> Subspace:
    """The subfield GF(p^d) of a finite field backend: fixed points of x -> x^(p^d)."""
    n = backend.dimension
    if n % d:
        raise ValueError(f"{d} does not divide {n}")
    K = Subspace.whole(backend)
    q = backend.k.p ** d
    k = backend.k
    rows = []
    for e in K.basis_values():
        img = backend.sub(backend.pow(e, q), e)
        rows.append(K.coords.vector(img))
    # x = sum c_i e_i fixed iff sum c_i (F(e_i) - e_i) = 0
    cols = [[rows[i][j] for i in range(n)] for j in range(n)]
    sols = kernel(cols, k, n)
    basis = K.basis_values()
    vals = []
    for x in sols:
        acc = backend.zero
        for c, e in zip(x, basis):
            if not k.is_zero(c):
                acc = backend.add(acc, backend.scale(c, e))
        vals.append(acc)
    H = Subspace.from_values(backend, vals)
    if H.dim != d:
        raise WitnessCheckFailed("subfield has wrong dimension")
    return H


def translate_covered(V: Subspace, H: Subspace, side: str = "left"):
    """An x with V inside H x (left) or x H (right), else None."""
    b = V.backend
    v = V.basis_values()[0]
    inv = b.inv(v)
    vals = [b.mul(w, inv) for w in V.basis_values()] if side == "left" else [b.mul(inv, w) for w in V.basis_values()]
    if all(H.contains(u) for u in vals):
        return v
    return None

