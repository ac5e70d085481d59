"""Group sets versus their images in linear backends.

A finite X inside a group G maps to A_X = {e_g : g in X} in the group algebra
k0[G].  Cardinalities of product sets become dimensions of spans, and the set
stabilizer S(X) becomes the left stabilizer of k<A_X>.  For torsion-free
abelian G the same monomials live in the Laurent ring k0[Z^l].
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import NonAbelianGroup, TorsionPresent, WitnessCheckFailed
from .fields import PrimeField, RationalField, field_from_spec, is_prime
from .groups import AbelianGroup, GroupSet, product_set, product_set_n, set_stabilizer
from .scalars import GroupAlgebraBackend, backend_create
from .spans import SetInstance, Subspace, span_of
from .structure import stabilizer
from .theorems import CheckReport, algebra_plunnecke, algebra_triple, span_product

MAX_SUBSET_SEARCH = 12


def default_field(group):
    """Smallest prime p not dividing any torsion order (keeps k0[G] semisimple)."""
    p = 2
    while True:
        if is_prime(p) and all(t % p for t in group.torsion_orders):
            return PrimeField(p)
        p += 1


def _backend(group, k0=None) -> GroupAlgebraBackend:
    if k0 is None:
        k0 = default_field(group)
    elif isinstance(k0, str):
        k0 = field_from_spec(k0)
    return backend_create({"kind": "GA", "field": repr(k0), "group": group})


def to_group_algebra(X: GroupSet, k0=None, backend=None) -> SetInstance:
    """A_X = {e_g : g in X}; asserts |X| = dim k<A_X>."""
    b = backend or _backend(X.group, k0)
    A = SetInstance(b, tuple(((g, b.k.one),) for g in X.elements))
    if span_of(A).dim != len(X):
        raise WitnessCheckFailed("|X| != dim A_X")
    return A


def embed_torsion_free(X: GroupSet, k0=None) -> SetInstance:
    """Monomials T^a for X inside Z^l (Laurent ring model)."""
    G = X.group
    if not isinstance(G, AbelianGroup) or G.factors or G.rank < 1:
        raise TorsionPresent("only torsion-free Z^l embeds by monomials; use to_group_algebra")
    b = _backend(G, k0 or RationalField())
    A = to_group_algebra(X, backend=b)
    # stabilizer of a finite set in a torsion-free group is trivial; so is the linear one
    if stabilizer(span_of(A), "left").dim != 1:
        raise WitnessCheckFailed("stabilizer of a monomial span in Z^l is not k")
    return A


def correspondence_report(X: GroupSet, Y: GroupSet, k0=None) -> CheckReport:
    """|X| = dim A_X, |XY| = dim A_X A_Y, span e_{S(X)} = left stabilizer of k<A_X>."""
    b = _backend(X.group, k0)
    AX, AY = to_group_algebra(X, backend=b), to_group_algebra(Y, backend=b)
    XY = product_set(X, Y)
    dXY = span_product(AX, AY).dim
    S = set_stabilizer(X)
    eS = Subspace.from_values(b, [((g, b.k.one),) for g in S.elements])
    H = stabilizer(span_of(AX), "left").H
    q = {"X": len(X), "dim_AX": span_of(AX).dim, "XY": len(XY), "dim_AXAY": dXY, "S_X": len(S), "dim_H": H.dim}
    ok = q["X"] == q["dim_AX"] and q["XY"] == dXY and eS == H
    return CheckReport("correspondence", ok, True, q)


def _require_abelian(G):
    if not G.is_abelian:
        raise NonAbelianGroup("the group must be abelian")


def group_kneser_check(X: GroupSet, Y: GroupSet, k0=None) -> CheckReport:
    """|XY| >= |X| + |Y| - |S(XY)|, computed on G and in k0[G]."""
    _require_abelian(X.group)
    XY = product_set(X, Y)
    S = set_stabilizer(XY)
    b = _backend(X.group, k0)
    AX, AY = to_group_algebra(X, backend=b), to_group_algebra(Y, backend=b)
    P = span_product(AX, AY)
    H = stabilizer(P, "left").H
    direct = (len(X), len(Y), len(XY), len(S))
    linear = (span_of(AX).dim, span_of(AY).dim, P.dim, H.dim)
    holds = len(XY) >= len(X) + len(Y) - len(S)
    agree = direct == linear
    q = {"direct": list(direct), "linear": list(linear), "agree": agree, "slack": len(XY) + len(S) - len(X) - len(Y)}
    return CheckReport("group_kneser", holds and agree, True, q)


def _best_subset(X: GroupSet, Y: GroupSet):
    """Nonempty Z inside X minimizing |ZY|/|Z| (first minimum in size-then-lex order)."""
    elems = X.elements
    if len(elems) > MAX_SUBSET_SEARCH:
        return X
    best = None
    for r in range(1, len(elems) + 1):
        for sub in combinations(elems, r):
            Z = GroupSet(X.group, sub)
            val = Fraction(len(product_set(Z, Y)), r)
            if best is None or val < best[0]:
                best = (val, Z)
    return best[1]


def group_plunnecke_check(X: GroupSet, Y: GroupSet, n_max: int = 4, k0=None) -> CheckReport:
    """|Z Y^n| <= alpha^n |Z| for the best Z inside X, alpha = |XY|/|X|; the same
    numbers through k0[G], plus the linear run on A_X, A_Y."""
    _require_abelian(X.group)
    b = _backend(X.group, k0)
    alpha = Fraction(len(product_set(X, Y)), len(X))
    Z = _best_subset(X, Y)
    AX, AY, AZ = (to_group_algebra(S, backend=b) for S in (X, Y, Z))
    rows = []
    ok = True
    agree = Fraction(span_product(AX, AY).dim, span_of(AX).dim) == alpha
    for n in range(1, n_max + 1):
        ZYn = product_set_n([Z] + [Y] * n)
        dim = span_product(AZ, *([AY] * n)).dim
        agree = agree and dim == len(ZYn)
        good = len(ZYn) <= alpha**n * len(Z)
        ok = ok and good
        rows.append({"n": n, "ZYn": len(ZYn), "dim": dim, "bound": alpha**n * len(Z), "holds": good})
    lin = algebra_plunnecke(AX, AY, n_max)
    q = {"alpha": alpha, "Z": len(Z), "powers": rows, "agree": agree, "linear_holds": lin.holds, "linear_exhaustive": lin.asserted}
    return CheckReport("group_plunnecke", ok and agree and (lin.holds or not lin.asserted), True, q)


def group_ruzsa_check(X: GroupSet, Y: GroupSet, Z: GroupSet, k0=None) -> CheckReport:
    """|XYZ|^2 <= |XY| |YZ| max_y |XyZ|, on G and through k0[G]."""
    G = X.group
    xyz = len(product_set_n([X, Y, Z]))
    xy = len(product_set(X, Y))
    yz = len(product_set(Y, Z))
    m = max(len(product_set_n([X, GroupSet(G, (y,)), Z])) for y in Y.elements)
    holds = xyz * xyz <= xy * yz * m
    b = _backend(G, k0)
    lin = algebra_triple(*(to_group_algebra(S, backend=b) for S in (X, Y, Z)))
    lq = lin.quantities
    agree = (lq["dim_ABC"], lq["dim_AB"], lq["dim_BC"], lq["max_AbC"]) == (xyz, xy, yz, m)
    q = {"XYZ": xyz, "XY": xy, "YZ": yz, "max_XyZ": m, "agree": agree, "linear_holds": lin.holds}
    return CheckReport("group_ruzsa", holds and agree and lin.holds, True, q)
