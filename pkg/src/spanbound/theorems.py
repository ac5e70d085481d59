"""Executable forms of the dimension estimates.

Every checker returns a record with ``holds`` (the inequality or disjunction
evaluated on the instance) and ``asserted`` (whether the instance satisfies the
hypotheses under which the statement is a theorem).  ``asserted and not holds``
is an implementation bug or, for report-only probes, never happens by design.
All ratios are :class:`fractions.Fraction`; all comparisons are exact.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    BudgetExceeded,
    CommutationFailure,
    EmptySet,
    HeuristicRho,
    HypothesisFailed,
    InfiniteFieldExhaustive,
    NonAbelianForThAlg1,
    NonCommutativeA,
    NonCommutativeBackend,
    NonCommutativePrefix,
    NotAUnit,
    OneElement,
    UnitPreconditionFailed,
    UnsupportedBackend,
    UsageError,
    WitnessCheckFailed,
    WrongArity,
)
from .fields import PrimeField
from .linalg import rank
from .scalars import Element
from .spans import (
    SetInstance,
    Subspace,
    _combine,
    _rref_matrices,
    count_subspaces,
    product_of_subspaces,
    span_of,
    translate,
)
from .structure import (
    coset_decompose,
    division_closure,
    ff_subfield,
    stabilizer,
)

DEFAULT_RHO_BUDGET = 2_000_000


def jsonable(x):
    """Plain-JSON view of report contents."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Subspace):
        return x.to_json()
    if isinstance(x, Element):
        return str(x)
    if isinstance(x, SetInstance):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


@dataclass
class CheckReport:
    """Generic checker outcome: named quantities plus verdict."""

    checker: str
    holds: bool
    asserted: bool
    quantities: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "checker": self.checker,
            "holds": self.holds,
            "asserted": self.asserted,
            "quantities": jsonable(self.quantities),
            "witness": jsonable(self.witness),
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# helpers


def _as_span(x) -> Subspace:
    if isinstance(x, Subspace):
        return x
    if isinstance(x, SetInstance):
        return span_of(x)
    raise TypeError(f"expected a set or subspace, got {type(x).__name__}")


def span_product(*parts) -> Subspace:
    """k<P_1 ... P_n> for sets and subspaces."""
    spans = [_as_span(p) for p in parts]
    out = spans[0]
    for s in spans[1:]:
        out = product_of_subspaces(out, s)
    return out


def _single(b, v) -> Subspace:
    return Subspace.from_values(b, [v])


def _require_nonempty(*sets):
    for s in sets:
        if not len(s):
            raise EmptySet("sets must be nonempty")


def _require_same_backend(*sets):
    b = sets[0].backend
    for s in sets[1:]:
        if s.backend != b:
            from .errors import BackendMismatch

            raise BackendMismatch(f"{s.backend.descriptor} vs {b.descriptor}")
    return b


def _require_commutative_division(b):
    if not b.is_division_ring:
        raise UnsupportedBackend(f"{b.kind} is not a division ring")
    if not b.is_commutative:
        raise NonCommutativeBackend(f"{b.kind} is not commutative")


def _require_division(b):
    if not b.is_division_ring:
        raise UnsupportedBackend(f"{b.kind} is not a division ring; use the algebra_* checkers")


def _commute(b, X, Y) -> bool:
    return all(b.mul(x, y) == b.mul(y, x) for x in X for y in Y)


# ---------------------------------------------------------------------------
# Kneser


@dataclass
class KneserVerdict:
    dims: list
    dim_product: int
    dim_H: int
    H: Subspace
    holds: bool
    asserted: bool
    statements: dict = field(default_factory=dict)
    chain_violation: int | None = None
    prefix_periodic: bool | None = None

    @property
    def slack(self) -> int:
        return self.dim_product + (len(self.dims) - 1) * self.dim_H - sum(self.dims)

    def to_json(self):
        return {
            "checker": "kneser",
            "dims": self.dims,
            "dim_product": self.dim_product,
            "dim_H": self.dim_H,
            "H": self.H.to_json(),
            "holds": self.holds,
            "asserted": self.asserted,
            "slack": self.slack,
            "statements": self.statements,
            "chain_violation": self.chain_violation,
            "prefix_periodic": self.prefix_periodic,
        }


def kneser_check(A: SetInstance, B: SetInstance) -> KneserVerdict:
    """dim AB + dim H(AB) >= dim A + dim B, asserted when K/k is separable."""
    _require_nonempty(A, B)
    b = _require_same_backend(A, B)
    _require_commutative_division(b)
    dA, dB = span_of(A).dim, span_of(B).dim
    AB = span_product(A, B)
    H = stabilizer(AB, "left").H
    holds = AB.dim + H.dim >= dA + dB
    return KneserVerdict([dA, dB], AB.dim, H.dim, H, holds, b.is_separable)


def kneser_nfold(As: Sequence[SetInstance]) -> KneserVerdict:
    """The three equivalent statements for A_1 ... A_n plus the prefix chain.

    statement 1: dim P >= sum dim(A_i H) - (n-1) dim H
    statement 2: dim P >= sum dim A_i - (n-1) dim H
    statement 3: dim P >= sum dim A_i - (n-1), or k<P> is periodic
    """
    As = list(As)
    if len(As) < 2:
        raise UsageError("need at least two sets")
    _require_nonempty(*As)
    b = _require_same_backend(*As)
    _require_commutative_division(b)
    n = len(As)
    spans = [span_of(A) for A in As]
    dims = [s.dim for s in spans]
    prefixes = [spans[0]]
    for s in spans[1:]:
        prefixes.append(product_of_subspaces(prefixes[-1], s))
    P = prefixes[-1]
    H = stabilizer(P, "left").H
    dAH = [product_of_subspaces(s, H).dim for s in spans]
    s1 = P.dim >= sum(dAH) - (n - 1) * H.dim
    s2 = P.dim >= sum(dims) - (n - 1) * H.dim
    first = P.dim >= sum(dims) - (n - 1)
    periodic = H.dim > 1
    s3 = first or periodic
    violation = None
    for j in range(1, n):
        if prefixes[j].dim < prefixes[j - 1].dim + dims[j] - 1:
            violation = j + 1  # 1-based index of the violating factor
            break
    prefix_periodic = None
    if violation is not None:
        prefix_periodic = stabilizer(prefixes[violation - 1], "left").dim > 1
    statements = {
        "1": s1,
        "2": s2,
        "3": s3,
        "3_first_branch": first,
        "3_periodic": periodic,
        "1_implies_2": (not s1) or s2,
        "2_implies_3": (not s2) or s3,
        "all_equal": s1 == s2 == s3,
        "chain_lemma": violation is not None or first,
    }
    holds = s1 and s2 and s3 and statements["chain_lemma"]
    if violation is not None and b.is_separable:
        holds = holds and bool(prefix_periodic)
    return KneserVerdict(dims, P.dim, H.dim, H, holds, b.is_separable, statements, violation, prefix_periodic)


# ---------------------------------------------------------------------------
# minimal growth


@dataclass
class RhoResult:
    rho: Fraction
    X: Subspace
    mode: str
    consumed: int
    B_span: Subspace = None

    def to_json(self):
        return {"rho": str(self.rho), "X": self.X.to_json(), "dim_X": self.X.dim, "mode": self.mode, "consumed": self.consumed}


def _growth(W: Subspace, SB: Subspace) -> Fraction:
    return Fraction(product_of_subspaces(W, SB).dim, W.dim)


def rho_exhaustive(VA: Subspace, SB: Subspace, budget: int = DEFAULT_RHO_BUDGET) -> RhoResult:
    """Exact min of dim(WB)/dim W over all nonzero subspaces W of VA."""
    b = VA.backend
    k = b.k
    if not isinstance(k, PrimeField):
        raise InfiniteFieldExhaustive("exhaustive search needs a finite base field")
    n, p = VA.dim, k.p
    total = count_subspaces(n, p)
    if total > budget:
        raise BudgetExceeded(f"{total} subspaces exceed the budget {budget}")
    basis = VA.basis_values()
    bb = SB.basis_values()
    prods = [[b.mul(v, w) for w in bb] for v in basis]
    coords = b.coordinatization([x for row in prods for x in row])
    P = [[coords.vector(x) for x in row] for row in prods]
    width = coords.dim
    best = None
    best_m = None
    for d in range(1, n + 1):
        for m in _rref_matrices(n, d, p):
            rows = []
            for mrow in m:
                for l in range(len(bb)):
                    acc = [0] * width
                    for j, c in enumerate(mrow):
                        if c:
                            pj = P[j][l]
                            acc = [(a + c * x) % p for a, x in zip(acc, pj)]
                    rows.append(acc)
            val = Fraction(rank(rows, k, width), d)
            if best is None or val < best:
                best, best_m = val, m
    X = Subspace.from_values(b, [_combine(b, row, basis) for row in best_m])
    if _growth(X, SB) != best:
        raise WitnessCheckFailed("minimizer growth mismatch")
    return RhoResult(best, X, "exhaustive", total, SB)


def rho_heuristic(VA: Subspace, SB: Subspace, A: SetInstance | None = None, seed: int = 0, samples: int = 64) -> RhoResult:
    b = VA.backend
    cands = [VA]
    if A is not None:
        vals = list(A.values)[:10]
        for r in range(1, len(vals) + 1):
            for sub in itertools.combinations(vals, r):
                cands.append(Subspace.from_values(b, sub))
    if isinstance(b.k, PrimeField) and VA.dim:
        from .spans import random_subspace

        rng = random.Random(seed)
        cands += [random_subspace(VA, rng) for _ in range(samples)]
    best = None
    for W in cands:
        val = _growth(W, SB)
        if best is None or val < best[0]:
            best = (val, W)
    return RhoResult(best[0], best[1], "heuristic", len(cands), SB)


def rho_minimize(A: SetInstance, B: SetInstance, mode: str = "exhaustive", budget: int = DEFAULT_RHO_BUDGET, seed: int = 0) -> RhoResult:
    """rho = min over nonzero W <= k<A> of dim(WB)/dim(W), with a minimizer."""
    _require_nonempty(A, B)
    b = _require_same_backend(A, B)
    VA, SB = span_of(A), span_of(B)
    if mode == "exhaustive":
        res = rho_exhaustive(VA, SB, budget)
    elif mode == "heuristic":
        res = rho_heuristic(VA, SB, A, seed)
    elif mode == "auto":
        try:
            res = rho_exhaustive(VA, SB, budget)
        except (InfiniteFieldExhaustive, BudgetExceeded):
            res = rho_heuristic(VA, SB, A, seed)
    else:
        raise UsageError(f"unknown rho mode {mode!r}")
    if res.rho > Fraction(span_product(A, B).dim, VA.dim):
        raise WitnessCheckFailed("rho exceeds dim(AB)/dim(A)")
    del b
    return res


def _cxb(C: SetInstance, X: Subspace, SB: Subspace):
    b = X.backend
    CX = Subspace.from_values(b, [b.mul(c, x) for c in C.values for x in X.basis_values()])
    CXB = product_of_subspaces(CX, SB)
    return CX.dim, CXB.dim


def petridis_check(A: SetInstance, B: SetInstance, C, rho: RhoResult) -> CheckReport:
    """dim(CXB) <= rho * dim(CX) for the minimizer X (exhaustive rho only).

    ``C`` is one set or a list of sets; every one is checked.
    """
    if rho.mode != "exhaustive":
        raise HeuristicRho("the inequality needs a true minimizer")
    b = _require_same_backend(A, B)
    Cs = [C] if isinstance(C, SetInstance) else list(C)
    SB = rho.B_span if rho.B_span is not None else span_of(B)
    rows = []
    ok = True
    for Ci in Cs:
        for c in Ci.values:
            if not b.is_unit(c):
                raise NotAUnit(f"{b.format(c)} is not invertible")
        dcx, dcxb = _cxb(Ci, rho.X, SB)
        good = dcxb <= rho.rho * dcx
        ok = ok and good
        rows.append({"dim_CX": dcx, "dim_CXB": dcxb, "bound": rho.rho * dcx, "holds": good})
    return CheckReport(
        "petridis",
        ok,
        b.is_division_ring,
        {"rho": rho.rho, "dim_X": rho.X.dim, "cases": rows},
        {"X": rho.X},
    )


def _powers_report(name, A, B, X: Subspace, alpha: Fraction, n_max: int, asserted: bool, rho=None, with_A_powers=True):
    SB = span_of(B)
    rows = []
    ok = True
    cur = X
    for n in range(1, n_max + 1):
        cur = product_of_subspaces(cur, SB)
        bound = alpha**n * X.dim
        good = cur.dim <= bound
        ok = ok and good
        rows.append({"n": n, "dim_XBn": cur.dim, "bound": bound, "holds": good})
    spec_rows = []
    same = set(A.values) == set(B.values)
    if same and with_A_powers:
        SA = span_of(A)
        cur = SA
        for n in range(2, n_max + 1):
            cur = product_of_subspaces(cur, SA)
            bound = alpha**n * SA.dim
            good = cur.dim <= bound
            ok = ok and good
            spec_rows.append({"n": n, "dim_An": cur.dim, "bound": bound, "holds": good})
    q = {"alpha": alpha, "dim_X": X.dim, "powers": rows}
    if rho is not None:
        q["rho"] = rho.rho
        q["rho_mode"] = rho.mode
        if rows and rows[0]["dim_XBn"] != rho.rho * X.dim:
            raise WitnessCheckFailed("dim(XB) differs from rho dim(X)")
    if spec_rows:
        q["A_powers"] = spec_rows
    return CheckReport(name, ok, asserted, q, {"X": X})


def plunnecke_powers(A: SetInstance, B: SetInstance, n_max: int = 4, mode: str = "auto", budget: int = DEFAULT_RHO_BUDGET) -> CheckReport:
    """dim(X B^n) <= alpha^n dim X for the minimizer X, alpha = dim(AB)/dim(A)."""
    _require_nonempty(A, B)
    b = _require_same_backend(A, B)
    _require_division(b)
    if not b.is_commutative and not _commute(b, A.values, B.values):
        raise CommutationFailure("A and B do not commute elementwise")
    alpha = Fraction(span_product(A, B).dim, span_of(A).dim)
    rho = rho_minimize(A, B, mode, budget)
    return _powers_report("plunnecke", A, B, rho.X, alpha, n_max, rho.mode == "exhaustive", rho)


def ruzsa_triple_check(A: SetInstance, B: SetInstance, C: SetInstance) -> CheckReport:
    """dim(ABC)^2 <= dim(AB) dim(BC) max_b dim(AbC) (and dim(AC) if commutative)."""
    _require_nonempty(A, B, C)
    b = _require_same_backend(A, B, C)
    _require_division(b)
    return _triple(A, B, C, "ruzsa_triple", True)


def _triple(A, B, C, name, asserted):
    b = A.backend
    SA, SC = span_of(A), span_of(C)
    abc = span_product(A, B, C).dim
    ab = span_product(A, B).dim
    bc = span_product(B, C).dim
    m = max(span_product(SA, _single(b, x), SC).dim for x in B.values)
    main = abc * abc <= ab * bc * m
    q = {"dim_ABC": abc, "dim_AB": ab, "dim_BC": bc, "max_AbC": m, "lhs": abc * abc, "rhs": ab * bc * m}
    ok = main
    if b.is_commutative:
        ac = span_product(A, C).dim
        q["dim_AC"] = ac
        q["rhs_commutative"] = ab * bc * ac
        ok = ok and abc * abc <= ab * bc * ac
    return CheckReport(name, ok, asserted, q)


def cube_bound_check(A: SetInstance) -> CheckReport:
    """dim(A^3)^2 <= n^3 and m^2 dim(A^3) <= n^3 with m = dim A, n = dim A^2."""
    _require_nonempty(A)
    b = A.backend
    _require_commutative_division(b)
    SA = span_of(A)
    A2 = product_of_subspaces(SA, SA)
    A3 = product_of_subspaces(A2, SA)
    m, n, c = SA.dim, A2.dim, A3.dim
    ok = c * c <= n**3 and m * m * c <= n**3
    return CheckReport("cube_bound", ok, True, {"m": m, "n": n, "dim_A3": c, "c2": c * c, "m2c": m * m * c, "n3": n**3})


# ---------------------------------------------------------------------------
# Dyson transform


@dataclass
class DysonWitness:
    H: Subspace
    V: Subspace
    a: object
    depth: int
    dim_A: int
    dim_B: int
    checks: dict

    @property
    def holds(self):
        return all(self.checks.values())

    def to_json(self):
        return {
            "checker": "dyson",
            "H": self.H.to_json(),
            "V": self.V.to_json(),
            "a": self.V.backend.format(self.a),
            "depth": self.depth,
            "dim_A": self.dim_A,
            "dim_B": self.dim_B,
            "dim_H": self.H.dim,
            "dim_V": self.V.dim,
            "checks": self.checks,
            "holds": self.holds,
        }


def _dyson_core(SA: Subspace, SB: Subspace, depth: int, budget: int):
    """Witness (H, V) for 1 in SA and SB: HV = V, SB <= V <= SA*SB, dims."""
    b = SA.backend
    if SA.dim == 1:
        return Subspace.base_field(b), SB, depth
    AB = product_of_subspaces(SA, SB)
    if AB == SB:
        return division_closure(SA, budget), SB, depth
    # AB != SB and SB <= AB, so some basis vector e of SB has SA*e outside SB;
    # then A(e) = SA meet SB e^-1 is strictly smaller than SA and contains 1
    for e in SB.basis_values():
        Ae = translate(e, SA, "right")
        if not SB.contains_subspace(Ae):
            SAe = SA & translate(b.inv(e), SB, "right")
            SBe = SB + Ae
            if not SAe.dim < SA.dim or SAe.dim + SBe.dim != SA.dim + SB.dim:
                raise WitnessCheckFailed("Dyson transform did not shrink A or lost dimension")
            return _dyson_core(SAe, SBe, depth + 1, budget)
    raise WitnessCheckFailed("no Dyson pivot found although AB != B")


def dyson_transform(A: SetInstance, B: SetInstance, a=None, budget: int = 64) -> DysonWitness:
    """Subfield H and space V with HV = V, k<aB> <= V <= k<AB>, dim V + dim H >= dim A + dim B."""
    _require_nonempty(A, B)
    b = _require_same_backend(A, B)
    _require_division(b)
    if not A.is_commutative_set():
        raise NonCommutativeA("A is not commutative")
    SA0, SB0 = span_of(A), span_of(B)
    av = A.values[0] if a is None else (a.value if isinstance(a, Element) else a)
    if b.is_zero(av) or not SA0.contains(av):
        raise UsageError("a must be a nonzero element of k<A>")
    bv = B.values[0]
    SA = translate(b.inv(av), SA0, "left")
    SB = translate(b.inv(bv), SB0, "right")
    H, Vp, depth = _dyson_core(SA, SB, 0, budget)
    V = translate(av, translate(bv, Vp, "right"), "left")
    AB = product_of_subspaces(SA0, SB0)
    aB = translate(av, SB0, "left")
    checks = {
        "HV_eq_V": product_of_subspaces(H, V) == V,
        "aB_in_V": V.contains_subspace(aB),
        "V_in_AB": AB.contains_subspace(V),
        "dim_bound": V.dim + H.dim >= SA0.dim + SB0.dim,
        "H_is_field": H.contains(b.one) and H.contains_subspace(product_of_subspaces(H, H)),
    }
    w = DysonWitness(H, V, av, depth, SA0.dim, SB0.dim, checks)
    if not w.holds:
        raise WitnessCheckFailed(f"Dyson witness invariants failed: {checks}")
    return w


# ---------------------------------------------------------------------------
# Diderrich-type dichotomy


def diderrich_check(As: Sequence[SetInstance]) -> CheckReport:
    """Either dim(A_1...A_n) >= sum dim A_i - (n-1) or the product span is periodic.

    For n = 2 the periodic branch is left periodicity; for n > 2 both sides are
    evaluated and reported.  Asserted only when k is infinite and K/k separable.
    """
    As = list(As)
    if len(As) < 2:
        raise UsageError("need at least two sets")
    _require_nonempty(*As)
    b = _require_same_backend(*As)
    _require_division(b)
    for A in As[:-1]:
        if not A.is_commutative_set():
            raise NonCommutativePrefix("A_1 .. A_{n-1} must be commutative")
    n = len(As)
    dims = [span_of(A).dim for A in As]
    P = span_product(*As)
    first = P.dim >= sum(dims) - (n - 1)
    left = stabilizer(P, "left").dim
    right = stabilizer(P, "right").dim if not b.is_commutative else left
    if n == 2:
        holds = first or left > 1
    else:
        holds = first or left > 1 or right > 1
    branch = "first" if first else ("periodic" if holds else "none")
    asserted = b.k_is_infinite and b.is_separable
    return CheckReport(
        "diderrich",
        holds,
        asserted,
        {"dims": dims, "dim_product": P.dim, "bound": sum(dims) - (n - 1), "dim_H_left": left, "dim_H_right": right, "branch": branch},
    )


# ---------------------------------------------------------------------------
# covers


@dataclass
class CoverWitness:
    H: Subspace
    X: list
    direction: str
    bounds: dict
    holds: bool
    asserted: bool = True
    case: int | None = None
    notes: list = field(default_factory=list)

    def to_json(self):
        b = self.H.backend
        return {
            "H": self.H.to_json(),
            "dim_H": self.H.dim,
            "X": [b.format(x) for x in self.X],
            "direction": self.direction,
            "case": self.case,
            "bounds": jsonable(self.bounds),
            "holds": self.holds,
            "asserted": self.asserted,
            "notes": list(self.notes),
        }


def aS_subring_search(as_: Sequence) -> CoverWitness | None:
    """Search V = k<a_S : S nonempty> for a sub division ring H strictly above k.

    Products a_S are taken in ascending index order.  Returns None when no
    H is found (possible only outside the infinite-k separable regime).
    """
    vals = [x.value if isinstance(x, Element) else x for x in as_]
    if not as_:
        raise WrongArity("need dim K elements")
    b = as_[0].backend if isinstance(as_[0], Element) else None
    if b is None:
        raise UsageError("pass Elements")
    n = b.dimension
    if n is None or not b.is_division_ring:
        raise UnsupportedBackend("needs a finite-dimensional division backend")
    if len(vals) != n:
        raise WrongArity(f"expected {n} elements, got {len(vals)}")
    for v in vals:
        if b.is_zero(v):
            raise UsageError("elements must be nonzero")
        if v == b.one:
            raise OneElement("elements must differ from 1")
    prods = []
    for r in range(1, n + 1):
        for S in itertools.combinations(range(n), r):
            acc = vals[S[0]]
            for i in S[1:]:
                acc = b.mul(acc, vals[i])
            prods.append(acc)
    V = Subspace.from_values(b, prods)
    asserted = b.k_is_infinite and b.is_separable
    notes = ["a_S products use ascending index order"]
    one_in_V = V.contains(b.one)
    found = None
    how = None
    if one_in_V:
        for side in ("left", "right"):
            st = stabilizer(V, side)
            if st.dim > 1:
                found, how = st.H, f"{side} stabilizer"
                break
    if found is None and isinstance(b.k, PrimeField) and b.is_commutative:
        for d in range(2, n + 1):
            if n % d == 0:
                F = ff_subfield(b, d)
                if V.contains_subspace(F):
                    found, how = F, f"subfield of degree {d}"
                    break
    if found is None:
        for v in V.basis_values():
            try:
                D = division_closure([Element(b, v)], budget=n)
            except BudgetExceeded:
                continue
            if D.dim > 1 and V.contains_subspace(D):
                found, how = D, "division closure of a basis vector"
                break
    if found is None:
        return None
    ok = found.dim > 1 and V.contains_subspace(found) and found.contains_subspace(product_of_subspaces(found, found))
    return CoverWitness(found, [], "H <= V", {"dim_V": V.dim, "dim_H": found.dim, "one_in_V": one_in_V}, ok, asserted, notes=notes + [how])


def small_doubling_cover(A: SetInstance, epsilon) -> CoverWitness:
    """k<A^2> = (+)_{x in X} xH with |X| <= 2/eps - 1 and dim H >= eps dim A."""
    eps = Fraction(epsilon)
    if not 0 < eps <= 1:
        raise UsageError("epsilon must lie in (0, 1]")
    _require_nonempty(A)
    b = A.backend
    _require_commutative_division(b)
    SA = span_of(A)
    A2 = product_of_subspaces(SA, SA)
    if A2.dim > (2 - eps) * SA.dim:
        raise HypothesisFailed(f"dim A^2 = {A2.dim} > (2 - eps) dim A = {(2 - eps) * SA.dim}")
    H = stabilizer(A2, "left").H
    X = coset_decompose(A2, H, "left")
    bound = 2 / eps - 1
    ok = len(X) <= bound and H.dim >= eps * SA.dim
    return CoverWitness(H, X, "xH", {"size_X": len(X), "size_bound": bound, "dim_H": H.dim, "dim_bound": eps * SA.dim, "dim_A2": A2.dim}, ok, b.is_separable)


# ---------------------------------------------------------------------------
# unital algebras (group algebras)


def _require_ga(b):
    if b.kind != "GA":
        raise UnsupportedBackend("algebra checkers expect a group algebra backend")


def _all_units(b, S: SetInstance) -> bool:
    return all(b.is_unit(v) for v in S.values)


def algebra_petridis(A: SetInstance, B: SetInstance, C, budget: int = DEFAULT_RHO_BUDGET) -> CheckReport:
    """Petridis bound in a unital algebra: B meets the units, C consists of units."""
    _require_nonempty(A, B)
    b = _require_same_backend(A, B)
    _require_ga(b)
    if not any(b.is_unit(v) for v in B.values):
        raise UnitPreconditionFailed("B contains no unit")
    Cs = [C] if isinstance(C, SetInstance) else list(C)
    for Ci in Cs:
        if not _all_units(b, Ci):
            raise UnitPreconditionFailed("C must consist of units")
    alpha = Fraction(span_product(A, B).dim, span_of(A).dim)
    rho = rho_minimize(A, B, "auto", budget)
    SB = span_of(B)
    rows = []
    ok = True
    for Ci in Cs:
        dcx, dcxb = _cxb(Ci, rho.X, SB)
        good = dcxb <= rho.rho * dcx and dcxb <= alpha * dcx
        ok = ok and good
        rows.append({"dim_CX": dcx, "dim_CXB": dcxb, "rho_bound": rho.rho * dcx, "alpha_bound": alpha * dcx, "holds": good})
    return CheckReport("algebra_petridis", ok, rho.mode == "exhaustive", {"alpha": alpha, "rho": rho.rho, "dim_X": rho.X.dim, "cases": rows}, {"X": rho.X})


def algebra_plunnecke(A: SetInstance, B: SetInstance, n_max: int = 4, budget: int = DEFAULT_RHO_BUDGET) -> CheckReport:
    """dim(XB^n) <= alpha^n dim X in a commutative group algebra with B of units."""
    _require_nonempty(A, B)
    b = _require_same_backend(A, B)
    _require_ga(b)
    if not b.is_commutative:
        raise NonAbelianForThAlg1("the algebra must be commutative")
    if not _all_units(b, B):
        raise UnitPreconditionFailed("B must consist of units")
    alpha = Fraction(span_product(A, B).dim, span_of(A).dim)
    rho = rho_minimize(A, B, "auto", budget)
    with_A = _all_units(b, A)
    return _powers_report("algebra_plunnecke", A, B, rho.X, alpha, n_max, rho.mode == "exhaustive", rho, with_A)


def algebra_triple(A: SetInstance, B: SetInstance, C: SetInstance) -> CheckReport:
    """Triple-product bound in a unital algebra with B of units."""
    _require_nonempty(A, B, C)
    b = _require_same_backend(A, B, C)
    _require_ga(b)
    if not _all_units(b, B):
        raise UnitPreconditionFailed("B must consist of units")
    return _triple(A, B, C, "algebra_triple", True)
