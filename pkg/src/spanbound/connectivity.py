"""Linear connectivity c(W) = dim(WV) - lam dim(W), fragments, atoms, and the
small-doubling classifier built on the atom containing 1."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BudgetExceeded,
    HypothesisFailed,
    LambdaTooLarge,
    UsageError,
    WitnessCheckFailed,
    ZeroSubspace,
)
from .fields import PrimeField
from .spans import (
    Subspace,
    count_subspaces_containing_one,
    gaussian_binomial,
    iter_subspaces,
    iter_subspaces_containing_one,
    product_of_subspaces,
    translate,
)
from .structure import coset_decompose, division_closure, translate_covered
from .theorems import CheckReport, CoverWitness

DEFAULT_ATOM_BUDGET = 200_000
MAX_PAIR_CHECKS = 4000


@dataclass(frozen=True)
class ConnectivityContext:
    V: Subspace
    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))

    @property
    def backend(self):
        return self.V.backend


def connectivity_cost(W: Subspace, ctx: ConnectivityContext) -> Fraction:
    if not W.dim:
        raise ZeroSubspace("c is undefined on the zero subspace")
    return product_of_subspaces(W, ctx.V).dim - ctx.lam * W.dim


@dataclass
class AtomReport:
    kappa: Fraction
    atom: Subspace
    fragments: list
    exact: bool
    atom_is_division_ring: bool
    atom_unique: bool
    atoms_left_translates: bool | None
    atoms_right_translates: bool | None
    lattice_ok: bool
    atoms_disjoint: bool | None
    lower_bound_ok: bool
    enumerated: int = 0
    notes: list = field(default_factory=list)

    @property
    def holds(self):
        flags = [self.atom_is_division_ring, self.atom_unique, self.lattice_ok, self.lower_bound_ok]
        flags += [f for f in (self.atoms_left_translates, self.atoms_disjoint) if f is not None]
        return all(flags)

    def to_json(self):
        return {
            "checker": "atoms",
            "kappa": str(self.kappa),
            "atom": self.atom.to_json(),
            "dim_atom": self.atom.dim,
            "fragments_containing_one": len(self.fragments),
            "exact": self.exact,
            "atom_is_division_ring": self.atom_is_division_ring,
            "atom_unique": self.atom_unique,
            "atoms_left_translates": self.atoms_left_translates,
            "atoms_right_translates": self.atoms_right_translates,
            "lattice_ok": self.lattice_ok,
            "atoms_disjoint": self.atoms_disjoint,
            "lower_bound_ok": self.lower_bound_ok,
            "enumerated": self.enumerated,
            "holds": self.holds,
            "notes": list(self.notes),
        }


def _exact_possible(b) -> bool:
    return isinstance(b.k, PrimeField) and b.dimension is not None and b.is_division_ring


def _closed(H: Subspace) -> bool:
    return H.contains(H.backend.one) and H.contains_subspace(product_of_subspaces(H, H))


def kappa_and_atoms(ctx: ConnectivityContext, budget: int = DEFAULT_ATOM_BUDGET, check_translates: bool = True) -> AtomReport:
    """kappa, fragments containing 1 and the atom containing 1.

    Since c(xW) = c(W), every value of c is attained on a subspace containing 1,
    so enumerating those is complete.  Needs a finite base field and finite
    dim K; otherwise a heuristic candidate family is used (``exact=False``).
    """
    if ctx.lam >= 1:
        raise LambdaTooLarge("lambda must be < 1")
    b = ctx.backend
    if not _exact_possible(b):
        return _heuristic_atoms(ctx)
    K = Subspace.whole(b)
    n, p = K.dim, b.k.p
    total = count_subspaces_containing_one(n, p)
    if total > budget:
        raise BudgetExceeded(f"{total} subspaces containing 1 exceed the budget {budget}")
    costs = []
    lower_ok = True
    for W in iter_subspaces_containing_one(K):
        c = connectivity_cost(W, ctx)
        lower_ok = lower_ok and c >= (1 - ctx.lam) * W.dim
        costs.append((c, W))
    kappa = min(c for c, _ in costs)
    frags = [W for c, W in costs if c == kappa]
    hmin = min(W.dim for W in frags)
    atoms1 = [W for W in frags if W.dim == hmin]
    H = atoms1[0]
    notes = []
    # fragments with nonzero intersection: sum and meet are fragments
    lattice_ok = True
    checked = 0
    fset = set(frags)
    for W1, W2 in itertools.combinations(frags, 2):
        if checked >= MAX_PAIR_CHECKS:
            notes.append(f"fragment lattice checked on the first {MAX_PAIR_CHECKS} pairs")
            break
        checked += 1
        s, m = W1 + W2, W1 & W2
        if s not in fset or m not in fset:
            lattice_ok = False
    left = right = disjoint = None
    enumerated = total
    if check_translates:
        cnt = gaussian_binomial(n, hmin, p)
        if cnt <= budget:
            enumerated += cnt
            atoms = [W for W in iter_subspaces(K, [hmin]) if connectivity_cost(W, ctx) == kappa]
            left = right = True
            for W in atoms:
                w = W.basis_values()[0]
                left = left and translate(b.inv(w), W, "left") == H
                right = right and translate(b.inv(w), W, "right") == H
            disjoint = True
            for W1, W2 in itertools.islice(itertools.combinations(atoms, 2), MAX_PAIR_CHECKS):
                if (W1 & W2).dim:
                    disjoint = False
        else:
            notes.append("atom translate check skipped: over budget")
    return AtomReport(
        kappa=kappa,
        atom=H,
        fragments=frags,
        exact=True,
        atom_is_division_ring=_closed(H),
        atom_unique=len(atoms1) == 1,
        atoms_left_translates=left,
        atoms_right_translates=right,
        lattice_ok=lattice_ok,
        atoms_disjoint=disjoint,
        lower_bound_ok=lower_ok,
        enumerated=enumerated,
        notes=notes,
    )


def _heuristic_atoms(ctx: ConnectivityContext) -> AtomReport:
    """Best candidate among k, spans V v^-1 and their closures (report only)."""
    b = ctx.backend
    V = ctx.V
    cands = [Subspace.base_field(b)]
    for v in V.basis_values():
        cands.append(translate(b.inv(v), V, "right"))
        try:
            cands.append(division_closure(cands[-1], budget=16))
        except BudgetExceeded:
            pass
    if b.dimension is not None and b.kind != "RF":
        cands.append(Subspace.whole(b))
    cands = [W for W in cands if W.contains(b.one)]
    scored = [(connectivity_cost(W, ctx), W.dim, i, W) for i, W in enumerate(cands)]
    kappa, _, _, H = min(scored, key=lambda t: (t[0], t[1], t[2]))
    frags = [W for c, _, _, W in scored if c == kappa]
    return AtomReport(
        kappa=kappa,
        atom=H,
        fragments=frags,
        exact=False,
        atom_is_division_ring=_closed(H),
        atom_unique=True,
        atoms_left_translates=None,
        atoms_right_translates=None,
        lattice_ok=True,
        atoms_disjoint=None,
        lower_bound_ok=all(c >= (1 - ctx.lam) * W.dim for c, _, _, W in scored),
        enumerated=len(cands),
        notes=["heuristic candidate family; not asserted"],
    )


def submodularity_check(W1: Subspace, W2: Subspace, ctx: ConnectivityContext) -> CheckReport:
    """c(W1 + W2) + c(W1 meet W2) <= c(W1) + c(W2); not applicable if the meet is 0."""
    meet = W1 & W2
    if not meet.dim or not W1.dim or not W2.dim:
        return CheckReport("submodularity", True, False, {"status": "not-applicable"})
    lhs = connectivity_cost(W1 + W2, ctx) + connectivity_cost(meet, ctx)
    rhs = connectivity_cost(W1, ctx) + connectivity_cost(W2, ctx)
    return CheckReport("submodularity", lhs <= rhs, True, {"status": "checked", "lhs": lhs, "rhs": rhs})


def tao_classify(V: Subspace, W: Subspace, epsilon, budget: int = DEFAULT_ATOM_BUDGET) -> CoverWitness:
    """Cover V by translates Hx of the atom H for lam = 1 - eps/2.

    case 1: V inside a single Hx, and dim H <= (2/eps - 1) dim V;
    case 2: V inside (+)_{x in X} Hx with |X| <= 2/eps - 1 and
            dim H <= ((2/eps - 1)/(2/eps + 1)) dim V.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < 2:
        raise UsageError("epsilon must lie in (0, 2)")
    if W.dim < V.dim:
        raise HypothesisFailed("dim W must be >= dim V")
    WV = product_of_subspaces(W, V)
    if WV.dim > (2 - eps) * V.dim:
        raise HypothesisFailed(f"dim WV = {WV.dim} > (2 - eps) dim V = {(2 - eps) * V.dim}")
    b = V.backend
    ctx = ConnectivityContext(V, 1 - eps / 2)
    rep = kappa_and_atoms(ctx, budget, check_translates=False)
    H = rep.atom
    t = 2 / eps - 1
    x = translate_covered(V, H, "left")
    notes = [] if rep.exact else ["heuristic atom; report only"]
    if x is not None:
        bound = t * V.dim
        ok = H.dim <= bound and product_of_subspaces(H, Subspace.from_values(b, [x])).contains_subspace(V)
        return CoverWitness(H, [x], "Hx", {"dim_H": H.dim, "dim_bound": bound, "kappa": rep.kappa}, ok, rep.exact, case=1, notes=notes)
    HV = product_of_subspaces(H, V)
    X = coset_decompose(HV, H, "left")
    cover = Subspace.zero(b)
    for xi in X:
        cover = cover + product_of_subspaces(H, Subspace.from_values(b, [xi]))
    if cover != HV:
        raise WitnessCheckFailed("coset cover does not rebuild HV")
    bound2 = (t / (2 / eps + 1)) * V.dim
    ok = len(X) <= t and cover.contains_subspace(V) and H.dim <= bound2 and H.dim <= t * V.dim
    return CoverWitness(
        H,
        X,
        "(+) Hx",
        {"size_X": len(X), "size_bound": t, "dim_H": H.dim, "dim_bound": bound2, "dim_HV": HV.dim, "kappa": rep.kappa},
        ok,
        rep.exact,
        case=2,
        notes=notes,
    )
