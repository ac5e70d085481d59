"""Command-line front end: instance files, seeded fuzzing and reports.

Exit codes: 0 all asserted checks hold, 1 an asserted check failed (a
counterexample is written), 2 usage or backend error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import csv
import hashlib
import io
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .connectivity import ConnectivityContext, kappa_and_atoms, submodularity_check, tao_classify
from .correspondence import (
    correspondence_report,
    embed_torsion_free,
    group_kneser_check,
    group_plunnecke_check,
    group_ruzsa_check,
    to_group_algebra,
)
from .errors import (
    BudgetExceeded,
    HypothesisFailed,
    IncompatibleChecker,
    ReportParseError,
    SpanboundError,
    UsageError,
    WitnessCheckFailed,
)
from .groups import AbelianGroup, GroupSet, group_from_spec, parse_cayley_text
from .scalars import Backend, backend_create
from .spans import SetInstance, Subspace, _combine, product_of_subspaces, span_of, translate
from .structure import coset_decompose, division_closure, ff_subfield, stabilizer
from .theorems import (
    DEFAULT_RHO_BUDGET,
    algebra_petridis,
    algebra_plunnecke,
    algebra_triple,
    aS_subring_search,
    cube_bound_check,
    diderrich_check,
    dyson_transform,
    jsonable,
    kneser_check,
    kneser_nfold,
    petridis_check,
    plunnecke_powers,
    rho_minimize,
    ruzsa_triple_check,
    small_doubling_cover,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

GROUP_CHECKERS = ("correspondence", "group_kneser", "group_plunnecke", "group_ruzsa", "embed")


def instance_seed(master: int, i: int) -> int:
    """Per-instance seed: first 64 bits of sha256("master:i")."""
    return int(hashlib.sha256(f"{master}:{i}".encode()).hexdigest()[:16], 16)


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# instances


@dataclass
class Instance:
    raw: dict
    backend: Backend | None
    group: object | None
    field: str | None
    sets: dict
    queries: list
    seed: int

    @property
    def is_group(self) -> bool:
        return self.group is not None


def _parse_group_element(G, item):
    if isinstance(item, str):
        return G.parse_element(item)
    if isinstance(item, list):
        item = tuple(item)
    return G.check(item)


def parse_instance(data, base_dir: Path | None = None) -> Instance:
    """Validate an instance dict and build its backend and sets."""
    if not isinstance(data, dict):
        raise UsageError("instance must be a JSON object")
    raw_sets = data.get("sets")
    if not isinstance(raw_sets, dict) or not raw_sets:
        raise UsageError("instance needs a nonempty 'sets' object")
    if "queries" in data:
        queries = data["queries"]
    elif "query" in data:
        queries = [data["query"]]
    else:
        raise UsageError("instance needs 'query' or 'queries'")
    if not isinstance(queries, list) or not all(isinstance(q, dict) and "checker" in q for q in queries):
        raise UsageError("every query must be an object with a 'checker'")
    seed = int(data.get("seed", 0))
    backend = group = None
    fld = data.get("field")
    if "cayley_file" in data:
        path = Path(data["cayley_file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            group = parse_cayley_text(path.read_text())
        except OSError as exc:
            raise UsageError(f"cannot read Cayley table: {exc}") from None
    elif "group" in data:
        group = group_from_spec(data["group"])
    elif "backend" in data:
        backend = backend_create(data["backend"])
    else:
        raise UsageError("instance needs 'backend', 'group' or 'cayley_file'")
    sets = {}
    for name, items in raw_sets.items():
        if not isinstance(items, list):
            raise UsageError(f"set {name!r} must be a list")
        if group is not None:
            sets[name] = GroupSet(group, tuple(_parse_group_element(group, it) for it in items))
        else:
            sets[name] = SetInstance.of(backend, [str(it) if not isinstance(it, str) else it for it in items], name=name)
    for q in queries:
        for name in q.get("sets", []):
            if name not in sets:
                raise UsageError(f"query references undefined set {name!r}")
    return Instance(data, backend, group, fld, sets, queries, seed)


def load_instance(path) -> Instance:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_instance(data, p.parent)


# ---------------------------------------------------------------------------
# running one query


def _query_sets(inst: Instance, q: dict, arity: int | None = None) -> list:
    names = q.get("sets") or sorted(inst.sets)
    if arity is not None:
        names = names[:arity]
        if len(names) < arity:
            raise UsageError(f"checker {q['checker']!r} needs {arity} sets")
    return [inst.sets[n] for n in names]


def _random_sets(b: Backend, rng: random.Random, count: int, max_size: int = 3) -> list:
    out = []
    for j in range(count):
        n = rng.randint(1, max_size)
        out.append(SetInstance(b, tuple(b.sample(rng) for _ in range(n)), name=f"C{j}"))
    return out


def _status(holds: bool, asserted: bool, mode: str) -> str:
    if holds:
        return "pass"
    return "fail" if asserted and mode == "assert" else "finding"


def _run_backend_query(inst: Instance, q: dict, budget: int | None):
    """Dispatch one checker; returns (holds, asserted, payload)."""
    name = q["checker"]
    b = inst.backend
    seed = int(q.get("seed", inst.seed))
    rbudget = budget if budget is not None else int(q.get("budget", DEFAULT_RHO_BUDGET))
    if name == "kneser":
        A, B = _query_sets(inst, q, 2)
        r = kneser_check(A, B)
        return r.holds, r.asserted, r.to_json()
    if name == "kneser_nfold":
        r = kneser_nfold(_query_sets(inst, q))
        out = r.to_json()
        out["checker"] = "kneser_nfold"
        return r.holds, r.asserted, out
    if name == "span":
        rows = {s.name: {"dim": span_of(s).dim, "size": len(s)} for s in _query_sets(inst, q)}
        return True, True, {"checker": "span", "quantities": rows}
    if name == "rho":
        A, B = _query_sets(inst, q, 2)
        r = rho_minimize(A, B, q.get("rho_mode", "exhaustive"), rbudget, seed)
        return True, True, {"checker": "rho", "quantities": {"rho": r.rho, "dim_X": r.X.dim, "mode": r.mode, "consumed": r.consumed}, "witness": {"X": r.X}}
    if name == "petridis":
        sets = _query_sets(inst, q)
        if len(sets) < 2:
            raise UsageError("petridis needs sets A, B and optionally C")
        A, B, Cs = sets[0], sets[1], list(sets[2:])
        Cs += _random_sets(b, random.Random(seed), int(q.get("c_count", 0 if Cs else 1)))
        rho = rho_minimize(A, B, "exhaustive", rbudget, seed)
        r = petridis_check(A, B, Cs, rho)
        return r.holds, r.asserted, r.to_json()
    if name == "plunnecke":
        A, B = _query_sets(inst, q, 2)
        r = plunnecke_powers(A, B, int(q.get("n_max", 4)), q.get("rho_mode", "auto"), rbudget)
        return r.holds, r.asserted, r.to_json()
    if name == "ruzsa_triple":
        r = ruzsa_triple_check(*_query_sets(inst, q, 3))
        return r.holds, r.asserted, r.to_json()
    if name == "cube_bound":
        r = cube_bound_check(*_query_sets(inst, q, 1))
        return r.holds, r.asserted, r.to_json()
    if name == "dyson":
        A, B = _query_sets(inst, q, 2)
        a = b.parse(q["a"]) if "a" in q else None
        w = dyson_transform(A, B, a, int(q.get("closure_budget", 64)))
        return w.holds, True, w.to_json()
    if name == "diderrich":
        r = diderrich_check(_query_sets(inst, q))
        return r.holds, r.asserted, r.to_json()
    if name == "stabilizer":
        (A,) = _query_sets(inst, q, 1)
        st = stabilizer(span_of(A), q.get("side", "left"))
        V = span_of(A)
        reps = None
        if b.is_division_ring:
            reps = coset_decompose(V, st.H, st.side)
        payload = {"checker": "stabilizer", "quantities": {"dim_V": V.dim, "dim_H": st.dim, "cosets": None if reps is None else len(reps)}, "witness": st.to_json()}
        if reps is not None:
            payload["witness"]["S"] = [b.format(x) for x in reps]
        ok = st.contains_one and st.is_multiplicatively_closed and (reps is None or len(reps) * st.dim == V.dim)
        return ok, True, payload
    if name == "division_closure":
        (A,) = _query_sets(inst, q, 1)
        D = division_closure(A, int(q.get("closure_budget", 64)))
        return True, True, {"checker": "division_closure", "quantities": {"dim": D.dim}, "witness": {"D": D}}
    if name == "small_doubling":
        (A,) = _query_sets(inst, q, 1)
        w = small_doubling_cover(A, Fraction(str(q.get("epsilon", "1"))))
        out = w.to_json()
        out["checker"] = "small_doubling"
        return w.holds, w.asserted, out
    if name == "aS_subring":
        (A,) = _query_sets(inst, q, 1)
        w = aS_subring_search(A.elements)
        asserted = b.k_is_infinite and b.is_separable
        if w is None:
            return False, asserted, {"checker": "aS_subring", "quantities": {"found": False}}
        out = w.to_json()
        out["checker"] = "aS_subring"
        return w.holds, w.asserted, out
    if name == "atoms":
        (A,) = _query_sets(inst, q, 1)
        ctx = ConnectivityContext(span_of(A), Fraction(str(q.get("lambda", "1/2"))))
        r = kappa_and_atoms(ctx, budget if budget is not None else int(q.get("budget", 200_000)))
        return r.holds, r.exact, r.to_json()
    if name == "submodularity":
        V, W1, W2 = _query_sets(inst, q, 3)
        ctx = ConnectivityContext(span_of(V), Fraction(str(q.get("lambda", "1/2"))))
        r = submodularity_check(span_of(W1), span_of(W2), ctx)
        return r.holds, r.asserted, r.to_json()
    if name == "tao":
        V, W = _query_sets(inst, q, 2)
        w = tao_classify(span_of(V), span_of(W), Fraction(str(q.get("epsilon", "1"))), budget if budget is not None else int(q.get("budget", 200_000)))
        out = w.to_json()
        out["checker"] = "tao"
        return w.holds, w.asserted, out
    if name == "algebra_petridis":
        sets = _query_sets(inst, q)
        if len(sets) < 3:
            raise UsageError("algebra_petridis needs sets A, B, C")
        r = algebra_petridis(sets[0], sets[1], list(sets[2:]), rbudget)
        return r.holds, r.asserted, r.to_json()
    if name == "algebra_plunnecke":
        A, B = _query_sets(inst, q, 2)
        r = algebra_plunnecke(A, B, int(q.get("n_max", 4)), rbudget)
        return r.holds, r.asserted, r.to_json()
    if name == "algebra_triple":
        r = algebra_triple(*_query_sets(inst, q, 3))
        return r.holds, r.asserted, r.to_json()
    raise UsageError(f"unknown checker {name!r}")


def _run_group_query(inst: Instance, q: dict):
    name = q["checker"]
    k0 = inst.field
    if name == "correspondence":
        X, Y = _query_sets(inst, q, 2)
        r = correspondence_report(X, Y, k0)
    elif name == "group_kneser":
        r = group_kneser_check(*_query_sets(inst, q, 2), k0=k0)
    elif name == "group_plunnecke":
        X, Y = _query_sets(inst, q, 2)
        r = group_plunnecke_check(X, Y, int(q.get("n_max", 4)), k0)
    elif name == "group_ruzsa":
        r = group_ruzsa_check(*_query_sets(inst, q, 3), k0=k0)
    elif name == "embed":
        return True, True, embed_payload(inst, q)
    else:
        raise UsageError(f"unknown group checker {name!r}")
    return r.holds, r.asserted, r.to_json()


def embed_payload(inst: Instance, q: dict | None = None) -> dict:
    """A_X for every set, plus the torsion-free monomial model when it applies."""
    names = (q or {}).get("sets") or sorted(inst.sets)
    out = {"checker": "embed", "sets": {}}
    G = inst.group
    torsion_free = isinstance(G, AbelianGroup) and not G.factors and G.rank >= 1
    for n in names:
        X = inst.sets[n]
        A = embed_torsion_free(X, inst.field) if torsion_free else to_group_algebra(X, inst.field)
        out["backend"] = str(A.backend.descriptor)
        out["sets"][n] = {"size": len(X), "dim": span_of(A).dim, "elements": A.to_json()}
    return out


def run_query(inst: Instance, q: dict, mode: str | None = None, budget: int | None = None) -> dict:
    """One checker record; raises SpanboundError subclasses on usage or budget problems."""
    mode = mode or q.get("mode", "assert")
    if mode not in ("assert", "report"):
        raise UsageError(f"mode must be 'assert' or 'report', got {mode!r}")
    if inst.is_group:
        holds, asserted, payload = _run_group_query(inst, q)
        label = f"GROUP:{inst.group!r}"
    else:
        holds, asserted, payload = _run_backend_query(inst, q, budget)
        label = str(inst.backend.descriptor)
    return {
        "checker": q["checker"],
        "backend": label,
        "holds": bool(holds),
        "asserted": bool(asserted),
        "mode": mode,
        "status": _status(holds, asserted, mode),
        "result": jsonable(payload),
    }


@dataclass
class RunReport:
    records: list
    seed: int
    mode: str
    exit_status: int
    timing: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    def to_json(self, with_timing: bool = True) -> dict:
        out = {"records": self.records, "seed": self.seed, "mode": self.mode, "exit_status": self.exit_status}
        if self.counterexamples:
            out["counterexamples"] = self.counterexamples
        if with_timing:
            out["timing"] = self.timing
        return out


def run_instance(path_or_data, mode: str | None = None, budget: int | None = None) -> RunReport:
    """Run every query of an instance file; errors propagate as exceptions."""
    inst = load_instance(path_or_data) if isinstance(path_or_data, (str, Path)) else parse_instance(path_or_data)
    records, cexs, timing = [], [], {}
    status = EXIT_OK
    for i, q in enumerate(inst.queries):
        t0 = time.perf_counter()
        rec = run_query(inst, q, mode, budget)
        timing[str(i)] = round(time.perf_counter() - t0, 6)
        records.append(rec)
        if rec["status"] == "fail":
            status = EXIT_FAIL
            cexs.append({"instance": inst.raw, "query": q, "record": rec})
    return RunReport(records, inst.seed, mode or inst.queries[0].get("mode", "assert"), status, timing, cexs)


# ---------------------------------------------------------------------------
# witness round-trip


def _parse_span(b: Backend, strings) -> Subspace:
    vals = [b.parse(s) for s in strings]
    for s, v in zip(strings, vals):
        if b.format(v) != s:
            raise WitnessCheckFailed(f"witness element {s!r} does not round-trip")
    return Subspace.from_values(b, vals)


def reverify(instance_data: dict, record: dict) -> bool:
    """Re-parse the serialized witness of a record and re-check it from scratch."""
    inst = parse_instance(instance_data)
    q = next(q for q in inst.queries if q["checker"] == record["checker"])
    res = record["result"]
    name = record["checker"]
    if inst.is_group:
        return run_query(inst, q, record["mode"])["result"] == res
    b = inst.backend
    if name in ("kneser", "kneser_nfold"):
        H = _parse_span(b, res["H"])
        sets = _query_sets(inst, q, 2 if name == "kneser" else None)
        P = span_of(sets[0])
        for s in sets[1:]:
            P = product_of_subspaces(P, span_of(s))
        return H.dim == res["dim_H"] and P.dim == res["dim_product"] and product_of_subspaces(H, P) == P and H.contains(b.one)
    if name == "dyson":
        A, B = _query_sets(inst, q, 2)
        H, V = _parse_span(b, res["H"]), _parse_span(b, res["V"])
        a = b.parse(res["a"])
        AB = product_of_subspaces(span_of(A), span_of(B))
        return (
            product_of_subspaces(H, V) == V
            and V.contains_subspace(translate(a, span_of(B), "left"))
            and AB.contains_subspace(V)
            and V.dim + H.dim >= span_of(A).dim + span_of(B).dim
        )
    if name in ("petridis", "plunnecke", "rho"):
        A, B = _query_sets(inst, q, 2)
        X = _parse_span(b, res["witness"]["X"])
        rho = Fraction(res["quantities"]["rho"])
        return span_of(A).contains_subspace(X) and product_of_subspaces(X, span_of(B)).dim == rho * X.dim
    if name in ("small_doubling", "tao"):
        H = _parse_span(b, res["H"])
        X = [b.parse(s) for s in res["X"]]
        if [b.format(x) for x in X] != res["X"]:
            return False
        (A, *rest) = _query_sets(inst, q)
        V = span_of(A)
        target = product_of_subspaces(V, V) if name == "small_doubling" else V
        cover = Subspace.zero(b)
        side = "left" if name == "small_doubling" else "right"
        for x in X:
            cover = cover + translate(x, H, side)
        return cover.contains_subspace(target) and H.dim == res["dim_H"]
    if name == "stabilizer":
        (A,) = _query_sets(inst, q, 1)
        H = _parse_span(b, res["witness"]["basis"])
        V = span_of(A)
        side = res["witness"]["side"]
        HV = product_of_subspaces(H, V) if side == "left" else product_of_subspaces(V, H)
        return HV == V and H.contains(b.one)
    # other records carry only numbers; recompute and compare
    return run_query(inst, q, record["mode"])["result"] == res


# ---------------------------------------------------------------------------
# fuzzing


def _division(b):
    return b.is_division_ring


def _comm_division(b):
    return b.is_division_ring and b.is_commutative


def _finite_exact(b):
    return b.is_division_ring and not b.k_is_infinite and b.dimension is not None and b.kind != "RF"


def _ff(b):
    return b.kind == "FF"


def _ga(b):
    return b.kind == "GA"


def _ga_abelian(b):
    return b.kind == "GA" and b.is_commutative


COMPAT = {
    "kneser": _comm_division,
    "kneser_nfold": _comm_division,
    "cube_bound": _comm_division,
    "plunnecke": _comm_division,
    "petridis": lambda b: _division(b) and not b.k_is_infinite,
    "rho": lambda b: not b.k_is_infinite,
    "ruzsa_triple": _division,
    "dyson": _division,
    "diderrich": _division,
    "stabilizer": lambda b: b.is_division_ring or (b.kind == "GA" and b.group.is_finite),
    "small_doubling": _ff,
    "tao": _ff,
    "atoms": _finite_exact,
    "submodularity": _finite_exact,
    "algebra_petridis": lambda b: _ga(b) and not b.k_is_infinite,
    "algebra_plunnecke": lambda b: _ga_abelian(b) and not b.k_is_infinite,
    "algebra_triple": _ga,
    "correspondence": lambda b: _ga(b) and b.group.is_finite,
    "group_kneser": lambda b: _ga_abelian(b) and b.group.is_finite,
    "group_plunnecke": lambda b: _ga_abelian(b) and b.group.is_finite,
    "group_ruzsa": lambda b: _ga(b) and b.group.is_finite,
}


def check_compatible(b: Backend, checker: str):
    pred = COMPAT.get(checker)
    if pred is None:
        raise UsageError(f"checker {checker!r} cannot be fuzzed; known: {', '.join(sorted(COMPAT))}")
    if not pred(b):
        raise IncompatibleChecker(f"checker {checker!r} is not compatible with backend {b.descriptor}")


def _sample_set(b, rng, set_size, size, lo=1):
    return [b.format(b.sample(rng, size)) for _ in range(rng.randint(lo, set_size))]


def _powers_set(b, rng, set_size, size):
    g = b.sample(rng, size)
    return [b.format(b.pow(g, i)) for i in range(rng.randint(1, set_size))]


def _unit_set(b, rng, set_size, lo=1):
    k = b.k
    out = []
    for _ in range(rng.randint(lo, set_size)):
        c = k.zero
        while k.is_zero(c):
            c = k.random(rng, 3)
        out.append(b.format(((b.random_group_element(rng), c),)))
    return [b.format(b.parse(s)) for s in out]


def _subfield_set(b, rng, set_size):
    """x * (elements of a random proper-or-full subfield): small doubling by design."""
    n = b.dimension
    d = rng.choice([d for d in range(1, n + 1) if n % d == 0])
    H = ff_subfield(b, d)
    basis = H.basis_values()
    x = b.sample(rng)
    out = []
    for _ in range(rng.randint(1, set_size)):
        coeffs = [rng.randrange(b.p) for _ in basis]
        h = _combine(b, coeffs, basis)
        if not b.is_zero(h):
            out.append(b.format(b.mul(x, h)))
    if rng.random() < 0.3:
        out.append(b.format(b.sample(rng)))
    return out or [b.format(x)]


def generate_instance(b: Backend, checker: str, seed: int, set_size: int = 4, size=None, extra: dict | None = None) -> dict:
    """A seeded instance dict for ``checker`` on ``b`` (JSON-ready)."""
    rng = random.Random(seed)
    q = {"checker": checker, "seed": seed}
    q.update(extra or {})
    spec = str(b.descriptor)
    if checker in GROUP_CHECKERS:
        G = b.group
        arity = 3 if checker == "group_ruzsa" else 2
        sets = {}
        for name in "XYZ"[:arity]:
            m = rng.randint(1, set_size)
            sets[name] = sorted({G.format_element(b.random_group_element(rng)) for _ in range(m)})
        g = G.to_json()
        q["sets"] = sorted(sets)
        return {"group": g, "field": b.descriptor.field, "sets": sets, "query": q, "seed": seed}
    sets = {}
    if checker in ("kneser", "plunnecke", "dyson", "rho", "petridis"):
        sets["A"] = _sample_set(b, rng, set_size, size) if b.is_commutative or checker not in ("dyson",) else _powers_set(b, rng, set_size, size)
        sets["B"] = _sample_set(b, rng, set_size, size)
        if checker == "petridis":
            q.setdefault("c_count", 1)
    elif checker == "kneser_nfold":
        for name in "ABCD"[: rng.choice([3, 4])]:
            sets[name] = _sample_set(b, rng, set_size, size)
    elif checker == "diderrich":
        n = rng.choice([2, 3])
        for name in "ABC"[:n]:
            last = name == "ABC"[n - 1]
            sets[name] = _sample_set(b, rng, set_size, size) if b.is_commutative or last else _powers_set(b, rng, set_size, size)
    elif checker in ("ruzsa_triple", "algebra_triple"):
        for name in "ABC":
            sets[name] = _unit_set(b, rng, set_size) if name == "B" and _ga(b) else _sample_set(b, rng, set_size, size)
    elif checker in ("cube_bound", "stabilizer", "atoms"):
        sets["A"] = _sample_set(b, rng, set_size, size)
        if checker == "atoms":
            q.setdefault("lambda", rng.choice(["1/4", "1/2", "3/4"]))
    elif checker == "submodularity":
        for name in ("V", "W1", "W2"):
            sets[name] = _sample_set(b, rng, set_size, size)
        q.setdefault("lambda", rng.choice(["1/4", "1/2", "3/4"]))
    elif checker in ("small_doubling", "tao"):
        A = _subfield_set(b, rng, set_size)
        SA = span_of(SetInstance.of(b, A))
        r = Fraction(product_of_subspaces(SA, SA).dim, SA.dim)
        eps = 2 - r
        if checker == "small_doubling":
            eps = min(eps, Fraction(1))
        sets["A"] = A
        if checker == "tao":
            sets["W"] = list(A)
        q.setdefault("epsilon", str(eps))
    elif checker in ("algebra_petridis", "algebra_plunnecke"):
        sets["A"] = _sample_set(b, rng, set_size, size)
        sets["B"] = _unit_set(b, rng, set_size)
        if checker == "algebra_petridis":
            sets["C"] = _unit_set(b, rng, set_size)
    else:
        raise UsageError(f"no generator for checker {checker!r}")
    q.setdefault("sets", list(sets))
    return {"backend": spec, "sets": sets, "query": q, "seed": seed}


def _evaluate(data: dict, mode: str, budget):
    """(record or None, outcome) where outcome is pass/fail/finding/skipped/budget."""
    try:
        inst = parse_instance(data)
        rec = run_query(inst, inst.queries[0], mode, budget)
        return rec, rec["status"]
    except BudgetExceeded as exc:
        return {"error": type(exc).__name__, "message": str(exc)}, "budget"
    except WitnessCheckFailed as exc:
        status = "fail" if mode == "assert" else "finding"
        return {"checker": data["query"]["checker"], "error": type(exc).__name__, "message": str(exc), "status": status}, status
    except (HypothesisFailed, UsageError) as exc:
        return {"error": type(exc).__name__, "message": str(exc)}, "skipped"


def shrink(data: dict, mode: str, budget=None, bad=("fail", "finding")) -> dict:
    """Greedy deletion: drop single elements while the failure persists."""
    cur = json.loads(json.dumps(data))
    changed = True
    while changed:
        changed = False
        for name in list(cur["sets"]):
            i = 0
            while i < len(cur["sets"][name]):
                if len(cur["sets"][name]) <= 1:
                    break
                trial = json.loads(json.dumps(cur))
                del trial["sets"][name][i]
                _, outcome = _evaluate(trial, mode, budget)
                if outcome in bad:
                    cur = trial
                    changed = True
                else:
                    i += 1
    return cur


def _thread_count() -> int:
    env = os.environ.get("SPANBOUND_THREADS")
    try:
        n = int(env) if env else (os.cpu_count() or 1)
    except ValueError:
        raise UsageError("SPANBOUND_THREADS must be an integer") from None
    return max(1, n)


@dataclass
class FuzzResult:
    report: dict
    records: list
    findings: list
    counterexamples: list
    timing: dict
    exit_status: int


def fuzz(backend_spec, checker: str, count: int, seed: int, mode: str = "assert", set_size: int = 4, size=None, budget=None, out: str | Path | None = None, extra: dict | None = None) -> FuzzResult:
    """Seeded fuzzing; instance i uses seed sha256(f"{seed}:{i}")."""
    b = backend_create(backend_spec)
    check_compatible(b, checker)
    if mode not in ("assert", "report"):
        raise UsageError(f"mode must be 'assert' or 'report', got {mode!r}")
    if count < 0:
        raise UsageError("count must be >= 0")

    def one(i):
        s = instance_seed(seed, i)
        t0 = time.perf_counter()
        data = generate_instance(b, checker, s, set_size, size, extra)
        rec, outcome = _evaluate(data, mode, budget)
        return i, s, data, rec, outcome, time.perf_counter() - t0

    records, findings, cexs, timing = [], [], [], {}
    counts = {k: 0 for k in ("pass", "fail", "finding", "skipped", "budget")}
    slack = rho = None
    workers = _thread_count()
    t_start = time.perf_counter()
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        for i, s, data, rec, outcome, dt in pool.map(one, range(count)):
            timing[str(i)] = round(dt, 6)
            counts[outcome] += 1
            records.append({"index": i, "seed": s, "instance": data, "outcome": outcome, "record": rec})
            res = (rec or {}).get("result", {})
            if isinstance(res, dict):
                if "slack" in res:
                    slack = res["slack"] if slack is None else min(slack, res["slack"])
                r = res.get("quantities", {}).get("rho") if isinstance(res.get("quantities"), dict) else None
                if r is not None:
                    rho = r if rho is None or Fraction(r) > Fraction(rho) else rho
            if outcome == "finding":
                findings.append({"index": i, "seed": s, "instance": data, "record": rec})
            if outcome == "fail":
                small = shrink(data, mode, budget)
                cexs.append({"index": i, "seed": s, "instance": data, "shrunk": small, "record": rec})
                pool.shutdown(wait=False, cancel_futures=True)
                break
    timing["total"] = round(time.perf_counter() - t_start, 6)
    status = EXIT_FAIL if cexs else (EXIT_BUDGET if counts["budget"] else EXIT_OK)
    report = {
        "command": "fuzz",
        "backend": str(b.descriptor),
        "checker": checker,
        "count": count,
        "seed": seed,
        "mode": mode,
        "set_size": set_size,
        "counts": counts,
        "tightest_kneser_slack": slack,
        "largest_rho": rho,
        "exit_status": status,
        "digest": hashlib.sha256("\n".join(dumps(r) for r in records).encode()).hexdigest(),
    }
    if out is not None:
        _write_fuzz_outputs(Path(out), report, records, findings, cexs, timing)
    return FuzzResult(report, records, findings, cexs, timing, status)


class _LogWriter:
    """Appends JSON lines to one file; every write goes through here."""

    def __init__(self, path: Path):
        self.path = path

    def write_all(self, items, append: bool = False):
        with self.path.open("a" if append else "w") as fh:
            for it in items:
                fh.write(dumps(it) + "\n")


def _write_fuzz_outputs(out: Path, report, records, findings, cexs, timing):
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    (out / "timing.json").write_text(json.dumps(timing, sort_keys=True, indent=2) + "\n")
    _LogWriter(out / "records.jsonl").write_all(records)
    _LogWriter(out / "findings.jsonl").write_all(findings)
    _LogWriter(out / "counterexamples.jsonl").write_all(cexs, append=True)


# ---------------------------------------------------------------------------
# reports


def _iter_log_records(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise ReportParseError(f"cannot read {path}: {exc}") from None
    stripped = text.strip()
    if not stripped:
        return
    if path.suffix == ".json":
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ReportParseError(f"{path}: {exc.msg} at line {exc.lineno}") from None
        items = doc.get("records", []) if isinstance(doc, dict) else doc
        for it in items:
            yield it
        return
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError as exc:
            raise ReportParseError(f"{path}:{n}: {exc.msg}") from None


def _normalize(item) -> dict | None:
    if not isinstance(item, dict):
        raise ReportParseError("log entries must be JSON objects")
    rec = item.get("record", item)
    if rec is None or "checker" not in rec or "backend" not in rec:
        return None  # skipped instances carry no verdict
    if "status" not in rec:
        raise ReportParseError(f"record for {rec.get('checker')!r} has no status")
    return rec


def _record_slack(rec):
    res = rec.get("result") or {}
    if "slack" in res:
        return res["slack"]
    q = res.get("quantities") or {}
    return q.get("slack")


def _record_rho(rec):
    q = (rec.get("result") or {}).get("quantities") or {}
    r = q.get("rho") if isinstance(q, dict) else None
    return None if r is None else Fraction(str(r))


def summarize(paths) -> tuple[str, str]:
    """Markdown summary and CSV of raw quantities for a set of logs."""
    rows: dict = {}
    flat = []
    for p in paths:
        for item in _iter_log_records(Path(p)):
            rec = _normalize(item)
            if rec is None:
                continue
            key = (rec["checker"], rec["backend"])
            r = rows.setdefault(key, {"runs": 0, "pass": 0, "fail": 0, "finding": 0, "slack": None, "rho": None})
            r["runs"] += 1
            r[rec["status"]] = r.get(rec["status"], 0) + 1
            s = _record_slack(rec)
            if s is not None:
                r["slack"] = s if r["slack"] is None else min(r["slack"], s)
            rho = _record_rho(rec)
            if rho is not None:
                r["rho"] = rho if r["rho"] is None else max(r["rho"], rho)
            flat.append((rec, s, rho))
    md = ["| checker | backend | runs | pass | fail | findings | min slack | max rho |", "|---|---|---|---|---|---|---|---|"]
    for (chk, be), r in sorted(rows.items()):
        md.append(
            f"| {chk} | {be} | {r['runs']} | {r['pass']} | {r['fail']} | {r['finding']} | "
            f"{'' if r['slack'] is None else r['slack']} | {'' if r['rho'] is None else r['rho']} |"
        )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["checker", "backend", "status", "holds", "asserted", "slack", "rho", "quantities"])
    flat.sort(key=lambda t: (t[0]["checker"], t[0]["backend"]))
    for rec, s, rho in flat:
        res = rec.get("result") or {}
        q = res.get("quantities", {k: v for k, v in res.items() if k not in ("H", "V", "X", "witness", "notes")})
        w.writerow([rec["checker"], rec["backend"], rec["status"], rec.get("holds"), rec.get("asserted"), "" if s is None else s, "" if rho is None else rho, json.dumps(q, sort_keys=True)])
    return "\n".join(md) + "\n", buf.getvalue()


# ---------------------------------------------------------------------------
# argparse front end


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spanbound", description="Exact checks of dimension estimates for spans of product sets.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--budget", type=int, default=None, help="enumeration budget (subspaces visited)")
        p.add_argument("--mode", choices=("assert", "report"), default=None)
        p.add_argument("--out", default=None, help="output directory")

    p = sub.add_parser("check", help="run the queries of an instance file")
    p.add_argument("file")
    common(p)
    p = sub.add_parser("fuzz", help="seeded random instances for one checker")
    p.add_argument("--backend", required=True)
    p.add_argument("--checker", required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--set-size", type=int, default=4, help="maximum set size")
    p.add_argument("--size", type=int, default=None, help="element size budget for infinite backends")
    common(p)
    p = sub.add_parser("report", help="Markdown and CSV summary of run logs")
    p.add_argument("logs", nargs="*")
    p.add_argument("--out", default=None)
    p = sub.add_parser("atoms", help="connectivity, fragments and atoms of an instance")
    p.add_argument("file")
    common(p)
    p = sub.add_parser("embed-group", help="map group subsets into the group algebra")
    p.add_argument("file")
    common(p)
    return ap


def _emit(obj, out_dir, name):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text)


def _cmd_check(args) -> int:
    rep = run_instance(args.file, args.mode, args.budget)
    body = rep.to_json(with_timing=False)
    _emit(body, args.out, "report.json")
    if args.out:
        Path(args.out, "timing.json").write_text(json.dumps(rep.timing, sort_keys=True, indent=2) + "\n")
    if rep.counterexamples:
        d = Path(args.out or "spanbound-out")
        d.mkdir(parents=True, exist_ok=True)
        _LogWriter(d / "counterexamples.jsonl").write_all(rep.counterexamples, append=True)
        print(f"counterexample written to {d / 'counterexamples.jsonl'}", file=sys.stderr)
    return rep.exit_status


def _cmd_fuzz(args) -> int:
    res = fuzz(args.backend, args.checker, args.count, args.seed, args.mode or "assert", args.set_size, args.size, args.budget, args.out or "spanbound-out")
    sys.stdout.write(json.dumps(res.report, sort_keys=True, indent=2) + "\n")
    if res.counterexamples:
        print("asserted check failed; shrunk counterexample in counterexamples.jsonl", file=sys.stderr)
    return res.exit_status


def _cmd_report(args) -> int:
    md, table = summarize(args.logs)
    sys.stdout.write(md)
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "summary.md").write_text(md)
        (d / "quantities.csv").write_text(table)
    return EXIT_OK


def _cmd_atoms(args) -> int:
    inst = load_instance(args.file)
    if inst.is_group:
        raise UsageError("atoms needs a backend instance")
    q = next((q for q in inst.queries if q["checker"] == "atoms"), dict(inst.queries[0], checker="atoms"))
    rec = run_query(inst, q, args.mode, args.budget)
    _emit(rec, args.out, "atoms.json")
    return EXIT_FAIL if rec["status"] == "fail" else EXIT_OK


def _cmd_embed(args) -> int:
    inst = load_instance(args.file)
    if not inst.is_group:
        raise UsageError("embed-group needs a group instance")
    out = embed_payload(inst)
    names = sorted(inst.sets)
    if len(names) >= 2 and inst.group.is_finite:
        r = correspondence_report(inst.sets[names[0]], inst.sets[names[1]], inst.field)
        out["correspondence"] = r.to_json()
        _emit(out, args.out, "embed.json")
        return EXIT_OK if r.holds else EXIT_FAIL
    _emit(out, args.out, "embed.json")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"check": _cmd_check, "fuzz": _cmd_fuzz, "report": _cmd_report, "atoms": _cmd_atoms, "embed-group": _cmd_embed}
    try:
        return handlers[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except WitnessCheckFailed as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpanboundError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
