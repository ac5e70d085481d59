"""Acceptance criteria, one test each, exact comparisons throughout.

Each test records a single PASS/FAIL line that is printed in the terminal
summary at the end of the run.
"""
import functools
import itertools
import json
import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from spanbound import (
    ConnectivityContext,
    GroupSet,
    SetInstance,
    Subspace,
    backend_create,
    coset_decompose,
    connectivity_cost,
    correspondence_report,
    cube_bound_check,
    cyclic_group,
    dihedral_group,
    dyson_transform,
    group_from_spec,
    group_kneser_check,
    group_ruzsa_check,
    inverse_set,
    kappa_and_atoms,
    kneser_nfold,
    petridis_check,
    plunnecke_powers,
    product_of_subspaces,
    rho_minimize,
    ruzsa_triple_check,
    span_of,
    stabilizer,
    submodularity_check,
    symmetric_group,
    tao_classify,
    to_group_algebra,
    translate,
)
from spanbound.cli import fuzz, run_instance
from spanbound.correspondence import group_plunnecke_check
from spanbound.spans import iter_subspaces, random_subspace
from spanbound.structure import ff_subfield
from spanbound.theorems import algebra_petridis, algebra_plunnecke, algebra_triple


def criterion(number, title, limit=None):
    """Time the test, enforce its runtime limit and record one summary line."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
                dt = time.perf_counter() - t0
                if limit is not None:
                    assert dt < limit, f"took {dt:.1f} s, limit {limit} s"
            except BaseException as exc:
                dt = time.perf_counter() - t0
                ACCEPTANCE_LINES.append(f"criterion {number}: FAIL  {title} ({dt:.1f} s) {type(exc).__name__}: {exc}")
                raise
            ACCEPTANCE_LINES.append(f"criterion {number}: PASS  {title} ({dt:.1f} s){' ' + detail if detail else ''}")

        return run

    return wrap


def rand_set(b, rng, lo, hi, top):
    return SetInstance(b, tuple(rng.randrange(1, top) for _ in range(rng.randint(lo, hi))))


def small_span_set(b, rng, max_dim, max_size=4):
    """A nonempty set whose span has dimension <= max_dim."""
    while True:
        A = rand_set(b, rng, 1, max_size, b.q)
        if span_of(A).dim <= max_dim:
            return A


@criterion(1, "dim span{t-1..t-n} = 2 and dim of the inverse set = n, n = 3..8", 5)
def test_criterion_01_rational_function_example():
    b = backend_create("RF:QQ")
    for n in range(3, 9):
        A = SetInstance.of(b, [f"t-{i}" for i in range(1, n + 1)])
        assert span_of(A).dim == 2
        assert span_of(inverse_set(A)).dim == n


def _kneser_fuzz(spec, count, seed):
    res = fuzz(spec, "kneser", count, seed, set_size=5)
    assert res.exit_status == 0 and res.report["counts"]["pass"] == count
    for r in res.records:
        inst, q = r["instance"], r["record"]["result"]
        assert all(1 <= len(v) <= 5 for v in inst["sets"].values())
        dA, dB = q["dims"]
        assert q["dim_product"] + q["dim_H"] >= dA + dB
        assert q["slack"] == q["dim_product"] + q["dim_H"] - dA - dB
    return res


@criterion(2, "linear Kneser: 1000 in GF(2^8), 500 in GF(3^4)", 60)
def test_criterion_02_kneser():
    _kneser_fuzz("FF:2^8", 1000, 42)
    _kneser_fuzz("FF:3^4", 500, 43)
    return "1500/1500"


@criterion(3, "n-fold Kneser: 300 triples/quadruples in GF(2^6)", 60)
def test_criterion_03_kneser_nfold():
    b = backend_create("FF:2^6")
    rng = random.Random(3)
    for i in range(300):
        As = [rand_set(b, rng, 1, 3, 64) for _ in range(3 + i % 2)]
        v = kneser_nfold(As)
        s = v.statements
        assert s["1"] and s["2"] and s["3"]
        assert s["1_implies_2"] and s["2_implies_3"] and s["all_equal"]
        assert s["3"] == (s["3_first_branch"] or s["3_periodic"])
        assert v.holds


def _plunnecke_instances():
    b = backend_create("FF:2^6")
    rng = random.Random(5)
    return b, [(small_span_set(b, rng, 4), small_span_set(b, rng, 4, 3)) for _ in range(50)]


@criterion(4, "Petridis: 50 instances x 100 random C in GF(2^6), exhaustive rho", 300)
def test_criterion_04_petridis():
    b, insts = _plunnecke_instances()
    rng = random.Random(4)
    for A, B in insts:
        rho = rho_minimize(A, B, "exhaustive")
        assert rho.mode == "exhaustive"
        Cs = [rand_set(b, rng, 1, 3, 64) for _ in range(100)]
        rep = petridis_check(A, B, Cs, rho)
        assert rep.asserted and rep.holds
        for row in rep.quantities["cases"]:
            assert row["dim_CXB"] <= rho.rho * row["dim_CX"]
        # the minimizer attains rho exactly
        assert product_of_subspaces(rho.X, span_of(B)).dim == rho.rho * rho.X.dim


@criterion(5, "Pluennecke powers n <= 4 for the exhaustive minimizer, 50 instances", 300)
def test_criterion_05_plunnecke():
    b, insts = _plunnecke_instances()
    for A, B in insts:
        rep = plunnecke_powers(A, B, 4, "exhaustive")
        alpha = rep.quantities["alpha"]
        assert alpha == Fraction(product_of_subspaces(span_of(A), span_of(B)).dim, span_of(A).dim)
        X = rep.witness["X"]
        cur = X
        for n in range(1, 5):
            cur = product_of_subspaces(cur, span_of(B))
            assert cur.dim <= alpha**n * X.dim
        assert rep.asserted and rep.holds


@criterion(6, "Ruzsa triple: 500 QUAT and 500 GF(3^4) instances", 120)
def test_criterion_06_ruzsa():
    quat = backend_create("QUAT")
    rep = ruzsa_triple_check(*(SetInstance.of(quat, s) for s in (["1", "i"], ["1", "j"], ["1", "i"])))
    assert (rep.quantities["lhs"], rep.quantities["rhs"]) == (16, 32)
    rng = random.Random(6)
    for _ in range(500):
        sets = [SetInstance(quat, tuple(quat.sample(rng) for _ in range(rng.randint(1, 3)))) for _ in range(3)]
        if any(quat.is_zero(v) for s in sets for v in s.values):
            sets = [SetInstance(quat, tuple(v for v in s.values if not quat.is_zero(v)) or (quat.one,)) for s in sets]
        q = ruzsa_triple_check(*sets).quantities
        assert q["lhs"] <= q["rhs"]
    ff = backend_create("FF:3^4")
    for _ in range(500):
        q = ruzsa_triple_check(*(rand_set(ff, rng, 1, 3, 81) for _ in range(3))).quantities
        assert q["lhs"] <= q["rhs"] and q["lhs"] <= q["rhs_commutative"]
    return "16 <= 32 on the worked quaternion case"


@criterion(7, "cube bound on the criterion 5 instances")
def test_criterion_07_cube_bound():
    _, insts = _plunnecke_instances()
    for A, _ in insts:
        q = cube_bound_check(A).quantities
        assert q["dim_A3"] ** 2 <= q["n"] ** 3 and q["m"] ** 2 * q["dim_A3"] <= q["n"] ** 3


@criterion(8, "stabilizers and coset decompositions of 200 subspaces of GF(2^12)")
def test_criterion_08_structure():
    b = backend_create("FF:2^12")
    K = Subspace.whole(b)
    rng = random.Random(8)
    periodic = 0
    for _ in range(200):
        V = random_subspace(K, rng)
        if not V.dim:
            V = Subspace.base_field(b)
        H = stabilizer(V).H
        assert H.contains(b.one) and product_of_subspaces(H, H) == H
        assert 12 % H.dim == 0
        S = coset_decompose(V, H)
        assert len(S) * H.dim == V.dim
        cover = Subspace.zero(b)
        for s in S:
            cover = cover + translate(s, H)
        assert cover == V
        periodic += H.dim > 1
    # random subspaces are rarely periodic; add the subfields themselves
    for d in (1, 2, 3, 4, 6, 12):
        F = ff_subfield(b, d)
        assert stabilizer(F).H == F
    return f"{periodic} periodic among the random ones"


@criterion(9, "Dyson transform invariants on 200 GF(2^8) instances", 120)
def test_criterion_09_dyson():
    b = backend_create("FF:2^8")
    rng = random.Random(9)
    for _ in range(200):
        A, B = rand_set(b, rng, 1, 4, 256), rand_set(b, rng, 1, 4, 256)
        a = b.element(A.values[rng.randrange(len(A.values))])
        w = dyson_transform(A, B, a)
        SA, SB = span_of(A), span_of(B)
        assert product_of_subspaces(w.H, w.V) == w.V
        assert w.V.contains_subspace(translate(a.value, SB))
        assert product_of_subspaces(SA, SB).contains_subspace(w.V)
        assert w.V.dim + w.H.dim >= SA.dim + SB.dim


@criterion(10, "connectivity over GF(2^6): submodularity, atoms, kappa(GF(8), 1/2) = 3/2", 600)
def test_criterion_10_connectivity():
    b = backend_create("FF:2^6")
    K = Subspace.whole(b)
    rng = random.Random(10)
    Vs = [ff_subfield(b, 3), ff_subfield(b, 2)]
    while len(Vs) < 20:
        V = random_subspace(K, rng)
        if V.dim and V not in Vs:
            Vs.append(V)
    pairs = 0
    for lam in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        for V in Vs:
            ctx = ConnectivityContext(V, lam)
            rep = kappa_and_atoms(ctx)
            assert rep.exact and rep.atom_unique and rep.atom_is_division_ring
            assert rep.atoms_left_translates and rep.atoms_right_translates and rep.atoms_disjoint
            assert rep.lattice_ok and rep.lower_bound_ok
            assert connectivity_cost(rep.atom, ctx) == rep.kappa
    lam = Fraction(1, 2)
    while pairs < 1000:
        V = Vs[pairs % len(Vs)]
        ctx = ConnectivityContext(V, lam)
        W1, W2 = random_subspace(K, rng), random_subspace(K, rng)
        if not W1.dim or not W2.dim:
            continue
        # move W2 so that it meets W1
        w1, w2 = W1.basis_values()[0], W2.basis_values()[0]
        W2 = translate(b.mul(w1, b.inv(w2)), W2)
        r = submodularity_check(W1, W2, ctx)
        assert r.asserted and r.holds
        q = r.quantities
        assert q["lhs"] <= q["rhs"]
        pairs += 1
    # kappa for V = GF(8), lambda = 1/2, against the enumeration itself
    V = ff_subfield(b, 3)
    ctx = ConnectivityContext(V, lam)
    oracle = min(connectivity_cost(W, ctx) for W in iter_subspaces(K))
    rep = kappa_and_atoms(ctx)
    assert rep.kappa == oracle == Fraction(3, 2) and rep.atom == V
    return "kappa = 3/2"


def _tao_instances():
    rng = random.Random(11)
    out = []
    specs = ["FF:2^6", "FF:2^4"]
    attempts = 0
    while len(out) < 50:
        attempts += 1
        assert attempts < 5000
        b = backend_create(specs[attempts % 2])
        K = Subspace.whole(b)
        if attempts % 3 == 0:
            F = ff_subfield(b, rng.choice([d for d in (1, 2, 3) if b.dimension % d == 0]))
            x = rng.randrange(1, b.q)
            V = translate(x, F)
            if rng.random() < 0.5:
                y = rng.randrange(1, b.q)
                V2 = V + translate(y, F)
                V = V2 if V2.dim < b.dimension else V
        else:
            V = random_subspace(K, rng)
            if not V.dim or V.dim > 3:
                continue
        W = translate(rng.randrange(1, b.q), V)
        eps = 2 - Fraction(product_of_subspaces(W, V).dim, V.dim)
        if not 0 < eps < 2:
            continue
        out.append((b, V, W, eps))
    return out


@criterion(11, "small-doubling classifier on 50 GF(2^6)/GF(2^4) instances")
def test_criterion_11_tao():
    cases = {1: 0, 2: 0}
    for b, V, W, eps in _tao_instances():
        w = tao_classify(V, W, eps)
        assert w.asserted and w.holds
        H = w.H
        t = 2 / eps - 1
        cover = Subspace.zero(b)
        for x in w.X:
            cover = cover + product_of_subspaces(H, Subspace.from_values(b, [x]))
        # membership: each basis vector of V lies in the cover
        assert all(cover.contains(v) for v in V.basis_values())
        if w.case == 1:
            assert len(w.X) == 1 and H.dim <= t * V.dim
        else:
            assert len(w.X) <= t and H.dim <= t / (2 / eps + 1) * V.dim
        cases[w.case] += 1
    return f"case 1: {cases[1]}, case 2: {cases[2]}"


def _nonempty_subsets(G):
    elems = list(G.elements())
    return [GroupSet(G, s) for r in range(1, len(elems) + 1) for s in itertools.combinations(elems, r)]


@criterion(12, "group correspondence: all X, Y in Z/n (n <= 6) and 300 random cases")
def test_criterion_12_correspondence():
    exhaustive = 0
    for n in range(1, 7):
        G = cyclic_group(n)
        subs = _nonempty_subsets(G)
        for X in subs:
            for Y in subs:
                rep = correspondence_report(X, Y)
                q = rep.quantities
                assert q["X"] == q["dim_AX"] and q["XY"] == q["dim_AXAY"] and rep.holds
                exhaustive += 1
        if n <= 4:
            for X, Y in itertools.product(subs, repeat=2):
                assert group_kneser_check(X, Y).quantities["agree"]
    groups = [symmetric_group(3), dihedral_group(4), cyclic_group(64), group_from_spec("Z/4xZ/4"), dihedral_group(8), group_from_spec("Z/2xZ/3xZ/5")]
    rng = random.Random(12)
    for i in range(300):
        G = groups[i % len(groups)]
        elems = list(G.elements())
        X, Y, Z = (GroupSet(G, tuple(rng.sample(elems, rng.randint(1, min(5, len(elems)))))) for _ in range(3))
        assert correspondence_report(X, Y).holds
        r = group_ruzsa_check(X, Y, Z)
        assert r.quantities["agree"] and r.holds
        if G.is_abelian:
            k = group_kneser_check(X, Y)
            assert k.quantities["agree"] and k.holds
    return f"{exhaustive} exhaustive pairs"


@criterion(13, "algebra variants of criteria 4-6 on group algebras")
def test_criterion_13_algebra_variants():
    rng = random.Random(13)
    ab = backend_create("GA:GF(7):Z/6")
    nonab = backend_create("GA:GF(5):S3")

    def unit_set(b, n):
        G = b.group
        elems = list(G.elements())
        return SetInstance(b, tuple(((g, rng.randrange(1, b.k.p)),) for g in rng.sample(elems, n)))

    def any_set(b, n):
        return SetInstance(b, tuple(b.sample(rng, 2) for _ in range(n)))

    for _ in range(30):
        A = any_set(ab, rng.randint(1, 2))
        if any(ab.is_zero(v) for v in A.values):
            continue
        B = unit_set(ab, rng.randint(1, 2))
        assert algebra_plunnecke(A, B, 4).holds
        assert algebra_petridis(A, B, [unit_set(ab, 2) for _ in range(5)]).holds
        assert algebra_triple(A, B, unit_set(ab, 2)).holds
        An = unit_set(nonab, rng.randint(1, 3))
        assert algebra_triple(An, unit_set(nonab, 2), An).holds
        assert algebra_petridis(An, unit_set(nonab, 2), [unit_set(nonab, 1)]).holds
    # on A_X-form sets the linear numbers are the group numbers
    G = cyclic_group(6)
    elems = list(G.elements())
    for _ in range(30):
        X, Y, Z = (GroupSet(G, tuple(rng.sample(elems, rng.randint(1, 3)))) for _ in range(3))
        gp = group_plunnecke_check(X, Y, 3)
        assert gp.holds and gp.quantities["agree"]
        AX, AY, AZ = (to_group_algebra(S) for S in (X, Y, Z))
        lin = algebra_triple(AX, AY, AZ).quantities
        grp = group_ruzsa_check(X, Y, Z).quantities
        assert (lin["dim_ABC"], lin["dim_AB"], lin["dim_BC"], lin["max_AbC"]) == (grp["XYZ"], grp["XY"], grp["YZ"], grp["max_XyZ"])


FINDING_KEYS = {"index", "seed", "instance", "record"}


@criterion(14, "inseparable probe: 500 report-mode Kneser cases over GF(2)(s)[y]/(y^2 - s)")
def test_criterion_14_inseparable(tmp_path):
    res = fuzz("EXT:GF(2)(s):y^2-s", "kneser", 500, 14, mode="report", out=tmp_path)
    assert res.exit_status == 0 and not res.counterexamples
    log = tmp_path / "findings.jsonl"
    assert log.exists()
    lines = [ln for ln in log.read_text().splitlines() if ln.strip()]
    assert len(lines) == len(res.findings) == res.report["counts"]["finding"]
    for ln in lines:
        f = json.loads(ln)
        assert FINDING_KEYS <= set(f)
        rec = f["record"]
        assert rec["checker"] == "kneser" and rec["status"] == "finding" and rec["holds"] is False
        assert rec["asserted"] is False
        q = rec["result"]
        assert q["dim_product"] + q["dim_H"] < sum(q["dims"])
    return f"{len(lines)} findings"


@criterion(15, "determinism: same seed gives byte-identical reports")
def test_criterion_15_determinism(tmp_path, monkeypatch):
    outs = []
    for threads, name in (("1", "a"), ("8", "b")):
        monkeypatch.setenv("SPANBOUND_THREADS", threads)
        fuzz("FF:2^8", "kneser", 300, 42, set_size=5, out=tmp_path / name)
        fuzz("EXT:GF(2)(s):y^2-s", "kneser", 100, 14, mode="report", out=tmp_path / name / "insep")
        outs.append(tmp_path / name)
    for rel in ("report.json", "records.jsonl", "insep/report.json", "insep/records.jsonl", "insep/findings.jsonl"):
        assert (outs[0] / rel).read_bytes() == (outs[1] / rel).read_bytes(), rel
    inst = {"backend": "FF:2^6", "sets": {"A": ["1", "x", "x^2"], "B": ["1", "x"]}, "queries": [{"checker": "plunnecke"}, {"checker": "kneser"}], "seed": 7}
    r1 = json.dumps(run_instance(inst).to_json(with_timing=False), sort_keys=True)
    r2 = json.dumps(run_instance(inst).to_json(with_timing=False), sort_keys=True)
    assert r1 == r2
