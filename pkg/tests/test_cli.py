"""Instance files, exit codes, fuzzing, shrinking and reports."""
import json

import pytest

from spanbound import cli
from spanbound.cli import (
    COMPAT,
    check_compatible,
    fuzz,
    generate_instance,
    instance_seed,
    main,
    reverify,
    run_instance,
    shrink,
    summarize,
)
from spanbound.errors import IncompatibleChecker, ReportParseError
from spanbound import backend_create, symmetric_group

KNESER = {"backend": "FF:2:x^4+x+1", "sets": {"A": ["1", "x"], "B": ["1", "x"]}, "query": {"checker": "kneser"}, "seed": 1}


def write(tmp_path, data, name="inst.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return p


def test_check_kneser_exit_0(tmp_path, capsys):
    p = write(tmp_path, KNESER)
    assert main(["check", str(p), "--out", str(tmp_path / "o")]) == 0
    rep = json.loads(capsys.readouterr().out)
    res = rep["records"][0]["result"]
    # [DERIVED] 3 + 1 >= 2 + 2
    assert (res["dim_product"], res["dim_H"], res["slack"]) == (3, 1, 0)
    assert (tmp_path / "o" / "report.json").exists() and (tmp_path / "o" / "timing.json").exists()
    assert "timing" not in json.loads((tmp_path / "o" / "report.json").read_text())


def test_malformed_element_exit_2(tmp_path, capsys):
    p = write(tmp_path, dict(KNESER, sets={"A": ["x+*1"], "B": ["1"]}))
    assert main(["check", str(p)]) == 2
    assert "position" in capsys.readouterr().err


def test_usage_errors_exit_2(tmp_path):
    assert main(["check", str(write(tmp_path, "{not json"))]) == 2
    assert main(["check", str(tmp_path / "missing.json")]) == 2
    bad = dict(KNESER, query={"checker": "kneser", "sets": ["A", "Z"]})
    assert main(["check", str(write(tmp_path, bad))]) == 2


def test_budget_exit_3(tmp_path):
    data = {"backend": "FF:2^6", "sets": {"A": ["1", "x", "x^2", "x^3", "x^4"], "B": ["1", "x"]}, "query": {"checker": "rho", "budget": 10}}
    assert main(["check", str(write(tmp_path, data))]) == 3
    assert main(["check", str(write(tmp_path, dict(data, query={"checker": "rho"}))), "--budget", "10"]) == 3


def test_report_is_deterministic():
    a = run_instance(dict(KNESER)).to_json(with_timing=False)
    b = run_instance(dict(KNESER)).to_json(with_timing=False)
    assert cli.dumps(a) == cli.dumps(b)


def test_witness_round_trip():
    cases = [
        KNESER,
        {"backend": "QUAT", "sets": {"A": ["1", "i"], "B": ["1", "j"]}, "query": {"checker": "dyson"}},
        {"backend": "FF:2^6", "sets": {"A": ["1", "x", "x^2"], "B": ["1", "x"]}, "query": {"checker": "rho"}},
        {"backend": "FF:2:x^4+x+1", "sets": {"A": ["1", "x^5"]}, "query": {"checker": "stabilizer"}},
        {"backend": "FF:2:x^4+x+1", "sets": {"A": ["1", "x"]}, "query": {"checker": "small_doubling", "epsilon": "1/2"}},
        {"group": "Z/6", "sets": {"X": ["0", "3"], "Y": ["1"]}, "query": {"checker": "correspondence"}},
    ]
    for data in cases:
        rec = run_instance(data).records[0]
        assert rec["status"] == "pass", rec
        assert reverify(data, rec)


def test_compatibility_matrix():
    with pytest.raises(IncompatibleChecker):
        check_compatible(backend_create("QUAT"), "plunnecke")
    with pytest.raises(IncompatibleChecker):
        check_compatible(backend_create("QUAT"), "kneser")
    assert "kneser" in COMPAT
    assert main(["fuzz", "--backend", "QUAT", "--checker", "plunnecke", "--count", "3", "--out", "/tmp/spanbound-test-incompat"]) == 2


def test_instance_seeds():
    assert instance_seed(42, 0) != instance_seed(42, 1)
    assert instance_seed(42, 3) == instance_seed(42, 3)
    b = backend_create("FF:2^8")
    assert generate_instance(b, "kneser", 7) == generate_instance(b, "kneser", 7)


def test_fuzz_deterministic_across_threads(tmp_path, monkeypatch):
    monkeypatch.setenv("SPANBOUND_THREADS", "1")
    r1 = fuzz("FF:2^8", "kneser", 40, 42, out=tmp_path / "a")
    monkeypatch.setenv("SPANBOUND_THREADS", "4")
    r2 = fuzz("FF:2^8", "kneser", 40, 42, out=tmp_path / "b")
    assert r1.exit_status == r2.exit_status == 0
    assert r1.report["counts"]["pass"] == 40
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()
    assert (tmp_path / "a" / "records.jsonl").read_bytes() == (tmp_path / "b" / "records.jsonl").read_bytes()


def test_fuzz_report_mode_inseparable(tmp_path):
    res = fuzz("EXT:GF(2)(s):y^2-s", "kneser", 20, 3, mode="report", out=tmp_path)
    assert res.exit_status == 0 and not res.counterexamples
    assert (tmp_path / "findings.jsonl").exists()


def fake_failure(data, mode, budget):
    # fails exactly while set A still contains "x^3"
    bad = "x^3" in data["sets"]["A"]
    status = "fail" if bad else "pass"
    return {"checker": "kneser", "status": status}, status


def test_shrink_is_minimal(monkeypatch):
    monkeypatch.setattr(cli, "_evaluate", fake_failure)
    data = {"backend": "FF:2^8", "sets": {"A": ["1", "x", "x^3", "x^5"], "B": ["1", "x^2", "x^7"]}, "query": {"checker": "kneser"}}
    small = shrink(data, "assert")
    assert small["sets"] == {"A": ["x^3"], "B": ["x^7"]}
    _, outcome = fake_failure(small, "assert", None)
    assert outcome == "fail"
    for name, items in small["sets"].items():
        if len(items) > 1:
            for i in range(len(items)):
                trial = json.loads(json.dumps(small))
                del trial["sets"][name][i]
                assert fake_failure(trial, "assert", None)[1] != "fail"


def test_fuzz_failure_exit_1(tmp_path, monkeypatch):
    def always_fail(data, mode, budget):
        return {"checker": "kneser", "status": "fail"}, "fail"

    monkeypatch.setattr(cli, "_evaluate", always_fail)
    res = fuzz("FF:2^8", "kneser", 5, 1, out=tmp_path)
    assert res.exit_status == 1 and len(res.counterexamples) == 1
    line = (tmp_path / "counterexamples.jsonl").read_text().splitlines()[0]
    assert all(len(v) == 1 for v in json.loads(line)["shrunk"]["sets"].values())


def test_report_command(tmp_path, capsys):
    fuzz("FF:2^8", "kneser", 10, 5, out=tmp_path / "k")
    fuzz("QUAT", "ruzsa_triple", 5, 5, out=tmp_path / "r")
    assert main(["report", str(tmp_path / "r" / "records.jsonl"), str(tmp_path / "k" / "records.jsonl"), "--out", str(tmp_path / "rep")]) == 0
    md = capsys.readouterr().out.splitlines()
    rows = md[2:]
    assert len(rows) == 2 and rows[0].startswith("| kneser |") and rows[1].startswith("| ruzsa_triple |")
    assert "| 10 | 10 | 0 | 0 |" in rows[0]
    csv_lines = (tmp_path / "rep" / "quantities.csv").read_text().splitlines()
    assert len(csv_lines) == 16


def test_report_single_run_slack(tmp_path):
    rep = run_instance(dict(KNESER)).to_json(with_timing=False)
    p = write(tmp_path, rep, "report.json")
    md, _ = summarize([p])
    assert md.splitlines()[2].split("|")[7].strip() == "0"


def test_report_empty_and_bad(tmp_path, capsys):
    assert main(["report"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 2
    bad = write(tmp_path, "not a log\n", "bad.jsonl")
    with pytest.raises(ReportParseError):
        summarize([bad])
    assert main(["report", str(bad)]) == 2


def test_atoms_and_embed_commands(tmp_path, capsys):
    data = {"backend": "FF:2:x^4+x+1", "sets": {"V": ["1", "x^5"]}, "query": {"checker": "atoms", "lambda": "1/2"}}
    assert main(["atoms", str(write(tmp_path, data))]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"]["kappa"] == "1"
    g = {"group": "S3", "sets": {"X": [0, 2], "Y": [0, 5]}, "query": {"checker": "embed"}}
    assert main(["embed-group", str(write(tmp_path, g, "g.json"))]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["correspondence"]["holds"]
    assert main(["embed-group", str(write(tmp_path, data, "ff.json"))]) == 2


def test_cayley_file_instance(tmp_path):
    (tmp_path / "s3.txt").write_text("6\n" + "\n".join(" ".join(map(str, r)) for r in symmetric_group(3).table) + "\n")
    data = {"cayley_file": "s3.txt", "sets": {"X": [0, 2], "Y": [0, 5]}, "query": {"checker": "correspondence"}}
    p = write(tmp_path, data)
    assert run_instance(p).exit_status == 0


def test_findings_log_format(tmp_path, monkeypatch):
    real = cli._evaluate

    def every_third_is_finding(data, mode, budget):
        rec, outcome = real(data, mode, budget)
        if data["seed"] % 3 == 0:
            rec = dict(rec, holds=False, status="finding")
            outcome = "finding"
        return rec, outcome

    monkeypatch.setattr(cli, "_evaluate", every_third_is_finding)
    res = fuzz("FF:2^8", "kneser", 30, 9, mode="report", out=tmp_path)
    assert res.exit_status == 0 and res.findings
    lines = (tmp_path / "findings.jsonl").read_text().splitlines()
    assert len(lines) == len(res.findings) == res.report["counts"]["finding"]
    for ln in lines:
        f = json.loads(ln)
        assert {"index", "seed", "instance", "record"} <= set(f)
        assert f["record"]["status"] == "finding" and f["instance"]["query"]["checker"] == "kneser"
