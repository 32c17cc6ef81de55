"""Reports, the JSON schema and the command line."""

import json
from fractions import Fraction

import jsonschema
import pytest

from kleinbench.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main
from kleinbench.report import ANCHORS, Entry, Report, ReportError, RunConfig, jsonable, load_schema
from kleinbench.runner import ConfigError, run

SCHEMA = load_schema()


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(no_floats(v) for v in obj)
    return True


def test_entry_validation():
    with pytest.raises(ReportError):
        Entry("x", "nope", "group.order-168")
    with pytest.raises(ReportError):
        Entry("x", "verified", "no.such-anchor")
    with pytest.raises(ReportError):
        Entry("x", "failed", "group.order-168")   # failures need a counterexample
    e = Entry("x", "failed", "group.order-168", counterexample={"k": 1})
    assert e.provenance == "verified-against-paper"
    assert Entry("y", "computed", "derived.molien").provenance == "computed-no-paper-value"


def test_jsonable():
    assert jsonable(Fraction(3, 4)) == "3/4"
    assert jsonable({"a": (1, 2)}) == {"a": [1, 2]}
    with pytest.raises(ReportError):
        jsonable({"a": 0.5})


def test_fibration_report(capsys):
    code, out, _ = run_cli(["fibration", "--n", "1", "--data", "alpha = u; beta = v;", "--json"], capsys)
    assert code == EXIT_OK
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    fib = next(s for s in data["sections"] if s["name"] == "fibration")
    sing = next(e for e in fib["entries"] if e["claim"] == "fibration.singular-points")
    assert sing["data"]["count"] == 2 and sing["status"] == "verified"


def test_def_file(tmp_path, capsys):
    f = tmp_path / "forms.klein"
    f.write_text("alpha = (u)(u - v);\nbeta = (v)(u + v);\n")
    code, out, _ = run_cli(["fibration", "--def", str(f), "--json"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["config"]["n"] is None
    code, _, err = run_cli(["fibration", "--def", str(tmp_path / "missing")], capsys)
    assert code == EXIT_CONFIG and "cannot read" in err


def test_exit_codes(capsys):
    assert run_cli(["fibration", "--data", "alpha = u*u + v; beta = v;"], capsys)[0] == EXIT_CONFIG
    assert run_cli(["fibration", "--n", "2", "--data", "alpha = u; beta = v;"], capsys)[0] == EXIT_CONFIG
    assert run_cli(["chain", "--certify"], capsys)[0] == EXIT_CONFIG            # seed is mandatory
    assert run_cli(["report"], capsys)[0] == EXIT_CONFIG
    assert run_cli(["group", "--all"], capsys)[0] == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == EXIT_CONFIG
    code, _, err = run_cli(["fibration", "--data", "alpha = (u)(u-v); beta = (v)(u-v);"], capsys)
    assert code == EXIT_FAILED and "common zero" in err


def test_determinism(tmp_path, capsys):
    args = ["chain", "--certify", "--samples", "5", "--seed", "7", "--json"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == EXIT_OK
    assert main(args + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    jsonschema.validate(data, SCHEMA)
    assert no_floats(data)
    claims = {e["claim"]: e for s in data["sections"] for e in s["entries"]}
    assert claims["chain.roundtrip"]["status"] == "verified"
    assert claims["chain.equivariance.R.point"]["data"]["samples"] == 5
    assert claims["chain.control.sabotage"]["status"] == "verified"


def test_chain_without_certify_skips_sampling():
    rep = run(RunConfig("chain"))
    status = {e.claim: e.status for _, e in rep.entries()}
    assert status["chain.roundtrip"] == "skipped"
    assert status["chain.equivariance.S.symbolic"] == "verified"
    assert rep.exit_code == 0


def test_markdown_output(capsys):
    code, out, _ = run_cli(["group"], capsys)
    assert code == EXIT_OK
    assert out.startswith("# kleinbench report")
    assert "| group.order | verified | group.order-168 |" in out
    assert "| 24A | S4 | 24 | 7 |" in out


def test_module_errors_become_failed_entries(monkeypatch):
    import kleinbench.runner as runner

    def boom():
        raise RuntimeError("synthetic failure")

    monkeypatch.setattr(runner, "find_bitangents", lambda g: boom())
    rep = run(RunConfig("bitangents"))
    (entry,) = rep.failed
    assert entry.counterexample["exception"] == "synthetic failure"
    assert rep.exit_code == 1


def test_config_errors():
    with pytest.raises(ConfigError):
        run(RunConfig("report"))
    with pytest.raises(ConfigError):
        run(RunConfig("fibration", n=-1))


@pytest.fixture(scope="module")
def full_report():
    return run(RunConfig("report", seed=7, samples=50, output="json"))


def test_full_pipeline(full_report):
    data = json.loads(full_report.dumps())
    jsonschema.validate(data, SCHEMA)
    assert no_floats(data)
    assert [s["name"] for s in data["sections"]] == [
        "input", "group", "invariants", "bitangents", "picard", "cohomology", "fibration", "chain",
    ]
    for s in data["sections"]:
        for e in s["entries"]:
            assert e["anchor"] in ANCHORS
    claims = {e["claim"]: e for s in data["sections"] for e in s["entries"]}
    verdict = claims["cohomology.verdict"]
    assert verdict["status"] == "verified"
    assert "not stably conjugate" in verdict["data"]["verdict"]
    assert "2A" in verdict["data"]["witnesses"]
    # the only failure is the whole-group H1 on Pic(dP2), which is Z/2
    assert [e.claim for e in full_report.failed] == ["cohomology.h1-G-dP2"]
    ce = claims["cohomology.h1-G-dP2"]["counterexample"]
    assert ce["computed"] == "Z/2" and ce["is_cocycle"] and not ce["is_coboundary"]
    assert full_report.exit_code == 1
