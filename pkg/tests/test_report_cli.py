import json
import subprocess
import sys

import numpy as np
import pytest

import cbdtools.cli as cli
import cbdtools.report as report_mod
from cbdtools import (AnalysisReport, CountTable, CONTEXTS, SolverFailure,
                      classical_deterministic, dump_json, pr_box,
                      run_analysis, system_from_dict, system_to_dict,
                      tsirelson, uniform_system, verdict_string)
from cbdtools.errors import MissingContext


def test_dump_json_rounds_to_12_significant_digits():
    text = dump_json({"x": 1.0 / 3.0, "n": 7, "flag": True})
    data = json.loads(text)
    assert data["x"] == 0.333333333333
    assert data["n"] == 7 and data["flag"] is True
    assert text.endswith("\n")


def test_dump_json_emit_parse_emit_is_identity():
    rng = np.random.default_rng(31)
    payload = {"values": list(rng.normal(size=20) * 10.0 ** rng.integers(-12, 12, 20)),
               "nested": {"pi": 3.14159265358979, "tiny": 2.5e-17, "neg": -0.0}}
    first = dump_json(payload)
    second = dump_json(json.loads(first))
    assert first == second


def test_system_serialization_round_trip():
    system = tsirelson()
    data = json.loads(dump_json(system_to_dict(system)))
    back = system_from_dict(data)
    for ctx in CONTEXTS:
        a = system.joint(ctx.i, ctx.j).entries()
        b = back.joint(ctx.i, ctx.j).entries()
        assert max(abs(x - y) for x, y in zip(a, b)) <= 1e-12
    with pytest.raises(MissingContext):
        system_from_dict({"contexts": {"11": data["contexts"]["11"]}})
    with pytest.raises(MissingContext):
        system_from_dict({})


def test_run_analysis_fields_are_coherent():
    report = run_analysis(pr_box(), include_witness=True)
    assert abs(report.delta_min_lp - 1.0) <= 1e-9
    assert abs(report.delta_min_closed - 1.0) <= 1e-12
    assert report.closed_form_gap <= 1e-6
    assert report.consistent
    assert report.degenerate_coupling
    assert not report.jpd_exists and not report.bdk_satisfied
    assert abs(report.genuine - 1.0) <= 1e-9
    assert len(report.witness) == 256
    assert abs(sum(report.witness) - 1.0) <= 1e-9
    assert report.verdict == "no-signaling no-jpd genuine-contextuality"

    classical = run_analysis(classical_deterministic())
    assert classical.verdict == "no-signaling jpd-exists no-genuine-contextuality"
    assert classical.witness is None


def test_report_json_round_trip_byte_identical():
    counts = CountTable({ctx: (40, 13, 27, 20) for ctx in CONTEXTS})
    from cbdtools import normalize
    report = run_analysis(normalize(counts), include_witness=True, counts=counts,
                          bootstrap_replicates=25, bootstrap_seed=3)
    first = dump_json(report.to_dict())
    parsed = AnalysisReport.from_dict(json.loads(first))
    assert dump_json(parsed.to_dict()) == first


def test_bootstrap_requires_counts():
    with pytest.raises(ValueError):
        run_analysis(uniform_system(), bootstrap_replicates=5)


def test_bootstrap_block_contents():
    counts = CountTable({ctx: (40, 13, 27, 20) for ctx in CONTEXTS})
    from cbdtools import normalize
    report = run_analysis(normalize(counts), counts=counts,
                          bootstrap_replicates=30, bootstrap_seed=1)
    block = report.bootstrap
    assert block["replicates"] == 30 and block["seed"] == 1
    for name in ("delta0", "delta_chsh", "delta_min", "genuine"):
        summary = block["measures"][name]
        assert summary["q025"] <= summary["median"] <= summary["q975"]
    assert block["measures"]["delta0"]["median"] >= 0.0


def test_verdict_string_is_total():
    seen = set()
    for signaling in (False, True):
        for bdk in (False, True):
            for jpd in (False, True):
                seen.add(verdict_string(signaling, bdk, jpd))
    assert len(seen) == 8


def test_solver_failure_carries_partial_report(monkeypatch):
    def boom(system, probe_degeneracy=True):
        raise SolverFailure("forced failure", iterations=7, objective=0.5)
    monkeypatch.setattr(report_mod, "minimize_mismatch", boom)
    with pytest.raises(SolverFailure) as excinfo:
        report_mod.run_analysis(uniform_system())
    partial = excinfo.value.report
    assert partial is not None
    assert partial.delta_min_lp is None
    assert abs(partial.delta_min_closed) <= 1e-12
    assert partial.solver_error is not None


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "cbdtools.cli", *args],
                          capture_output=True, text=True)


def test_cli_generate_and_analyze_system(tmp_path):
    system_path = tmp_path / "box.json"
    result = run_cli("generate", "--kind", "pr_box", "--out", str(system_path))
    assert result.returncode == 0
    assert system_path.exists()

    result = run_cli("analyze", "--system", str(system_path), "--witness")
    assert result.returncode == 0
    data = json.loads(result.stdout)
    assert abs(data["delta_min_lp"] - 1.0) <= 1e-9
    assert len(data["witness"]) == 256
    assert "verdict" in data
    assert "delta_min" in result.stderr  # human summary goes to stderr

    report_path = tmp_path / "report.json"
    result = run_cli("analyze", "--system", str(system_path),
                     "--report", str(report_path))
    assert result.returncode == 0
    assert json.loads(report_path.read_text())["jpd_exists"] is False
    assert "verdict" in result.stdout


def test_cli_analyze_trials_deterministic(tmp_path):
    rng = np.random.default_rng(12)
    rows = ["context_i,context_j,a,b"]
    for ctx in CONTEXTS:
        for _ in range(50):
            rows.append(f"{ctx.i},{ctx.j},{rng.choice([-1, 1])},{rng.choice([-1, 1])}")
    trials = tmp_path / "trials.csv"
    trials.write_text("\n".join(rows) + "\n", encoding="utf-8")

    args = ("analyze", "--trials", str(trials), "--bootstrap", "10", "--seed", "5")
    first, second = run_cli(*args), run_cli(*args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["bootstrap"]["replicates"] == 10


def test_cli_exit_code_2_on_bad_input(tmp_path):
    assert cli.main(["analyze", "--system", str(tmp_path / "missing.json")]) == 2
    bad_csv = tmp_path / "bad.csv"
    bad_csv.write_text("wrong,header\n", encoding="utf-8")
    assert cli.main(["analyze", "--trials", str(bad_csv)]) == 2
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json", encoding="utf-8")
    assert cli.main(["analyze", "--system", str(bad_json)]) == 2
    assert cli.main(["generate", "--kind", "random", "--params", "oops"]) == 2
    assert cli.main(["generate", "--kind", "random", "--params", "x=y"]) == 2

    system_path = tmp_path / "sys.json"
    assert cli.main(["generate", "--kind", "tsirelson", "--out", str(system_path)]) == 0
    assert cli.main(["analyze", "--system", str(system_path), "--bootstrap", "5"]) == 2


def test_cli_exit_code_3_on_solver_failure(tmp_path, monkeypatch, capsys):
    system_path = tmp_path / "sys.json"
    cli.main(["generate", "--kind", "pr_box", "--out", str(system_path)])

    def boom(system, **kwargs):
        raise SolverFailure("forced failure")
    monkeypatch.setattr(cli, "run_analysis", boom)
    assert cli.main(["analyze", "--system", str(system_path)]) == 3
    assert "solver failure" in capsys.readouterr().err


def test_cli_verify_reports_counts(capsys):
    assert cli.main(["verify", "--samples", "12", "--seed", "2"]) == 0
    out = capsys.readouterr().out
    assert "closed-form identity: 12/12 pass" in out
    assert "jpd criterion (s_max <= 2): 12/12 pass" in out
