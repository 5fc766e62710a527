"""End-to-end command line behavior: exit codes, formats, determinism."""

import json

import pytest

from badicnet.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_net_gen_emits_json(capsys):
    code, out, _ = run(capsys, "net", "gen", "--kind", "hammersley", "--base", "2", "--m", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["base"] == 2 and doc["m"] == 2 and len(doc["matrices"]) == 2


def test_net_gen_writes_points_csv(tmp_path, capsys):
    net_file = tmp_path / "net.json"
    csv_file = tmp_path / "pts.csv"
    code, _, _ = run(
        capsys, "net", "gen", "--kind", "sym-hammersley", "--base", "2", "--m", "1",
        "--out", str(net_file), "--points-csv", str(csv_file),
    )
    assert code == 0
    lines = csv_file.read_text().strip().splitlines()
    assert lines[0] == "# schema=1"
    assert len(lines) == 2 + 8  # header rows plus 2 * 2^2 points


def test_net_gen_points_csv_dash_is_stdout(tmp_path, capsys):
    net_file = tmp_path / "net.json"
    code, out, _ = run(
        capsys, "net", "gen", "--kind", "hammersley", "--base", "2", "--m", "1",
        "--out", str(net_file), "--points-csv", "-",
    )
    assert code == 0
    assert out.startswith("# schema=1\n")
    assert len(out.strip().splitlines()) == 2 + 2


def test_net_symmetrize_round_trip(tmp_path, capsys):
    inner = tmp_path / "in.json"
    outer = tmp_path / "out.json"
    assert run(capsys, "net", "gen", "--base", "3", "--m", "1", "--out", str(inner))[0] == 0
    code, _, _ = run(capsys, "net", "symmetrize", "--in", str(inner), "--out", str(outer))
    assert code == 0
    doc = json.loads(outer.read_text())
    assert doc["sym_columns"] == 2
    assert doc["m"] == 3


def test_custom_json_requires_input(capsys):
    code, _, err = run(capsys, "net", "gen", "--kind", "custom-json")
    assert code == 2
    assert "error:" in err


def test_verify_dual_passes(capsys):
    code, out, _ = run(capsys, "verify", "dual", "--base", "2", "--m", "2", "--n", "4", "--kbound", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert doc["dual_sym"] == doc["dual_inner_in_E"]


def test_verify_dual_guard_exit_code(capsys):
    code, _, err = run(
        capsys, "verify", "dual", "--base", "2", "--m", "3", "--n", "6", "--kbound", "6",
        "--max-candidates", "100",
    )
    assert code == 3
    assert "guard exceeded" in err


def test_verify_orthogonality_deterministic(capsys):
    args = ("verify", "orthogonality", "--base", "2", "--m", "2", "--n", "4", "--samples", "40", "--seed", "7")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["failures"] == 0


def test_verify_independence(capsys):
    code, out, _ = run(capsys, "verify", "independence", "--base", "3", "--m", "2", "--n", "6")
    assert code == 0
    doc = json.loads(out)
    assert doc["all_passed"] is True


def test_verify_rho2_reports_exceeds_with_certificate(capsys):
    code, out, _ = run(
        capsys, "verify", "rho2", "--kind", "sym-hammersley-truncated",
        "--base", "2", "--m", "2", "--n", "5", "--cap", "5",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["rho2"] == "exceeds"
    assert doc["certified_by"] == "enumeration+independence"
    assert doc["cap"] == 5


def test_verify_rho2_finds_weight(capsys):
    code, out, _ = run(capsys, "verify", "rho2", "--kind", "hammersley", "--base", "2", "--m", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["rho2"] == 3
    assert doc["witness"] == [1, 2]


def test_study_discrepancy_schema_and_determinism(capsys):
    args = ("study", "discrepancy", "--base", "2", "--m-range", "2:4", "--p", "2,inf")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    lines = out1.strip().splitlines()
    assert lines[0] == "# schema=1"
    header = lines[1].split(",")
    assert header[:6] == ["kind", "base", "m", "N", "p", "method"]
    assert len(lines) == 2 + 3 * 2 * 2  # kinds x m x p


def test_study_discrepancy_max_ops_skips(capsys):
    code, out, err = run(
        capsys, "study", "discrepancy", "--base", "2", "--m-range", "2:6", "--p", "2",
        "--max-ops", "4000",
    )
    assert code == 0
    assert "skipped" in err
    lines = [l for l in out.strip().splitlines() if not l.startswith("#")]
    # sym-hammersley m=5 has 128 points, 128^2 > 4000 ops
    assert not any(l.startswith("sym-hammersley,2,5") for l in lines)


def test_study_wce_quotes_kernel_and_passes(capsys):
    code, out, _ = run(
        capsys, "study", "wce", "--base", "2", "--m-range", "1:2",
        "--kernel", "diagonal:alpha=1,gamma=1", "--n-extra", "5",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert '"diagonal:alpha=1,gamma=1"' in lines[2]
    assert lines[2].endswith("True")


def test_study_wce_band_limited_seeded(capsys):
    args = ("study", "wce", "--base", "2", "--m-range", "2:2", "--kernel",
            "bandlimited:k=2,rank=3", "--seed", "5", "--n-extra", "4")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_study_convergence_threads_match_serial(capsys, monkeypatch):
    base_args = ("study", "convergence", "--base", "2", "--m-range", "2:5")
    _, serial, _ = run(capsys, *base_args)
    _, threaded, _ = run(capsys, "--threads", "3", *base_args)
    assert serial == threaded
    monkeypatch.setenv("QMC_THREADS", "2")
    _, via_env, _ = run(capsys, *base_args)
    assert via_env == serial


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["net", "gen", "--kind", "not-a-kind"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_parameter_errors_exit_two(capsys):
    code, _, err = run(capsys, "net", "gen", "--kind", "hammersley")
    assert code == 2
    assert "need --base and --m" in err
    code, _, err = run(capsys, "study", "discrepancy", "--base", "2", "--m-range", "2:3", "--kinds", "bogus")
    assert code == 2
