"""CLI surface: report formats, determinism, and every exit code path."""

import csv
import io
import json

import pytest

from bohrineq import cli
from bohrineq.errors import BudgetExceededError, MonotonicityError


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows, f"no CSV rows in {text!r}"
    return rows


# ---------------------------------------------------------------- constants

def test_constants_csv_ok(capsys):
    code, out, _ = run_cli(capsys, "constants")
    assert code == 0
    (row,) = parse_csv(out)
    assert abs(float(row["lambda1"]) - 18.6095) < 1e-3
    assert abs(float(row["a_star1"]) - 0.567284) < 1e-6
    assert row["ok"] == "true"


def test_constants_json_fields(capsys):
    code, out, _ = run_cli(capsys, "constants", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    row = payload["rows"][0]
    assert abs(row["p"] - 2.4721359550) < 1e-9
    assert abs(row["radius_abs_head"] - 0.236068) < 1e-6
    assert row["ok"] is True


def test_constants_residual_breach_exit_code(capsys):
    code, _, err = run_cli(capsys, "constants", "--tol", "1e-18")
    assert code == 2
    assert "a_star1" in err


# ---------------------------------------------------------------- verify

def test_verify_family_violation_row(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--theorem", "classic",
        "--family", "moebius:0.5", "--r", "0.51",
    )
    assert code == 1
    (row,) = parse_csv(out)
    assert float(row["total"]) > 1.0
    assert float(row["margin"]) < 0.0


def test_verify_family_at_threshold_passes(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--theorem", "classic",
        "--family", "moebius:0.5", "--r", "threshold",
    )
    assert code == 0
    (row,) = parse_csv(out)
    assert float(row["r"]) == pytest.approx(1 / 3, abs=1e-9)


def test_verify_sweep_ok_and_header(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--theorem", "T21", "--n", "1,2", "--a", "0:0.9:0.1",
    )
    assert code == 0
    header = out.splitlines()[0]
    assert header == (
        "theorem,n,a,r,interpretation,head,tail,area,area_sq,extra,"
        "total,margin,certified"
    )
    rows = parse_csv(out)
    # 10 grid points: literal rows at n=1, literal+slice at n=2.
    assert len(rows) == 10 + 20


def test_verify_output_byte_stable(tmp_path, capsys):
    paths = [tmp_path / "first.csv", tmp_path / "second.csv"]
    for path in paths:
        code, _, _ = run_cli(
            capsys, "verify", "--theorem", "D", "--a", "0:0.5:0.05",
            "--out", str(path),
        )
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_verify_thm_e_margin_column(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--theorem", "E", "--a", "0.999",
    )
    assert code == 0
    (row,) = parse_csv(out)
    assert 0.0 <= float(row["margin"]) < 1e-7


# ---------------------------------------------------------------- radius

def test_radius_closed_form_threshold(capsys):
    code, out, _ = run_cli(
        capsys, "radius", "--functional", "classic", "--family", "moebius:0.9",
    )
    assert code == 0
    (row,) = parse_csv(out)
    assert abs(float(row["radius"]) - 1.0 / 2.8) <= 1e-9
    assert row["binding"] == "true"


# ---------------------------------------------------------------- scan

def test_scan_thm_c_locates_root(capsys):
    code, out, _ = run_cli(
        capsys, "scan", "--theorem", "C", "--epsilon", "0",
        "--a", "0:0.99:0.001", "--format", "json",
    )
    assert code == 0
    meta = json.loads(out)["meta"]
    assert abs(meta["argmax_a"] - 0.567284) < 1e-3
    assert meta["max_total"] <= 1.0 + 1e-12


# ---------------------------------------------------------------- lemma

def test_lemma_part_a_scaled(capsys):
    code, out, _ = run_cli(
        capsys, "lemma", "--part", "a", "--family", "scaled:0.6,2", "--r", "0.5",
    )
    assert code == 0
    (row,) = parse_csv(out)
    assert row["ok"] == "true"
    assert float(row["lhs"]) < float(row["rhs"])


def test_lemma_part_c_moebius(capsys):
    code, out, _ = run_cli(
        capsys, "lemma", "--part", "c", "--family", "moebius:0.6", "--r", "0.4",
    )
    assert code == 0
    (row,) = parse_csv(out)
    assert float(row["lhs"]) == pytest.approx(float(row["rhs"]), abs=1e-10)


# ---------------------------------------------------------------- exit codes

def test_unknown_theorem_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "verify", "--theorem", "Z9")
    assert code == 64
    assert "unknown theorem" in err


def test_malformed_family_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "radius", "--functional", "classic", "--family", "moebius:x")
    assert code == 64


def test_domain_error_exit_code(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--theorem", "classic", "--family", "moebius:1.5",
    )
    assert code == 65
    code, _, _ = run_cli(
        capsys, "verify", "--theorem", "classic", "--family", "moebius:0.5", "--r", "1.0",
    )
    assert code == 65


def test_monotonicity_exit_code(monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise MonotonicityError("functional decreases")

    monkeypatch.setattr(cli.ver, "radius_search", boom)
    code, _, err = run_cli(
        capsys, "radius", "--functional", "classic", "--family", "moebius:0.5",
    )
    assert code == 66
    assert "monotonicity" in err


def test_budget_exit_code(monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise BudgetExceededError("too many coefficients")

    monkeypatch.setattr(cli.ver, "lemma1a_check", boom)
    code, _, err = run_cli(
        capsys, "lemma", "--part", "a", "--family", "scaled:0.6,2", "--r", "0.5",
    )
    assert code == 67
    assert "budget" in err


def test_out_file_and_json_stability(tmp_path, capsys):
    first = tmp_path / "scan1.json"
    second = tmp_path / "scan2.json"
    for path in (first, second):
        code, _, _ = run_cli(
            capsys, "scan", "--theorem", "E", "--a", "0:0.9:0.1",
            "--format", "json", "--out", str(path),
        )
        assert code == 0
    assert first.read_bytes() == second.read_bytes()
    payload = json.loads(first.read_text())
    assert payload["meta"]["command"] == "scan"
