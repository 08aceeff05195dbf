"""End-to-end tests of the command-line front end and its exit-code contract."""

import csv
import json

import numpy as np
import pytest

import compatamg as cm
from compatamg.cli import main


def _run_json(tmp_path, args, name="out.json"):
    out = tmp_path / name
    code = main(args + ["--output", str(out)])
    return code, json.loads(out.read_text())


def test_verify_pairs_single1(tmp_path):
    code, report = _run_json(
        tmp_path,
        ["verify-pairs", "--problem", "advection1d", "--n", "32", "--pair", "single1"],
    )
    assert code == 0 and report["passed"]
    (rec,) = report["results"]
    assert rec["pair"] == "single1" and rec["norm"] == "identity"
    assert rec["expected_orthogonal"] and rec["pass"]
    assert abs(rec["pi_norm"] - 1.0) <= 1e-8
    assert rec["compat_eq"]
    assert all(rec["orthogonality_checks"].values())
    assert rec["nonorth_sup"] <= 1e-8
    assert abs(rec["min_angle"] - np.pi / 2) <= 1e-6


def test_verify_pairs_single2_on_random(tmp_path):
    code, report = _run_json(
        tmp_path,
        [
            "verify-pairs",
            "--problem", "random", "--n", "40", "--seed", "1",
            "--pair", "single2",
        ],
    )
    assert code == 0
    (rec,) = report["results"]
    assert rec["norm"] == "Asym" and abs(rec["pi_norm"] - 1.0) <= 1e-8


def test_verify_pairs_random_pair_fails_when_expected(tmp_path):
    code, report = _run_json(
        tmp_path,
        [
            "verify-pairs",
            "--problem", "random", "--n", "30", "--seed", "7",
            "--pair", "random:42", "--expect-orthogonal",
        ],
    )
    assert code == 1 and not report["passed"]
    (rec,) = report["results"]
    assert rec["pi_norm"] > 1.001 and rec["pass"] is False


def test_verify_pairs_explicit_zw_files(tmp_path):
    A = cm.generate(cm.ProblemSpec("advection1d", n=16))
    part = cm.default_splitting(16, "alternate")
    Z = cm.ideal_z(cm.partition(A, part))
    zp, wp = tmp_path / "z.json", tmp_path / "w.mtx"
    cm.save_matrix_json(zp, Z)
    cm.save_matrix_market(wp, np.zeros((part.nf, part.nc)))
    code, report = _run_json(
        tmp_path,
        [
            "verify-pairs",
            "--problem", "advection1d", "--n", "16",
            "--pair", f"zw:{zp},{wp}", "--norm", "identity",
            "--expect-orthogonal",
        ],
    )
    assert code == 0
    assert abs(report["results"][0]["pi_norm"] - 1.0) <= 1e-8


def test_verify_pairs_missing_file_is_config_error(tmp_path, capsys):
    code = main(
        ["verify-pairs", "--problem", "advection1d", "--n", "8",
         "--pair", "zw:/nope/z.json,/nope/w.json"]
    )
    assert code == 2
    assert "--pair" in capsys.readouterr().err


def test_verify_pairs_unknown_recipe_is_config_error(capsys):
    code = main(["verify-pairs", "--problem", "advection1d", "--n", "8", "--pair", "bogus"])
    assert code == 2
    assert "--pair" in capsys.readouterr().err


def test_verify_pairs_requires_a_pair(capsys):
    code = main(["verify-pairs", "--problem", "advection1d", "--n", "8"])
    assert code == 2
    assert "--pair" in capsys.readouterr().err


def test_verify_pairs_bad_norm_is_config_error(capsys):
    code = main(
        ["verify-pairs", "--problem", "advection1d", "--n", "8",
         "--pair", "single1", "--norm", "nonsense"]
    )
    assert code == 2
    assert "--norm" in capsys.readouterr().err


def test_verify_pairs_tight_tolerance_fails(tmp_path):
    # an impossible tolerance turns the same verified case into exit code 1
    code, report = _run_json(
        tmp_path,
        ["verify-pairs", "--problem", "random", "--n", "40", "--seed", "1",
         "--pair", "single2", "--tol", "1e-18"],
    )
    assert code == 1 and not report["passed"]


def test_figure1_on_nonsymmetric(tmp_path):
    code, report = _run_json(
        tmp_path, ["figure1", "--problem", "random", "--n", "30", "--seed", "0"]
    )
    assert code == 0 and report["passed"]
    results = report["results"]
    assert len(results) == 10
    verified = [r for r in results if "pi_norm" in r]
    skipped = [r for r in results if r.get("skipped")]
    assert len(verified) == 6 and len(skipped) == 4
    assert all(r["style"] == "dotted" for r in skipped)
    assert all(abs(r["pi_norm"] - 1.0) <= 1e-8 for r in verified)


def test_figure1_on_spd(tmp_path):
    code, report = _run_json(
        tmp_path, ["figure1", "--problem", "laplacian1d", "--n", "32"]
    )
    assert code == 0
    assert all(abs(r["pi_norm"] - 1.0) <= 1e-8 for r in report["results"])


def test_tables_sweep(tmp_path):
    code, report = _run_json(
        tmp_path, ["tables", "--problem", "random", "--n", "24", "--seed", "0"]
    )
    assert code == 0 and report["passed"]
    results = report["results"]
    assert len(results) == 50
    passing = [r for r in results if r.get("pass")]
    skipped = [r for r in results if r.get("skipped")]
    assert len(passing) >= 15 and len(passing) + len(skipped) == 50
    assert all(r["reason"] for r in skipped)
    assert all(r["compat_eq"] for r in passing)
    assert {"norm", "q", "anchor", "companion_expr"} <= set(results[0])


def test_tables_csv_output(tmp_path):
    out = tmp_path / "tables.csv"
    code = main(
        ["tables", "--problem", "random", "--n", "12", "--seed", "3",
         "--format", "csv", "--output", str(out)]
    )
    assert code == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 50
    assert "pi_norm" in rows[0] and "companion_expr" in rows[0]


def test_converge_direct_method(tmp_path):
    code, report = _run_json(
        tmp_path,
        ["converge", "--problem", "advection1d", "--n", "64",
         "--pair", "single1", "--post", "fexact", "--iters", "5"],
    )
    assert code == 0
    (rec,) = report["results"]
    assert rec["rho"] <= 1e-10 and not rec["divergent"]
    assert rec["history"][1] <= 1e-12 * rec["history"][0]


def test_converge_jacobi_only_matches_eigen_oracle(tmp_path):
    n, omega = 32, 0.5
    code, report = _run_json(
        tmp_path,
        ["converge", "--problem", "laplacian1d", "--n", str(n),
         "--pair", "none", "--pre", f"jacobi:{omega}:1", "--iters", "5"],
    )
    assert code == 0
    k = np.arange(1, n + 1)
    lam = np.max(np.abs(1.0 - omega * (1.0 - np.cos(k * np.pi / (n + 1)))))
    assert abs(report["results"][0]["rho"] - lam) <= 1e-12


def test_converge_flags_divergent_pair(tmp_path):
    code, report = _run_json(
        tmp_path,
        ["converge", "--problem", "random", "--n", "30", "--seed", "7",
         "--pair", "random:42", "--iters", "8"],
    )
    assert code == 0
    assert report["results"][0]["divergent"]
    assert report["results"][0]["rho"] > 1.0


def test_converge_csv_history(tmp_path):
    out = tmp_path / "hist.csv"
    code = main(
        ["converge", "--problem", "advection1d", "--n", "16", "--pair", "single1",
         "--post", "fexact", "--iters", "3", "--format", "csv", "--output", str(out)]
    )
    assert code == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["pair", "iter", "residual"]
    assert len(rows) == 1 + 4  # header + iters+1 residuals


def test_reports_deterministic_modulo_timestamp(tmp_path):
    args = ["tables", "--problem", "random", "--n", "16", "--seed", "5"]
    _, a = _run_json(tmp_path, args, "a.json")
    _, b = _run_json(tmp_path, args, "b.json")
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b
    ta = (tmp_path / "a.json").read_text().splitlines()
    tb = (tmp_path / "b.json").read_text().splitlines()
    stripped_a = [l for l in ta if '"timestamp"' not in l]
    stripped_b = [l for l in tb if '"timestamp"' not in l]
    assert stripped_a == stripped_b


def test_threads_env_var_preserves_output(tmp_path, monkeypatch):
    args = ["tables", "--problem", "random", "--n", "16", "--seed", "5"]
    _, serial = _run_json(tmp_path, args, "serial.json")
    monkeypatch.setenv("COMPATAMG_THREADS", "4")
    _, parallel = _run_json(tmp_path, args, "parallel.json")
    serial.pop("timestamp"), parallel.pop("timestamp")
    assert serial == parallel


def test_argparse_rejects_unknown_flags():
    with pytest.raises(SystemExit) as exc:
        main(["verify-pairs", "--no-such-flag"])
    assert exc.value.code == 2


def test_stdout_output(capsys):
    code = main(["figure1", "--problem", "laplacian1d", "--n", "8"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["command"] == "figure1"
