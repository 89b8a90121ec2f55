import json
import math
import subprocess
import sys

import pytest

import stickfrag.cli as cli
from stickfrag.oracle import CrossCheckReport

REPORT_KEYS = {
    "ks", "star_discrepancy", "leading_digits", "chi2",
    "distinct_residues", "verdict", "ks_threshold",
}


def run_cli(*args, cwd=None):
    proc = subprocess.run(
        [sys.executable, "-m", "stickfrag", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )
    return proc


@pytest.fixture
def fig3_config(tmp_path):
    path = tmp_path / "fig3.json"
    path.write_text(json.dumps({"exponents": [{"rational": [-1, 3]}, {"rational": [-1, 2]}], "base": 10}))
    return path


@pytest.fixture
def fig7_config(tmp_path):
    path = tmp_path / "fig7.json"
    path.write_text(
        json.dumps({"exponents": [{"rational": [-1, 2]}, {"real": -math.sqrt(2)}], "base": 10})
    )
    return path


class TestClassify:
    def test_rational_config_predicts_non_benford(self, fig3_config):
        proc = run_cli("classify", "--config", str(fig3_config))
        assert proc.returncode == 0
        out = json.loads(proc.stdout)
        assert out["prediction"] == "NonBenford"
        assert [e["rational"] for e in out["exponents"]] == [[-1, 3], [-1, 2]]

    def test_mixed_config_predicts_benford(self, fig7_config):
        proc = run_cli("classify", "--config", str(fig7_config))
        out = json.loads(proc.stdout)
        assert out["prediction"] == "Benford"
        assert [e["verdict"] for e in out["exponents"]] == ["rational", "presumed_irrational"]

    def test_half_proportion_config(self, tmp_path):
        cfg = tmp_path / "p.json"
        cfg.write_text(json.dumps({"proportions": [0.5]}))
        out = json.loads(run_cli("classify", "--config", str(cfg)).stdout)
        assert out["prediction"] == "NonBenford"
        assert out["exponents"][0]["value"] == 0.0

    def test_invalid_config_exits_2(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"nope": 1}')
        assert run_cli("classify", "--config", str(cfg)).returncode == 2

    def test_missing_file_exits_2(self, tmp_path):
        assert run_cli("classify", "--config", str(tmp_path / "nope.json")).returncode == 2


class TestAnalyze:
    def test_outputs_and_stdout(self, fig3_config, tmp_path):
        out_dir = tmp_path / "run"
        proc = run_cli(
            "analyze", "--config", str(fig3_config), "--N", "50", "--out", str(out_dir)
        )
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert set(report) == REPORT_KEYS
        assert report["distinct_residues"] == 6
        assert report["verdict"] == "Inconsistent"
        for name in ("report.json", "distribution.csv", "digits.csv", "manifest.json"):
            target = out_dir / name
            assert target.exists() and target.stat().st_size > 0
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert set(manifest["outputs"]) == {"report.json", "distribution.csv", "digits.csv"}
        assert manifest["version"]
        digits = (out_dir / "digits.csv").read_text().strip().split("\n")
        assert digits[0] == "digit,frequency,benford_expected"
        assert len(digits) == 10

    def test_rerun_byte_identical(self, fig3_config, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_cli("analyze", "--config", str(fig3_config), "--N", "40", "--out", str(a))
        run_cli("analyze", "--config", str(fig3_config), "--N", "40", "--out", str(b))
        for name in ("report.json", "distribution.csv", "digits.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_cap_exceeded_exits_3_and_suggests_simulate(self, fig3_config, tmp_path):
        proc = run_cli(
            "analyze", "--config", str(fig3_config), "--N", "2000",
            "--out", str(tmp_path / "x"), "--cap", "1000",
        )
        assert proc.returncode == 3
        assert "simulate" in proc.stderr

    def test_scale_flag_keeps_verdict_deterministic(self, fig3_config, tmp_path):
        out_dir = tmp_path / "scaled"
        proc = run_cli(
            "analyze", "--config", str(fig3_config), "--N", "40",
            "--out", str(out_dir), "--length", "7.25",
        )
        assert proc.returncode == 0
        assert "scale invariance check" in proc.stderr
        report = json.loads(proc.stdout)
        assert report["verdict"] == "Inconsistent"

    def test_threads_flag_canonical(self, fig7_config, tmp_path):
        a, b = tmp_path / "t1", tmp_path / "t2"
        run_cli("analyze", "--config", str(fig7_config), "--N", "60", "--out", str(a), "--threads", "1")
        run_cli("analyze", "--config", str(fig7_config), "--N", "60", "--out", str(b), "--threads", "3")
        assert (a / "distribution.csv").read_bytes() == (b / "distribution.csv").read_bytes()


class TestBrute:
    def test_pass_exits_0(self, tmp_path):
        cfg = tmp_path / "m.json"
        cfg.write_text(json.dumps({"proportions": [0.3, 0.3]}))
        proc = run_cli("brute", "--config", str(cfg), "--N", "8")
        assert proc.returncode == 0
        out = json.loads(proc.stdout)
        assert out["passed"] is True and out["max_mass_deviation"] <= 1e-9
        assert out["leaves"] == 3**8

    def test_guard_exits_3(self, tmp_path):
        cfg = tmp_path / "m.json"
        cfg.write_text(json.dumps({"proportions": [0.5]}))
        assert run_cli("brute", "--config", str(cfg), "--N", "30").returncode == 3

    def test_failure_exits_4(self, tmp_path, monkeypatch, capsys):
        cfg = tmp_path / "m.json"
        cfg.write_text(json.dumps({"proportions": [0.5]}))
        bad = CrossCheckReport(
            passed=False, max_mass_deviation=1.0, atoms_exact=1, atoms_brute=1,
            leaves=2, measure="uniform", N=1, m=2,
        )
        monkeypatch.setattr(cli, "cross_check", lambda *a, **kw: bad)
        code = cli.main(["brute", "--config", str(cfg), "--N", "1"])
        capsys.readouterr()
        assert code == 4


class TestSimulate:
    def test_outputs_and_determinism(self, fig7_config, tmp_path):
        a, b = tmp_path / "s1", tmp_path / "s2"
        args = [
            "simulate", "--config", str(fig7_config), "--N", "30",
            "--samples", "20000", "--seed", "99",
        ]
        proc = run_cli(*args, "--out", str(a))
        assert proc.returncode == 0
        assert set(json.loads(proc.stdout)) == REPORT_KEYS
        run_cli(*args, "--out", str(b))
        for name in ("samples.csv", "report.json", "metadata.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()
        meta = json.loads((a / "metadata.json").read_text())
        assert meta["generator"] == "numpy.random.PCG64"
        assert meta["seed"] == 99

    def test_different_seed_changes_samples(self, fig7_config, tmp_path):
        a, b = tmp_path / "s1", tmp_path / "s2"
        common = ["simulate", "--config", str(fig7_config), "--N", "30", "--samples", "5000"]
        run_cli(*common, "--seed", "1", "--out", str(a))
        run_cli(*common, "--seed", "2", "--out", str(b))
        assert (a / "samples.csv").read_bytes() != (b / "samples.csv").read_bytes()


class TestVerdictAgreement:
    def test_prediction_matches_analysis_when_attainable(self, fig3_config, fig7_config, tmp_path):
        # end-to-end Theorem 1.1 restatement at desk scale: the rational
        # config must come out Inconsistent, the irrational one consistent
        # once N is large enough for the default threshold
        pred3 = json.loads(run_cli("classify", "--config", str(fig3_config)).stdout)["prediction"]
        rep3 = json.loads(
            run_cli("analyze", "--config", str(fig3_config), "--N", "1000", "--out", str(tmp_path / "r3")).stdout
        )
        assert pred3 == "NonBenford" and rep3["verdict"] == "Inconsistent"
        pred7 = json.loads(run_cli("classify", "--config", str(fig7_config)).stdout)["prediction"]
        rep7 = json.loads(
            run_cli("analyze", "--config", str(fig7_config), "--N", "1000", "--out", str(tmp_path / "r7")).stdout
        )
        assert pred7 == "Benford" and rep7["verdict"] == "ConsistentWithBenford"

    def test_stdout_is_pure_json(self, fig3_config, tmp_path):
        proc = run_cli(
            "analyze", "--config", str(fig3_config), "--N", "20", "--out", str(tmp_path / "r")
        )
        json.loads(proc.stdout)  # would raise if logs leaked to stdout
