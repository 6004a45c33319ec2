"""End-to-end tests for the batch front door: flags, configs, reports."""
import json
import subprocess
import sys

import pytest

import tauberlab.cli as cli

CLI_TIMEOUT = 300


def run_cli(args, cwd, env=None):
    return subprocess.run([sys.executable, "-m", "tauberlab.cli", *args],
                          cwd=cwd, env=env, capture_output=True, text=True,
                          timeout=CLI_TIMEOUT)


def read_summary(path):
    with open(path) as fh:
        return json.load(fh)


@pytest.fixture(scope="module")
def verify_outcome(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify")
    proc = run_cli(["atoms", "verify", "--alpha", "2", "--beta", "2",
                    "--k", "20", "--out-dir", str(out)], cwd=out)
    return proc, out


@pytest.fixture(scope="module")
def sandwich_outcome(tmp_path_factory):
    out = tmp_path_factory.mktemp("sandwich")
    proc = run_cli(["wave", "sandwich", "--n", "400",
                    "--damping", "localized", "--points", "8",
                    "--scan-points", "33", "--t-max", "16",
                    "--out-dir", str(out)], cwd=out)
    return proc, out


class TestAtomsVerify:
    def test_exit_zero(self, verify_outcome):
        proc, _ = verify_outcome
        assert proc.returncode == 0, proc.stderr

    def test_summary_has_four_fit_reports(self, verify_outcome):
        _, out = verify_outcome
        summary = read_summary(out / "atoms-verify-summary.json")
        assert sorted(summary["passed"]) == ["X3", "X5", "X6", "XQ4"]
        assert all(summary["passed"].values())
        for name in ("X3", "XQ4", "X6"):
            assert summary["constants"][name]["rho"] > 0

    def test_summary_echoes_scenario(self, verify_outcome):
        _, out = verify_outcome
        summary = read_summary(out / "atoms-verify-summary.json")
        assert summary["scenario"]["command"] == "atoms"
        assert summary["scenario"]["params"]["k"] == 20
        assert summary["wall_time_s"] > 0

    def test_csv_schema_and_line_endings(self, verify_outcome):
        _, out = verify_outcome
        raw = (out / "atoms-verify-envelopes.csv").read_bytes()
        lines = raw.split(b"\r\n")
        assert lines[0] == b"# schema=tauberlab.atoms.verify.envelopes.v1"
        assert lines[1] == b"t,log_abs_L,log_abs_N"
        # body floats carry 17 significant digits
        assert b"e+00" in lines[2] or b"e-" in lines[2]


class TestWaveSandwich:
    def test_exit_zero(self, sandwich_outcome):
        proc, _ = sandwich_outcome
        assert proc.returncode == 0, proc.stderr

    def test_decay_and_scan_series_written(self, sandwich_outcome):
        _, out = sandwich_outcome
        decay = (out / "wave-sandwich-decay.csv").read_bytes()
        scan = (out / "wave-sandwich-scan.csv").read_bytes()
        assert decay.startswith(b"# schema=tauberlab.wave.sandwich.decay.v1\r\n")
        assert scan.startswith(b"# schema=tauberlab.wave.sandwich.scan.v1\r\n")

    def test_fitted_sandwich_constants(self, sandwich_outcome):
        _, out = sandwich_outcome
        summary = read_summary(out / "wave-sandwich-summary.json")
        consts = summary["constants"]["rate-sandwich"]
        for key in ("c", "C", "c_prime", "C_prime", "t0"):
            assert key in consts
        assert consts["t0"] <= 5.0
        assert summary["passed"]["rate-sandwich"] is True


class TestExitCodes:
    def test_unknown_config_key_names_it(self, tmp_path):
        conf = tmp_path / "bad.conf"
        conf.write_text("[scenario]\ncommand = atoms\naction = verify\n"
                        "\n[params]\nbogus-knob = 3\n")
        proc = run_cli(["run", "--config", str(conf)], cwd=tmp_path)
        assert proc.returncode == 2
        assert "bogus-knob" in proc.stderr

    def test_oracle_backend_range_guard(self, tmp_path):
        proc = run_cli(["atoms", "verify", "--k", "40", "--backend",
                        "oracle", "--out-dir", str(tmp_path)], cwd=tmp_path)
        assert proc.returncode == 2
        assert "k" in proc.stderr and "30" in proc.stderr

    def test_invariant_failure_still_writes_report(self, tmp_path):
        # dt too coarse for the finite-difference energy identity
        proc = run_cli(["wave", "energy", "--n", "40", "--t-max", "4",
                        "--dt", "0.5", "--out-dir", str(tmp_path)],
                       cwd=tmp_path)
        assert proc.returncode == 1
        summary = read_summary(tmp_path / "wave-energy-summary.json")
        assert summary["ok"] is False
        assert summary["passed"]["derivative_identity"] is False
        assert (tmp_path / "wave-energy-energy.csv").exists()


class TestConfigFile:
    def test_config_matches_flag_invocation(self, tmp_path):
        flags = tmp_path / "flags"
        cfg = tmp_path / "cfg"
        flags.mkdir()
        proc = run_cli(["atoms", "verify", "--alpha", "2", "--beta", "2",
                        "--k", "12", "--out-dir", str(flags)], cwd=tmp_path)
        assert proc.returncode == 0
        conf = tmp_path / "scenario.conf"
        conf.write_text("[scenario]\ncommand = atoms\naction = verify\n"
                        f"out-dir = {cfg}\n\n[params]\nalpha = 2\nbeta = 2\n"
                        "k = 12\n")
        proc = run_cli(["run", "--config", str(conf)], cwd=tmp_path)
        assert proc.returncode == 0
        assert ((flags / "atoms-verify-envelopes.csv").read_bytes()
                == (cfg / "atoms-verify-envelopes.csv").read_bytes())


class TestDeterminism:
    def test_repeat_runs_are_byte_identical(self, tmp_path):
        bodies = []
        for tag in ("a", "b"):
            out = tmp_path / tag
            out.mkdir()
            proc = run_cli(["contour", "reconstruct", "--out-dir", str(out)],
                           cwd=tmp_path)
            assert proc.returncode == 0, proc.stderr
            bodies.append(sorted(
                (p.name, p.read_bytes()) for p in out.glob("*.csv")))
        assert bodies[0] == bodies[1]


class TestListSuites:
    def test_names_and_count(self, tmp_path):
        proc = run_cli(["list-suites"], cwd=tmp_path)
        assert proc.returncode == 0
        rows = [ln for ln in proc.stdout.splitlines() if ln.strip()]
        names = [r.split("\t")[0] for r in rows]
        assert "X3" in names and "lemma31" in names
        assert len(rows) == len(cli.SUITES)


class TestThreadsFallback:
    def test_env_var_sets_parallelism(self, tmp_path):
        import os
        env = dict(os.environ, TAUBERLAB_THREADS="2")
        proc = run_cli(["atoms", "verify", "--k", "12", "--out-dir",
                        str(tmp_path)], cwd=tmp_path, env=env)
        assert proc.returncode == 0
        summary = read_summary(tmp_path / "atoms-verify-summary.json")
        assert summary["scenario"]["threads"] == 2
