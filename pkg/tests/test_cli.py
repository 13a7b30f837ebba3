"""End-to-end CLI behavior, run in-process through main(argv)."""

import json
import subprocess
import sys

import numpy as np
import pytest

from atomlaser.checks import CheckResult
from atomlaser.cli import OUTDIR_ENV, SWEEP_HEADER, main
from atomlaser.observables import total_variation
from atomlaser.strong_coupling import exact_distribution

TAU_STAR = "0.7071067811865476"


@pytest.fixture(autouse=True)
def clean_outdir_env(monkeypatch):
    monkeypatch.delenv(OUTDIR_ENV, raising=False)


def read_csv_values(text: str) -> dict:
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    return {name: value for name, value in rows}


class TestUsageErrors:
    @pytest.mark.parametrize("argv,fragment", [
        (["steady"], "--tau is required"),
        (["steady", "--tau", "0.5", "--g", "1"], "not both"),
        (["steady", "--g", "1", "--kappa", "1"], "--gamma --pump"),
        (["steady", "--tau", "-1"], "--tau must be nonnegative"),
        (["steady", "--g", "0", "--kappa", "1", "--gamma", "0", "--pump", "1"],
         "--g must be positive"),
        (["steady", "--tau", "0.5", "--nmax", "0"], "--nmax"),
        (["sweep", "--tau-min", "0"], "--tau-min must be positive"),
        (["sweep", "--tau-min", "2", "--tau-max", "1"], "--tau-max"),
        (["sweep", "--points", "0"], "--points"),
        (["sweep", "--eta", "-0.1"], "--eta must be nonnegative"),
        (["dist", "--tol", "-1"], "--tol must be positive"),
        (["check", "--grid-size", "0"], "--grid-size"),
    ])
    def test_post_parse_errors_exit_1_and_name_the_flag(self, argv, fragment, capsys):
        assert main(argv) == 1
        assert fragment in capsys.readouterr().err

    def test_unknown_subcommand_exits_1(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 1

    def test_unparseable_flag_value_exits_1(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["steady", "--tau", "abc"])
        assert excinfo.value.code == 1


class TestSteady:
    def test_csv_report(self, capsys):
        assert main(["steady", "--tau", TAU_STAR]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert lines[0] == "quantity,value"
        values = read_csv_values(out)
        assert float(values["mandel_q"]) == pytest.approx(-0.15, abs=0.02)
        assert float(values["quad_residual"]) == pytest.approx(0.0, abs=1e-8)
        assert float(values["flux_residual"]) == pytest.approx(0.0, abs=1e-8)
        assert "rho_0" in values and "rho_20" in values

    def test_dimensional_flags_match_dimensionless(self, capsys):
        # pump/2g = 0.3, gamma/2g = 0.125, kappa/2g = 0.25
        assert main(["steady", "--g", "2", "--kappa", "1",
                     "--gamma", "0.5", "--pump", "1.2"]) == 0
        via_dimensional = capsys.readouterr().out
        assert main(["steady", "--tau", "0.25", "--eta", "0.125",
                     "--omega", "0.3"]) == 0
        assert capsys.readouterr().out == via_dimensional

    def test_json_report(self, capsys):
        assert main(["steady", "--tau", TAU_STAR, "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["distribution"]) == payload["n_max"] + 1
        assert payload["mandel_q"] == pytest.approx(-0.15, abs=0.02)
        assert abs(payload["quad_residual"]) < 1e-8

    def test_out_file_and_hygiene(self, tmp_path):
        target = tmp_path / "steady.csv"
        assert main(["steady", "--tau", "0.5", "--out", str(target)]) == 0
        raw = target.read_bytes()
        assert b"\r" not in raw
        text = raw.decode()
        assert all(line == line.rstrip() for line in text.splitlines())
        assert text.endswith("\n")

    def test_degenerate_rates_exit_2(self, capsys):
        assert main(["steady", "--tau", "0", "--omega", "0", "--eta", "0.5"]) == 2
        assert "numerical failure" in capsys.readouterr().err

    def test_truncation_exit_2(self, capsys):
        assert main(["steady", "--tau", "0.001", "--omega", "5",
                     "--nmax", "10"]) == 2
        assert "tail mass" in capsys.readouterr().err


class TestSweep:
    def test_stdout_table(self, capsys):
        assert main(["sweep", "--tau-min", "0.05", "--tau-max", "0.05",
                     "--points", "1"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == SWEEP_HEADER
        first = [float(x) for x in lines[1].split(",")]
        assert first[0] == 0.05
        assert 0.58 < first[1] < 0.68  # mean photon number near the slow-rate limit

    def test_reruns_and_workers_byte_identical(self, tmp_path):
        base = ["sweep", "--tau-min", "0.3", "--tau-max", "1.5", "--points", "6",
                "--no-plot"]
        paths = [tmp_path / name for name in ("a.csv", "b.csv", "c.csv")]
        assert main(base + ["--out", str(paths[0])]) == 0
        assert main(base + ["--out", str(paths[1])]) == 0
        assert main(base + ["--out", str(paths[2]), "--workers", "3"]) == 0
        blobs = [p.read_bytes() for p in paths]
        assert blobs[0] == blobs[1] == blobs[2]

    def test_figure_rendered_next_to_csv(self, tmp_path):
        target = tmp_path / "sweep.csv"
        assert main(["sweep", "--tau-min", "0.3", "--tau-max", "1.0",
                     "--points", "3", "--out", str(target)]) == 0
        png = target.with_suffix(".png")
        assert png.exists()
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_no_plot_skips_figure(self, tmp_path):
        target = tmp_path / "sweep.csv"
        assert main(["sweep", "--tau-min", "0.3", "--tau-max", "1.0",
                     "--points", "3", "--out", str(target), "--no-plot"]) == 0
        assert target.exists()
        assert not target.with_suffix(".png").exists()

    def test_failed_grid_point_exits_2_without_output(self, tmp_path, capsys):
        target = tmp_path / "fail.csv"
        rc = main(["sweep", "--omega", "5", "--tau-min", "0.001",
                   "--tau-max", "0.001", "--points", "1", "--nmax", "10",
                   "--out", str(target)])
        assert rc == 2
        assert not target.exists()
        assert "no output written" in capsys.readouterr().err


class TestDist:
    def test_exact_mode(self, capsys):
        assert main(["dist"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "n,rho_n"
        assert lines[1] == "0,5.233721969658e-01"
        probs = np.array([float(line.split(",")[1]) for line in lines[1:]])
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)

    def test_numeric_mode_approaches_exact_limit(self, capsys):
        assert main(["dist", "--mode", "numeric", "--tau", "0.05"]) == 0
        lines = capsys.readouterr().out.splitlines()[1:]
        numeric = np.array([float(line.split(",")[1]) for line in lines])
        assert total_variation(numeric, exact_distribution().probs) < 0.05

    def test_outdir_env_resolves_relative_paths(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTDIR_ENV, str(tmp_path))
        assert main(["dist", "--out", "nested/d.csv", "--no-plot"]) == 0
        assert (tmp_path / "nested" / "d.csv").exists()

    def test_outdir_env_ignored_for_absolute_paths(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTDIR_ENV, str(tmp_path / "elsewhere"))
        target = tmp_path / "direct.csv"
        assert main(["dist", "--out", str(target), "--no-plot"]) == 0
        assert target.exists()
        assert not (tmp_path / "elsewhere").exists()

    def test_figure_rendered(self, tmp_path):
        target = tmp_path / "dist.csv"
        assert main(["dist", "--out", str(target)]) == 0
        assert target.with_suffix(".png").exists()


class TestCheck:
    def test_reports_json_and_exit_0(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        assert main(["check", "--grid-size", "1", "--out", str(target)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == json.loads(target.read_text())
        assert all(entry["pass"] for entry in payload)
        names = {entry["check_name"] for entry in payload}
        assert "fourth_moment_survivor[n2_coeff_60a03]" in names

    def test_failing_check_exits_3(self, capsys, monkeypatch):
        fake = [CheckResult(check_name="demo", value=2.0, threshold=1.0, ok=False)]
        monkeypatch.setattr("atomlaser.cli.run_checks", lambda **kw: fake)
        assert main(["check"]) == 3
        captured = capsys.readouterr()
        assert "check failed: demo" in captured.err
        assert json.loads(captured.out)[0]["pass"] is False


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "atomlaser", "steady", "--tau", "0.5"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "mean_n," in proc.stdout
