"""End-to-end command-line behaviour, including the exit-code contract."""
import subprocess
import sys

import numpy as np
import pytest

from zipfks.distribution import RandomStream, Support, ZipfModel, sample
from zipfks.observations import write_observations
from zipfks.tablefile import load_table


def run_cli(*args, timeout=600):
    return subprocess.run(
        [sys.executable, "-m", "zipfks", *args],
        capture_output=True,
        text=True,
        timeout=timeout,
    )


def write_sample(tmp_path, gamma, support_k, n, seed, name="obs.txt"):
    model = ZipfModel(gamma, Support(k=support_k))
    drawn = sample(model, n, RandomStream.for_replicate(seed, 0, 0))
    path = tmp_path / name
    write_observations(drawn, path)
    return path


class TestSimulate:
    def test_writes_table_and_reports_cells(self, tmp_path):
        out = tmp_path / "t.csv"
        result = run_cli(
            "simulate", "--n", "20,50", "--gamma", "1.5", "--k", "20",
            "--replicates", "200", "--reps", "1", "--seed", "9",
            "--out", str(out), "--workers", "1",
        )
        assert result.returncode == 0, result.stderr
        assert out.exists()
        assert "cell gamma=1.5 n=20" in result.stdout
        assert "wrote" in result.stdout
        table = load_table(out)
        assert table.ns == (20, 50)
        assert table.base_seed == 9

    def test_byte_identical_across_runs_and_workers(self, tmp_path):
        outputs = []
        for name, workers in (("a.csv", "1"), ("b.csv", "1"), ("c.csv", "2")):
            out = tmp_path / name
            result = run_cli(
                "simulate", "--n", "30", "--gamma", "1.0,2.0", "--k", "20",
                "--replicates", "200", "--reps", "2", "--seed", "4",
                "--out", str(out), "--workers", workers,
            )
            assert result.returncode == 0, result.stderr
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]

    def test_unbounded_with_low_gamma_is_usage_error(self, tmp_path):
        result = run_cli(
            "simulate", "--n", "10", "--gamma", "0.5", "--k", "inf",
            "--out", str(tmp_path / "t.csv"),
        )
        assert result.returncode == 2
        assert "invalid with --k inf" in result.stderr

    def test_missing_seed_warns_on_stderr(self, tmp_path):
        result = run_cli(
            "simulate", "--n", "10", "--gamma", "1.5", "--k", "20",
            "--replicates", "100", "--reps", "1",
            "--out", str(tmp_path / "t.csv"), "--workers", "1",
        )
        assert result.returncode == 0, result.stderr
        assert "time-derived seed" in result.stderr

    def test_bad_flag_combination_exits_2(self, tmp_path):
        result = run_cli("simulate", "--n", "ten", "--gamma", "1.5", "--k", "20",
                         "--out", str(tmp_path / "t.csv"))
        assert result.returncode == 2

    def test_non_standard_quantiles_rejected_before_running(self, tmp_path):
        result = run_cli(
            "simulate", "--n", "10", "--gamma", "1.5", "--k", "20",
            "--quantiles", "0.5,0.9", "--seed", "1", "--out", str(tmp_path / "t.csv"),
        )
        assert result.returncode == 2
        assert "levels" in result.stderr


class TestFit:
    def test_perfect_tiny_fit(self, tmp_path):
        path = tmp_path / "obs.txt"
        path.write_text("1 1 2\n")
        result = run_cli(
            "fit", "--input", str(path), "--k", "2", "--bespoke",
            "--replicates", "100", "--reps", "1", "--seed", "3", "--workers", "1",
        )
        assert result.returncode == 0, result.stderr
        assert "gamma_hat:     1.0000" in result.stdout
        assert "ks_statistic:  0.0000" in result.stdout
        assert "not rejected" in result.stdout

    def test_machine_output_block(self, tmp_path):
        path = tmp_path / "obs.txt"
        path.write_text("1 1 2\n")
        result = run_cli(
            "fit", "--input", str(path), "--k", "2", "--bespoke",
            "--replicates", "100", "--reps", "1", "--seed", "3",
            "--workers", "1", "--machine",
        )
        assert result.returncode == 0, result.stderr
        lines = dict(line.split("=", 1) for line in result.stdout.strip().splitlines())
        assert lines["n"] == "3"
        assert lines["k_support"] == "2"
        assert float(lines["gamma_hat"]) == pytest.approx(1.0, abs=1e-5)
        assert float(lines["ks"]) < 1e-12
        assert lines["rejected_q90"] == "false"
        assert "cutoff_q999" in lines

    def test_table_lookup_flow(self, tmp_path):
        from zipfks.estimate import mle_gamma
        from zipfks.observations import parse_observations

        obs = write_sample(tmp_path, 2.0, 100, 200, seed=6)
        # tabulate the estimate rounded to 2 decimals so the +-0.005 lookup
        # window applies deterministically
        gamma_hat = mle_gamma(parse_observations(obs), Support.finite(100))
        table_path = tmp_path / "t.csv"
        build = run_cli(
            "simulate", "--n", "200", "--gamma", f"{round(gamma_hat, 2)}", "--k", "100",
            "--replicates", "400", "--reps", "1", "--seed", "11",
            "--out", str(table_path), "--workers", "2",
        )
        assert build.returncode == 0, build.stderr
        result = run_cli("fit", "--input", str(obs), "--k", "100", "--table", str(table_path))
        assert result.returncode in (0, 1), result.stderr + result.stdout
        assert f"table {table_path}" in result.stdout
        # the exit code must mirror the 0.9-level verdict line
        line09 = next(
            line for line in result.stdout.splitlines()
            if line.strip().startswith("level 0.9 ")
        )
        assert result.returncode == (1 if "REJECTED" in line09 else 0)

    def test_table_lookup_without_grid_match_directs_to_bespoke(self, tmp_path):
        table_path = tmp_path / "t.csv"
        build = run_cli(
            "simulate", "--n", "200", "--gamma", "3.5", "--k", "100",
            "--replicates", "400", "--reps", "1", "--seed", "11",
            "--out", str(table_path), "--workers", "1",
        )
        assert build.returncode == 0, build.stderr
        obs = write_sample(tmp_path, 2.0, 100, 200, seed=6)
        result = run_cli("fit", "--input", str(obs), "--k", "100", "--table", str(table_path))
        assert result.returncode == 2
        assert "--bespoke" in result.stderr

    def test_table_support_mismatch_is_usage_error(self, tmp_path):
        table_path = tmp_path / "t.csv"
        run_cli(
            "simulate", "--n", "50", "--gamma", "2.0", "--k", "50",
            "--replicates", "200", "--reps", "1", "--seed", "11",
            "--out", str(table_path), "--workers", "1",
        )
        obs = write_sample(tmp_path, 2.0, 50, 50, seed=6)
        result = run_cli("fit", "--input", str(obs), "--k", "100", "--table", str(table_path))
        assert result.returncode == 2
        assert "tabulates support" in result.stderr

    def test_geometric_data_rejected(self, tmp_path):
        # exponential decay is far from any power law at this sample size
        rng = np.random.default_rng(2)
        values = np.minimum(rng.geometric(0.5, size=2000), 100)
        path = tmp_path / "geo.txt"
        path.write_text("\n".join(str(int(v)) for v in values))
        result = run_cli(
            "fit", "--input", str(path), "--k", "100", "--bespoke",
            "--replicates", "400", "--reps", "1", "--seed", "8", "--workers", "2",
        )
        assert result.returncode == 1, result.stderr + result.stdout
        assert "REJECTED" in result.stdout

    def test_observations_above_support_are_usage_error(self, tmp_path):
        path = tmp_path / "obs.txt"
        path.write_text("1 2 300\n")
        result = run_cli("fit", "--input", str(path), "--k", "100", "--bespoke")
        assert result.returncode == 2
        assert "exceed the declared support" in result.stderr

    def test_parse_error_is_usage_error(self, tmp_path):
        path = tmp_path / "obs.txt"
        path.write_text("1 0 2\n")
        result = run_cli("fit", "--input", str(path), "--k", "100", "--bespoke")
        assert result.returncode == 2
        assert "token 2" in result.stderr

    def test_requires_exactly_one_cutoff_source(self, tmp_path):
        path = tmp_path / "obs.txt"
        path.write_text("1 1 2\n")
        neither = run_cli("fit", "--input", str(path), "--k", "2")
        assert neither.returncode == 2
        both = run_cli("fit", "--input", str(path), "--k", "2", "--bespoke", "--table", "x.csv")
        assert both.returncode == 2

    def test_table_and_bespoke_verdicts_agree_away_from_cutoff(self, tmp_path):
        # a perfect tiny fit sits far below every cutoff, so both cutoff
        # sources must return the same verdicts and exit code
        obs = tmp_path / "obs.txt"
        obs.write_text("1 1 2\n")
        table_path = tmp_path / "t.csv"
        build = run_cli(
            "simulate", "--n", "3", "--gamma", "1.0", "--k", "2",
            "--replicates", "2000", "--reps", "1", "--seed", "21",
            "--out", str(table_path), "--workers", "1",
        )
        assert build.returncode == 0, build.stderr
        via_table = run_cli("fit", "--input", str(obs), "--k", "2",
                            "--table", str(table_path))
        via_bespoke = run_cli(
            "fit", "--input", str(obs), "--k", "2", "--bespoke",
            "--replicates", "2000", "--reps", "1", "--seed", "21", "--workers", "1",
        )
        assert via_table.returncode == 0, via_table.stderr + via_table.stdout
        assert via_bespoke.returncode == 0, via_bespoke.stderr
        assert via_table.stdout.count("not rejected") == 4
        assert via_bespoke.stdout.count("not rejected") == 4


class TestTables:
    def test_full_grid_shape_for_finite_support(self, tmp_path):
        out = tmp_path / "grid.csv"
        result = run_cli(
            "tables", "--k", "20", "--replicates", "100", "--reps", "1",
            "--seed", "13", "--out", str(out), "--workers", "2",
            timeout=1200,
        )
        assert result.returncode == 0, result.stderr
        table = load_table(out)
        assert len(table.gammas) == 12
        assert len(table.ns) == 15
        assert len(table.cells) == 180
