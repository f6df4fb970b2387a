import csv
import json

import numpy as np
import pytest

from polymc import MaskedMatrix, sample_mask, write_masked_csv
from polymc.cli import EXIT_DATA, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, main


def make_masked_csv(path, rng, m=5, n=14, rho=0.6, seed=0):
    X = rng.standard_normal((m, n))
    mask = sample_mask(m, n, rho, seed)
    masked = MaskedMatrix(np.where(mask, X, np.nan), mask)
    write_masked_csv(masked, path)
    return X, mask


def read_table(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def drop_seconds(rows):
    return [{k: v for k, v in row.items() if k != "seconds"} for row in rows]


class TestMnp:
    def test_override_example(self, capsys):
        code = main(["mnp", "--m", "20", "--n", "200", "--q", "3", "--d-tilde", "73"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "r_tilde: 6" in out
        assert "mnp_phi: 2222" in out
        assert "sampling_lower_bound: 0.5555" in out
        assert "mnp_linear" not in out

    def test_generic_bound_with_linear_count(self, capsys):
        code = main(["mnp", "--m", "100", "--n", "500", "--d", "3", "--alpha", "2", "--q", "3"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "d_tilde: 84" in out
        assert "r_tilde: 6" in out
        assert "mnp_linear:" in out

    def test_missing_required_flag(self, capsys):
        assert main(["mnp", "--m", "20"]) == EXIT_USAGE


class TestComplete:
    def test_round_trip_preserves_observed(self, tmp_path, rng, capsys):
        src = tmp_path / "in.csv"
        out = tmp_path / "out.csv"
        X, mask = make_masked_csv(src, rng)
        code = main(["complete", "--input", str(src), "--output", str(out), "--tmax", "30"])
        assert code == EXIT_OK
        rows = [[float(c) for c in row] for row in csv.reader(out.open())]
        completed = np.array(rows)
        assert completed.shape == X.shape
        assert np.array_equal(completed[mask], X[mask])  # bit-exact round trip
        assert np.all(np.isfinite(completed))
        assert "config" in capsys.readouterr().err

    def test_fully_observed_hard_mode_is_data_error(self, tmp_path, rng, capsys):
        src = tmp_path / "in.csv"
        X = rng.standard_normal((3, 6))
        write_masked_csv(MaskedMatrix(X, np.ones_like(X, dtype=bool)), src)
        code = main(["complete", "--input", str(src), "--output", str(tmp_path / "o.csv")])
        assert code == EXIT_DATA
        assert "nothing to complete" in capsys.readouterr().err

    def test_missing_input_file(self, tmp_path, capsys):
        code = main(["complete", "--input", str(tmp_path / "nope.csv"), "--output", str(tmp_path / "o.csv")])
        assert code == EXIT_DATA

    def test_unknown_flag(self, tmp_path, capsys):
        assert main(["complete", "--input", "x", "--output", "y", "--frobnicate"]) == EXIT_USAGE

    def test_bad_parameter_value(self, tmp_path, rng, capsys):
        src = tmp_path / "in.csv"
        make_masked_csv(src, rng)
        code = main(["complete", "--input", str(src), "--output", str(tmp_path / "o.csv"), "--p", "7"])
        assert code == EXIT_USAGE

    def test_solver_failure_exit_code(self, tmp_path, rng, capsys):
        src = tmp_path / "in.csv"
        make_masked_csv(src, rng)
        with np.errstate(over="ignore", invalid="ignore"):
            code = main([
                "complete", "--input", str(src), "--output", str(tmp_path / "o.csv"),
                "--kernel", "poly", "--poly-order", "4", "--step", "1e160", "--tmax", "5",
            ])
        assert code == EXIT_SOLVER

    def test_config_file_and_flag_precedence(self, tmp_path, rng, capsys):
        src = tmp_path / "in.csv"
        make_masked_csv(src, rng)
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"tmax": 7, "relaxation": "r1"}))
        code = main([
            "complete", "--input", str(src), "--output", str(tmp_path / "o.csv"),
            "--config", str(cfg), "--tmax", "3",
        ])
        err = capsys.readouterr().err
        assert code == EXIT_OK
        assert "3 iterations" in err  # flag overrides config
        assert '"relaxation": "r1"' in err  # config overrides default

    def test_unknown_config_key(self, tmp_path, rng, capsys):
        src = tmp_path / "in.csv"
        make_masked_csv(src, rng)
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"tmaximum": 7}))
        code = main(["complete", "--input", str(src), "--output", str(tmp_path / "o.csv"), "--config", str(cfg)])
        assert code == EXIT_USAGE

    def test_soft_mode_and_explicit_sigma(self, tmp_path, rng):
        src = tmp_path / "in.csv"
        make_masked_csv(src, rng)
        out = tmp_path / "o.csv"
        code = main([
            "complete", "--input", str(src), "--output", str(out),
            "--mode", "soft", "--lambda", "5.0", "--sigma", "2.5", "--tmax", "10",
        ])
        assert code == EXIT_OK and out.exists()


class TestSynth:
    def test_deterministic_tables(self, tmp_path, capsys):
        args = ["synth", "--d", "2", "--m", "6", "--n", "12", "--k", "1",
                "--rho", "0.5", "--trials", "1", "--seed", "7", "--jobs", "1"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(out1)]) == EXIT_OK
        assert main(args + ["--out", str(out2)]) == EXIT_OK
        # identical up to wall-clock timings, which cannot be reproducible
        assert drop_seconds(read_table(out1)) == drop_seconds(read_table(out2))
        rows = read_table(out1)
        assert {row["method"] for row in rows} == {"kmc-r1", "kmc-r2", "kmc-r3", "nuclear"}


class TestBench:
    def test_grid_run(self, tmp_path, capsys):
        grid = tmp_path / "grid.json"
        grid.write_text(json.dumps({
            "methods": ["nuclear"], "rho": [0.4, 0.7], "n": 12,
            "d": 2, "m": 6, "trials": 1, "seed": 0,
            "solver": {"tmax": 10},
        }))
        out_dir = tmp_path / "results"
        code = main(["bench", "--grid", str(grid), "--out", str(out_dir), "--jobs", "1"])
        assert code == EXIT_OK
        rows = read_table(out_dir / "results.csv")
        assert len(rows) == 2
        plots = sorted(out_dir.glob("plot_*.csv"))
        assert len(plots) == 1 and "vs_rho" in plots[0].name

    def test_bad_grid(self, tmp_path, capsys):
        grid = tmp_path / "grid.json"
        grid.write_text(json.dumps({"rho": [0.5]}))
        assert main(["bench", "--grid", str(grid), "--out", str(tmp_path / "o")]) == EXIT_USAGE
        grid.write_text("not json")
        assert main(["bench", "--grid", str(grid), "--out", str(tmp_path / "o")]) == EXIT_USAGE


class TestClassify:
    @staticmethod
    def _write_task(tmp_path, rng, theta_args=()):
        from polymc import SyntheticSpec, generate_synthetic

        X, labels = generate_synthetic(SyntheticSpec(d=2, m=6, n=20, k=2, seed=5))
        train_idx = np.concatenate([np.arange(0, 10), np.arange(20, 30)])
        test_idx = np.concatenate([np.arange(10, 20), np.arange(30, 40)])
        paths = {}
        for name, arr in [
            ("train_x", X[:, train_idx]),
            ("test_x", X[:, test_idx]),
            ("train_y", labels[train_idx][np.newaxis, :].astype(float)),
            ("test_y", labels[test_idx][np.newaxis, :].astype(float)),
        ]:
            path = tmp_path / f"{name}.csv"
            write_masked_csv(MaskedMatrix(arr, np.ones_like(arr, dtype=bool)), path)
            paths[name] = str(path)
        return paths

    def test_predictions_and_error(self, tmp_path, rng, capsys):
        paths = self._write_task(tmp_path, rng)
        out = tmp_path / "pred.csv"
        code = main([
            "classify",
            "--train-features", paths["train_x"], "--train-labels", paths["train_y"],
            "--test-features", paths["test_x"], "--test-labels", paths["test_y"],
            "--out", str(out), "--tmax", "150",
        ])
        captured = capsys.readouterr()
        assert code == EXIT_OK
        assert "classification_error:" in captured.out
        error = float(captured.out.split("classification_error:")[1].strip().split()[0])
        assert 0.0 <= error <= 0.5
        predictions = read_table(out)
        rows = [[float(c) for c in row] for row in csv.reader(out.open())]
        assert len(rows[0]) == 20

    def test_theta_hides_features(self, tmp_path, rng, capsys):
        paths = self._write_task(tmp_path, rng)
        out = tmp_path / "pred.csv"
        code = main([
            "classify",
            "--train-features", paths["train_x"], "--train-labels", paths["train_y"],
            "--test-features", paths["test_x"],
            "--theta", "0.1", "--out", str(out), "--tmax", "60", "--seed", "3",
        ])
        assert code == EXIT_OK
        assert "predicted 20 labels" in capsys.readouterr().out

    def test_label_file_with_missing_cells_rejected(self, tmp_path, rng, capsys):
        paths = self._write_task(tmp_path, rng)
        bad = tmp_path / "bad_y.csv"
        bad.write_text("0,1,\n")
        code = main([
            "classify",
            "--train-features", paths["train_x"], "--train-labels", str(bad),
            "--test-features", paths["test_x"], "--out", str(tmp_path / "p.csv"),
        ])
        assert code == EXIT_DATA
