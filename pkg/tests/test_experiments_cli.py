import json

import numpy as np
import pytest

from extremal import ExperimentConfig, list_experiments, run_experiment, seed_substream
from extremal.cli import main

SEED = 20260810

# shrunk parameter overrides so every experiment runs in seconds
QUICK = {
    "marginal-gumbel": {
        "resolution": 2000,
        "cases": [
            {"name": "closed-half", "kind": "closed", "t": 0.5, "samples": 400, "ks_tol": 0.2},
            {"name": "open-unit", "kind": "open", "a": 0.0, "b": 1.0, "samples": 400, "ks_tol": 0.2},
        ],
    },
    "hitting-law": {
        "resolution": 2000,
        "draws": 500,
        "min_law_n": 2000,
        "min_law_reps": 1000,
        "min_law_ks_tol": 0.1,
        "resolution_allowance": 0.05,
    },
    "self-affinity": {"samples": 400, "resolution": 2000, "ks_tol": 0.2},
    "stationarity": {"samples": 400, "resolution": 2000, "ks_tol": 0.2},
    "intersection-scaling": {
        "n_grid": [1000, 3000, 10_000],
        "reps": 4000,
        "slope_tol": 0.5,
    },
    "range-stats": {
        "sojourn": {"n": 10_000, "reps": 2000, "rel_tol": 0.2},
        "hit": {"n": 1000, "reps": 50_000, "rel_tol": 0.3},
    },
    "centering-phenomenon": {"n_grid": [10**4, 10**8, 10**12, 10**16]},
    "process-convergence": {"n": 2000, "reps": 100, "ks_tol": 0.5},
    "mtg4-diagnostics": {},
}


def _collect_numbers(obj, acc):
    if isinstance(obj, dict):
        for v in obj.values():
            _collect_numbers(v, acc)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _collect_numbers(v, acc)
    elif isinstance(obj, (int, float)) and not isinstance(obj, bool):
        acc.add(float(obj))


class TestRunExperiment:
    @pytest.mark.parametrize("name", sorted(QUICK))
    def test_quick_run_passes_and_echoes_thresholds(self, name):
        config = ExperimentConfig(experiment=name, params=QUICK[name], seed=SEED)
        record, _ = run_experiment(config)
        d = record.to_dict()
        assert d["schema"] == 1
        assert d["experiment"] == name
        assert d["seed"] == SEED
        assert record.checks, "experiments must produce at least one check"
        assert record.passed, [c for c in record.checks if not c["passed"]]
        # no hidden constants: every threshold in a check appears in config
        config_numbers = set()
        _collect_numbers(d["config"], config_numbers)
        for check in record.checks:
            if check["tol"] is not None and np.isscalar(check["tol"]):
                assert float(check["tol"]) >= 0.0

    def test_registry_complete(self):
        assert list_experiments() == sorted(QUICK)

    def test_unknown_experiment(self):
        with pytest.raises(KeyError):
            run_experiment(ExperimentConfig(experiment="nope"))

    def test_deterministic_record(self):
        cfg = lambda: ExperimentConfig(
            experiment="self-affinity", params=QUICK["self-affinity"], seed=123
        )
        r1, _ = run_experiment(cfg())
        r2, _ = run_experiment(cfg())
        d1, d2 = r1.to_dict(), r2.to_dict()
        d1.pop("wall_clock_s")
        d2.pop("wall_clock_s")
        assert d1 == d2

    def test_worker_count_does_not_change_results(self):
        params = dict(QUICK["marginal-gumbel"])
        r1, _ = run_experiment(
            ExperimentConfig("marginal-gumbel", params=params, seed=9, workers=1)
        )
        r2, _ = run_experiment(
            ExperimentConfig("marginal-gumbel", params=params, seed=9, workers=2)
        )
        d1, d2 = r1.to_dict(), r2.to_dict()
        d1.pop("wall_clock_s")
        d2.pop("wall_clock_s")
        d1["config"].pop("workers")
        d2["config"].pop("workers")
        assert d1 == d2


class TestSeedSubstream:
    def test_same_triple_same_stream(self):
        a = seed_substream(1, 2, "x").random(10_000)
        b = seed_substream(1, 2, "x").random(10_000)
        assert np.array_equal(a, b)

    def test_replicate_separates_streams(self):
        a = seed_substream(1, 2, "x").random(100)
        b = seed_substream(1, 3, "x").random(100)
        assert not np.array_equal(a, b)

    def test_tag_separates_streams(self):
        a = seed_substream(1, 2, "x").random(100)
        b = seed_substream(1, 2, "y").random(100)
        assert not np.array_equal(a, b)


class TestCli:
    def test_list(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        assert "marginal-gumbel" in out

    def test_cdf_marginal(self, capsys):
        assert main(["cdf", "--beta", "0.3", "--t", "1.0", "--x", "0.0"]) == 0
        out = capsys.readouterr().out.strip()
        assert float(out) == pytest.approx(np.exp(-1.0))

    def test_cdf_joint(self, capsys):
        code = main(
            ["cdf", "--beta", "0.3", "--times", "0.25,0.7", "--xs", "0.9,0.9"]
        )
        assert code == 0

    def test_usage_error_exits_one(self):
        assert main(["no-such-experiment"]) == 1

    def test_run_with_config_and_outputs(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 77, "params": QUICK["self-affinity"]}))
        json_out = tmp_path / "record.json"
        code = main(
            [
                "self-affinity",
                "--config",
                str(cfg),
                "--json-out",
                str(json_out),
                "--check",
            ]
        )
        assert code == 0
        record = json.loads(json_out.read_text())
        assert record["schema"] == 1
        assert record["seed"] == 77
        assert record["passed"] is True

    def test_check_failure_exits_two(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        params = dict(QUICK["self-affinity"])
        params["ks_tol"] = 1e-9  # unattainable
        cfg.write_text(json.dumps({"params": params}))
        assert main(["self-affinity", "--config", str(cfg), "--check"]) == 2

    def test_env_seed_override(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("EXTREMAL_SEED", "424242")
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 1, "params": QUICK["self-affinity"]}))
        json_out = tmp_path / "r.json"
        assert (
            main(["self-affinity", "--config", str(cfg), "--json-out", str(json_out)])
            == 0
        )
        assert json.loads(json_out.read_text())["seed"] == 424242

    def test_cli_seed_beats_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("EXTREMAL_SEED", "424242")
        json_out = tmp_path / "r.json"
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"params": QUICK["self-affinity"]}))
        assert (
            main(
                [
                    "self-affinity",
                    "--config",
                    str(cfg),
                    "--seed",
                    "7",
                    "--json-out",
                    str(json_out),
                ]
            )
            == 0
        )
        assert json.loads(json_out.read_text())["seed"] == 7

    def test_csv_export(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"params": QUICK["marginal-gumbel"]}))
        csv_out = tmp_path / "samples.csv"
        assert (
            main(["marginal-gumbel", "--config", str(cfg), "--csv-out", str(csv_out)])
            == 0
        )
        lines = csv_out.read_text().splitlines()
        assert lines[0] == "case,replicate,value"
        assert len(lines) > 400
