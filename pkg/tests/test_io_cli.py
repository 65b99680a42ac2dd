"""Persistence round-trips and command-line behaviour."""

import json

import numpy as np
import pytest

from vrrw.cli import (
    EXIT_FAIL,
    EXIT_IO,
    EXIT_OK,
    EXIT_SIZE,
    ExperimentSpec,
    main,
    run_experiment,
    system_from_config,
)
from vrrw.dynamics import simulate
from vrrw.errors import ValidationError
from vrrw.graph_model import preset_complete
from vrrw.io import canonical_config_text, config_hash, load_trajectory, save_trajectory

K3_CONFIG = {
    "preset": {"family": "complete", "kappa": 3, "epsilon": 0.05, "eta": 1.2},
}

EXPLICIT_CONFIG = {
    "walks": [{"vertices": [1, 2, 3]}, {"vertices": [1, 2, 3]}],
    "alpha": 1.0,
    "eta": {"default": 2.0},
    "rho": {"pairwise_default": -1.0, "self_default": 0.0},
}


class TestConfigHash:
    def test_key_order_irrelevant(self):
        a = {"b": 1, "a": {"y": 2, "x": 3}}
        b = {"a": {"x": 3, "y": 2}, "b": 1}
        assert config_hash(a) == config_hash(b)

    def test_value_sensitivity(self):
        assert config_hash({"a": 1}) != config_hash({"a": 2})

    def test_canonical_text_is_compact(self):
        text = canonical_config_text({"b": 1, "a": 2})
        assert text == '{"a":2,"b":1}'


class TestTrajectoryRoundTrip:
    def test_csv_roundtrip_exact(self, tmp_path):
        graph, params = preset_complete(3, 0.05, 2.0)
        traj = simulate(graph, params, 5000, seed=12)
        path = tmp_path / "t.csv"
        save_trajectory(graph, traj, path, params_hash="abc")
        back = load_trajectory(graph, path)
        # values survive at the recorded 15-significant-digit precision
        assert np.allclose(back.states, traj.states, rtol=1e-14, atol=1e-16)
        assert np.array_equal(back.ns, traj.ns)
        assert np.allclose(back.overlaps, traj.overlaps, rtol=1e-14, atol=1e-16)
        assert back.seed == 12
        assert back.n_steps == 5000
        # a second write of the parsed trajectory is byte-stable
        path2 = tmp_path / "t2.csv"
        save_trajectory(graph, back, path2, params_hash="abc")
        assert path.read_bytes() == path2.read_bytes()

    def test_sidecar_contents(self, tmp_path):
        graph, params = preset_complete(2, 0.0, 2.0)
        traj = simulate(graph, params, 100, seed=3, replica=2)
        path = tmp_path / "t.csv"
        save_trajectory(graph, traj, path, params_hash="deadbeef")
        sidecar = json.loads((tmp_path / "t.json").read_text())
        assert sidecar["seed"] == 3
        assert sidecar["replica"] == 2
        assert sidecar["params_hash"] == "deadbeef"


class TestSystemFromConfig:
    def test_preset_form(self):
        graph, params = system_from_config(K3_CONFIG)
        assert graph.dim == 6
        assert params.get_rho(1, 0, 0) == pytest.approx(-0.05)

    def test_explicit_form(self):
        graph, _ = system_from_config(EXPLICIT_CONFIG)
        assert graph.dim == 6

    def test_unknown_family(self):
        with pytest.raises(ValidationError):
            system_from_config({"preset": {"family": "torus"}})


class TestRunExperiment:
    def test_outputs_and_manifest(self, tmp_path):
        spec = ExperimentSpec(
            config=K3_CONFIG, n_steps=2000, seeds=[1, 2], out_dir=tmp_path / "out"
        )
        manifest = run_experiment(spec)
        assert set(manifest.seeds) == {1, 2}
        for seed, path in manifest.outputs.items():
            assert (tmp_path / "out" / f"traj_seed{seed}.csv").exists()
            assert (tmp_path / "out" / f"traj_seed{seed}.png").exists()
        stored = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert stored["config_hash"] == config_hash(K3_CONFIG)

    def test_rerun_byte_identical(self, tmp_path):
        spec1 = ExperimentSpec(config=K3_CONFIG, n_steps=1500, seeds=[7],
                               out_dir=tmp_path / "a")
        spec2 = ExperimentSpec(config=K3_CONFIG, n_steps=1500, seeds=[7],
                               out_dir=tmp_path / "b")
        run_experiment(spec1)
        run_experiment(spec2)
        a = (tmp_path / "a" / "traj_seed7.csv").read_bytes()
        b = (tmp_path / "b" / "traj_seed7.csv").read_bytes()
        assert a == b

    def test_requires_seeds(self):
        with pytest.raises(ValidationError):
            ExperimentSpec(config=K3_CONFIG, n_steps=10, seeds=[])


class TestCli:
    def write_config(self, tmp_path, config=K3_CONFIG):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        return str(path)

    def test_simulate_and_match(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        out = tmp_path / "runs"
        code = main(["simulate", "--config", cfg, "--seeds", "1..2",
                     "--steps", "1000", "--out", str(out)])
        assert code == EXIT_OK
        assert (out / "traj_seed1.csv").exists()
        code = main(["match", "--config", cfg, str(out / "traj_seed1.csv")])
        assert code in (EXIT_OK, EXIT_FAIL)  # verdict-dependent
        rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()
                if line.startswith("{")]
        assert rows and {"seed", "distance", "verdict"} <= set(rows[-1])

    def test_predict_json(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        assert main(["predict", "--config", cfg]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["family"] == "complete"
        assert len(payload["points"]) == 18

    def test_fixed_points_json(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        assert main(["fixed-points", "--config", cfg, "--format", "json"]) == EXIT_OK
        rows = json.loads(capsys.readouterr().out)
        assert len(rows) == 25

    def test_stability_output(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        assert main(["stability", "--config", cfg]) == EXIT_OK
        out = capsys.readouterr().out
        assert "ExcludedInterior" in out
        assert "Candidate" in out

    def test_missing_config_is_io_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            main(["predict", "--config", str(tmp_path / "nope.json")])
        assert err.value.code == EXIT_IO

    def test_invalid_system_is_failure(self, tmp_path):
        cfg = self.write_config(
            tmp_path,
            {"preset": {"family": "complete", "kappa": 3, "epsilon": 0.0, "eta": 0.5}},
        )
        assert main(["fixed-points", "--config", cfg]) == EXIT_FAIL

    def test_size_guard_exit_code(self, tmp_path):
        cfg = self.write_config(
            tmp_path,
            {"preset": {"family": "complete", "kappa": 13, "epsilon": 0.0, "eta": 2.0}},
        )
        assert main(["fixed-points", "--config", cfg]) == EXIT_SIZE

    def test_lyapunov_subcommand(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        out = tmp_path / "runs"
        main(["simulate", "--config", cfg, "--seed", "1", "--steps", "1000",
              "--out", str(out)])
        code = main(["lyapunov", "--config", cfg, "--trajectory",
                     str(out / "traj_seed1.csv")])
        assert code in (EXIT_OK, EXIT_FAIL)
        assert "values" in capsys.readouterr().out
