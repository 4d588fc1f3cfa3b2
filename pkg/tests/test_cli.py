import json

import numpy as np
import pytest

from histosynth.cli import main
from histosynth.config import ConfigError, RunConfig, load_run_config
from histosynth.labels import load_mask_png


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig({})
        assert cfg["gan"]["lr"] == 2e-4
        assert cfg["run"]["seed"] == 0

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig({"gan": {"learning_rate": 1e-3}})

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig({"ganz": {}})

    def test_type_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig({"gan": {"lr": "fast"}})

    def test_toml_load_and_echo(self, tmp_path):
        toml = tmp_path / "run.toml"
        toml.write_text("[run]\nseed = 5\n\n[mask]\nmean_distance = 8.0\n")
        cfg = load_run_config(toml)
        assert cfg["run"]["seed"] == 5
        assert cfg["mask"]["mean_distance"] == 8.0
        cfg.echo(tmp_path)
        echoed = json.loads((tmp_path / "configs" / "run_config.json").read_text())
        assert echoed["sections"]["run"]["seed"] == 5


class TestCli:
    def test_unknown_subcommand_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_mask_synth_and_noise_deterministic(self, tmp_path):
        base = tmp_path / "base.png"
        assert main(["mask", "synth", "--tps", "0.3", "--out", str(base)]) == 0
        out1 = tmp_path / "n1.png"
        out2 = tmp_path / "n2.png"
        for out in (out1, out2):
            code = main(["--seed", "7", "mask", "noise", "--mask", str(base),
                         "--mean-distance", "15", "--out", str(out)])
            assert code == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert np.any(load_mask_png(out1).labels == 4)

    def test_runtime_failure_exit_1(self, tmp_path, capsys):
        code = main(["mask", "noise", "--mask", str(tmp_path / "missing.png"),
                     "--mean-distance", "15", "--out", str(tmp_path / "o.png")])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_bad_config_exit_2(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("[gan]\nnope = 1\n")
        code = main(["--config", str(bad), "mask", "synth", "--tps", "0",
                     "--out", str(tmp_path / "m.png")])
        assert code == 2

    def test_eval_fd_self_zero(self, tmp_path, capsys):
        from histosynth.corpus import CorpusConfig, generate_corpus

        generate_corpus(tmp_path / "c", CorpusConfig(n_pairs=4, width=64,
                                                     height=32, seed=0))
        imgs = str(tmp_path / "c" / "images")
        assert main(["eval", "fd", "--real", imgs, "--synth", imgs]) == 0
        out = json.loads(capsys.readouterr().out.strip())
        assert out["fd"] <= 1e-8
