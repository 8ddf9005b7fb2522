"""Tests for the training loop."""

import json

import numpy as np
import pytest

from cier.core.exceptions import DivergenceError
from cier.rl.trainer import Trainer, train
from cier.utils.episode_io import read_scores_csv


@pytest.mark.integration
class TestTrainer:
    """Short training runs on the planted-factor environment."""

    def test_uniform_run_is_deterministic(self, tiny_config):
        config = tiny_config.update(**{"replay.mode": "uniform"})

        first = train(config, seed=3)
        second = train(config, seed=3)

        assert first.episodes == 8
        assert first.scores == second.scores
        assert first.effect_history == []

    def test_per_run_learns_without_divergence(self, tiny_config):
        config = tiny_config.update(**{"replay.mode": "per", "agent.algorithm": "td3"})
        trainer = Trainer(config, seed=0)

        run = trainer.train()

        assert np.all(np.isfinite(run.scores))
        assert trainer.agent.updates > 0
        assert trainer.agent.is_finite()

    def test_ground_truth_recorded_for_motif_episodes(self, tiny_config):
        trainer = Trainer(tiny_config.update(**{"replay.mode": "uniform"}), seed=0)
        trainer.run_episode(0)
        assert set(trainer.ground_truth) <= {0}

    def test_divergence_detected(self, tiny_config):
        config = tiny_config.update(**{"replay.mode": "uniform", "run.score_bound": 1e-9})
        with pytest.raises(DivergenceError):
            train(config, seed=0)

    def test_curriculum_clock_advances(self, tiny_config):
        trainer = Trainer(tiny_config, seed=0)
        trainer.run_episode(0)
        trainer.after_episode(0)
        assert trainer.buffer.epsilon_c == 1.0

    @pytest.mark.slow
    def test_causal_run_records_analysis(self, tiny_config, tmp_path):
        """Test that filling the temporary pool triggers one analysis in eight episodes."""
        run = train(tiny_config, seed=0, output_dir=str(tmp_path))

        assert len(run.effect_history) == 1
        snapshot = run.effect_history[0]
        assert snapshot.episode == 4
        for name in ("scores.csv", "effects.json", "config.json", "run.json"):
            assert (tmp_path / name).exists()
        if snapshot.error is None:
            assert (tmp_path / "explain_000.txt").exists()
            assert all(v >= 0 for v in snapshot.strengths.values())

        assert read_scores_csv(str(tmp_path / "scores.csv")) == pytest.approx(run.scores)
        summary = json.loads((tmp_path / "run.json").read_text())
        assert summary["episodes"] == 8
        assert summary["mode"] == "cier"

    @pytest.mark.slow
    def test_async_analysis_is_collected(self, tiny_config):
        run = train(tiny_config.update(**{"run.async_analysis": True}), seed=0)
        assert len(run.effect_history) == 1
