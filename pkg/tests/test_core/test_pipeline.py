"""Tests for the causal analysis pipeline."""

import networkx as nx
import numpy as np
import pytest

from cier.core.config import CIERConfig
from cier.core.pipeline import CausalAnalysisPipeline
from cier.core.results import AnalysisRequest
from cier.models.transition import ActionTimeSeries
from cier.rl.envs import motif_template
from tests.conftest import make_transitions, two_regime_series


@pytest.fixture
def pipeline(tiny_config):
    return CausalAnalysisPipeline(tiny_config)


def motif_episodes(count=16, length=30, seed=0):
    """Random-walk episodes; odd ones contain the motif at a random start and earn a pulse."""
    rng = np.random.default_rng(seed)
    motif = motif_template(5)
    episodes, truth = [], {}
    for episode in range(count):
        frames = np.clip(np.cumsum(rng.normal(scale=0.1, size=(length, 2)), axis=0), -1, 1)
        ret = float(rng.normal(scale=0.05))
        if episode % 2:
            start = int(rng.integers(0, length - 5))
            frames[start:start + 5] = motif
            truth[episode] = [(start, start + 4)]
            ret += 1.0
        episodes.append(ActionTimeSeries(episode, frames, ret))
    return episodes, truth


@pytest.mark.unit
class TestSegmentation:
    """Per-episode segmentation inside the pipeline."""

    def test_cluster_count(self):
        pipeline = CausalAnalysisPipeline(CIERConfig())
        assert pipeline.cluster_count(100) == 4
        assert pipeline.cluster_count(5) == 1

    def test_short_episode_is_one_segment(self, pipeline):
        series = ActionTimeSeries(0, np.zeros((2, 2)))
        segmentation, models = pipeline.segment_series(series)

        assert segmentation.K == 1
        assert [(s.start, s.end) for s in segmentation.segments] == [(0, 1)]
        assert models == []

    def test_segments_cover_raw_frames(self, pipeline):
        series, _ = two_regime_series(seed=0, length=80)
        segmentation, models = pipeline.segment_series(series, k=2)

        spans = [(s.start, s.end) for s in segmentation.segments]
        assert spans[0][0] == 0
        assert spans[-1][1] == 79
        assert all(b[0] == a[1] + 1 for a, b in zip(spans, spans[1:]))
        np.testing.assert_array_equal(segmentation.segments[0].values, series.frames[:spans[0][1] + 1])
        assert len(models) == 2


@pytest.mark.integration
@pytest.mark.slow
class TestAnalysis:
    """End-to-end analysis of a batch of episodes."""

    def test_run_produces_consistent_result(self, pipeline):
        episodes, truth = motif_episodes()
        result = pipeline.run(episodes, request_id=7, ground_truth=truth)

        assert result.request_id == 7
        assert result.episode_ids == list(range(16))
        assert len(result.encodings) == 16
        assert all(len(e.U) == result.k_prime for e in result.encodings)
        assert all(s >= 0 for s in result.effect_table.strengths().values())
        assert result.dag.is_fully_directed()
        assert nx.is_directed_acyclic_graph(result.dag.to_digraph())
        assert result.dag.children(result.dag.outcome) == []
        assert result.planted_factor is not None
        assert result.planted_relevant in (True, False)

        summary = result.to_dict()
        assert summary["k_prime"] == result.k_prime
        assert summary["episodes"] == list(range(16))

    def test_occurrences_point_into_episodes(self, pipeline):
        episodes, _ = motif_episodes(count=10, seed=1)
        result = pipeline.run(episodes)
        encodings = {e.episode_id: e for e in result.encodings}

        for (episode, factor), spans in result.occurrences.items():
            assert 0 <= factor < result.k_prime
            assert all(0 <= start <= end < 30 for start, end in spans)
            assert encodings[episode].U[factor] == 1

    def test_analyze_accepts_transition_lists(self, pipeline):
        episodes, _ = motif_episodes(count=10, seed=2)
        transitions = [
            make_transitions(e.frames, episode_id=e.episode_id, rewards=np.r_[np.zeros(29), e.episode_return])
            for e in episodes
        ]
        request = AnalysisRequest(request_id=3, episode_ids=list(range(10)), episodes=transitions,
                                  transition_count=300)

        from_transitions = pipeline.analyze(request)
        from_series = pipeline.run(episodes, request_id=3)

        assert from_transitions.k_prime == from_series.k_prime
        assert from_transitions.effect_table.strengths() == pytest.approx(from_series.effect_table.strengths())
