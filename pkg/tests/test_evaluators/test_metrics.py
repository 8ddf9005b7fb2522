"""Tests for training-curve metrics and multi-seed comparisons."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cier.core.exceptions import EmptyScores, SeedMismatch
from cier.evaluators.metrics import compare_runs, compute_metrics, episodes_to_threshold, signed_rank_test


@pytest.mark.unit
class TestComputeMetrics:
    """Test cases for compute_metrics."""

    @pytest.mark.parametrize("scores,expected", [
        ([1, 2, 3], (2.0, 3.0, 2, 10 / 3)),
        ([5, 5], (5.0, 5.0, 1, 7.5)),
        ([3, 1, 2], (2.0, 3.0, 1, 13 / 3)),
    ])
    def test_known_curves(self, scores, expected):
        metrics = compute_metrics(scores)
        assert (metrics.AS, metrics.BS, metrics.SAS) == pytest.approx(expected[:3])
        assert metrics.ACS == pytest.approx(expected[3])

    def test_empty(self):
        with pytest.raises(EmptyScores):
            compute_metrics([])

    def test_episodes_to_threshold(self):
        assert episodes_to_threshold([0, 1, 5, 2], 4) == 3
        assert episodes_to_threshold([0, 1], 4) == 3

    @pytest.mark.property
    @given(st.lists(st.integers(-100, 100).map(float), min_size=1, max_size=50))
    @settings(max_examples=100, deadline=None)
    def test_metric_bounds(self, scores):
        metrics = compute_metrics(scores)
        assert metrics.BS >= metrics.AS
        assert 1 <= metrics.SAS <= len(scores)
        assert scores[metrics.SAS - 1] >= metrics.AS - 1e-9


@pytest.mark.unit
class TestComparisons:
    """Test cases for signed_rank_test and compare_runs."""

    def test_zero_differences(self):
        result = signed_rank_test([0.0, 0.0, 0.0])
        assert result.p_value == 1.0
        assert result.nonzero == 0

    def test_positive_rank_sum(self):
        result = signed_rank_test([1.0, -2.0, 3.0, 0.0])
        assert result.statistic == pytest.approx(4.0)
        assert result.nonzero == 3
        assert result.n_pairs == 4

    def test_identical_runs(self):
        runs = [list(np.random.default_rng(s).normal(size=20)) for s in range(12)]
        report = compare_runs(runs, runs)

        assert report.p_value == 1.0
        assert report.notes == []
        assert report.baseline_medians == report.treatment_medians

    def test_shifted_treatment_wins(self):
        baseline = [list(np.random.default_rng(s).normal(size=30)) for s in range(20)]
        treatment = [list(np.asarray(b) + 1.0) for b in baseline]

        report = compare_runs(baseline, treatment)

        assert report.p_value < 0.05
        assert report.treatment_medians["AS"] == pytest.approx(report.baseline_medians["AS"] + 1.0)
        assert all(t <= b for b, t in zip(report.baseline_episodes_to_threshold,
                                          report.treatment_episodes_to_threshold))
        assert report.to_dict()["seeds"] == 20

    def test_few_seeds_noted(self):
        runs = [[1.0, 2.0], [2.0, 3.0]]
        report = compare_runs(runs, runs)
        assert report.notes and "2 paired seeds" in report.notes[0]

    def test_mismatched_runs(self):
        with pytest.raises(SeedMismatch):
            compare_runs([[1.0]], [[1.0], [2.0]])
        with pytest.raises(SeedMismatch):
            compare_runs([[1.0, 2.0]], [[1.0]])
        with pytest.raises(EmptyScores):
            compare_runs([], [])
