"""Tests for episode ingestion, normalization and window embedding."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cier.core.exceptions import (
    DataError, DimensionMismatch, EmptyEpisode, MixedEpisodes, TooShort, WindowTooLarge,
)
from cier.models.transition import ActionTimeSeries, Transition
from cier.timeseries.series import build_series, window_stack, znormalize
from tests.conftest import make_transitions


@pytest.mark.unit
class TestBuildSeries:
    """Test cases for build_series."""

    def test_single_transition(self):
        """Test that one transition gives one frame and its reward as return."""
        series = build_series(make_transitions([[0.5, -0.2]], rewards=[1.0]))

        np.testing.assert_array_equal(series.frames, [[0.5, -0.2]])
        assert series.episode_return == 1.0

    def test_return_is_reward_sum(self):
        series = build_series(make_transitions([0.0, 0.1, 0.2], episode_id=4, rewards=[1, 2, 3]))

        assert series.episode_return == 6.0
        assert series.episode_id == 4
        assert series.frames.shape == (3, 1)

    def test_frames_equal_actions(self):
        actions = np.arange(12, dtype=float).reshape(6, 2)
        np.testing.assert_array_equal(build_series(make_transitions(actions)).frames, actions)

    def test_empty_episode(self):
        with pytest.raises(EmptyEpisode):
            build_series([])

    def test_mixed_episodes(self):
        transitions = make_transitions([0.0, 1.0]) + make_transitions([0.0], episode_id=1)
        with pytest.raises(MixedEpisodes):
            build_series(transitions)

    def test_dimension_mismatch(self):
        transitions = make_transitions([[0.0, 1.0]])
        transitions.append(Transition([0.0, 0.0], [1.0], 0.0, [0.0, 0.0], True, 0, 1))
        with pytest.raises(DimensionMismatch):
            build_series(transitions)

    def test_non_contiguous_steps(self):
        transitions = make_transitions([0.0, 1.0, 2.0])
        del transitions[1]
        with pytest.raises(DataError, match="contiguous"):
            build_series(transitions)


@pytest.mark.unit
class TestZNormalize:
    """Test cases for znormalize."""

    def test_two_frames(self):
        """Test that [1, 3] normalizes to [-1, 1]."""
        out = znormalize(ActionTimeSeries(0, [[1.0], [3.0]]))
        np.testing.assert_allclose(out.frames, [[-1.0], [1.0]])

    def test_constant_dimension_is_zero(self):
        out = znormalize(ActionTimeSeries(0, [[2.0, 1.0], [2.0, 5.0], [2.0, 3.0]]))
        np.testing.assert_array_equal(out.frames[:, 0], 0.0)
        assert out.frames[:, 1].std() == pytest.approx(1.0)

    def test_too_short(self):
        with pytest.raises(TooShort):
            znormalize(ActionTimeSeries(0, [[1.0]]))

    def test_return_preserved(self):
        series = ActionTimeSeries(3, [[1.0], [2.0], [4.0]], episode_return=7.0)
        out = znormalize(series)
        assert out.episode_return == 7.0
        assert out.episode_id == 3

    @pytest.mark.property
    @given(arrays(np.float64, st.tuples(st.integers(2, 30), st.integers(1, 3)),
                  elements=st.integers(-100, 100).map(float)))
    @settings(max_examples=60, deadline=None)
    def test_idempotent(self, frames):
        """Test that normalizing twice changes nothing."""
        once = znormalize(ActionTimeSeries(0, frames))
        twice = znormalize(once)
        np.testing.assert_allclose(twice.frames, once.frames, atol=1e-6)

    @pytest.mark.property
    @given(arrays(np.float64, st.tuples(st.integers(2, 30), st.integers(1, 3)),
                  elements=st.integers(-100, 100).map(float)))
    @settings(max_examples=60, deadline=None)
    def test_zero_mean(self, frames):
        out = znormalize(ActionTimeSeries(0, frames))
        np.testing.assert_allclose(out.frames.mean(axis=0), 0.0, atol=1e-9)


@pytest.mark.unit
class TestWindowStack:
    """Test cases for window_stack."""

    def test_scalar_series(self):
        """Test that [1, 2, 3] with w=2 stacks to [[1, 2], [2, 3]]."""
        out = window_stack(ActionTimeSeries(0, [1.0, 2.0, 3.0]), 2)
        np.testing.assert_array_equal(out, [[1.0, 2.0], [2.0, 3.0]])

    def test_frames_concatenated_in_order(self):
        series = ActionTimeSeries(0, [[1, 10], [2, 20], [3, 30]])
        out = window_stack(series, 2)

        assert out.shape == (2, 4)
        np.testing.assert_array_equal(out[0], [1, 10, 2, 20])

    def test_window_equal_to_length(self):
        out = window_stack(ActionTimeSeries(0, [1.0, 2.0, 3.0]), 3)
        assert out.shape == (1, 3)

    def test_window_too_large(self):
        with pytest.raises(WindowTooLarge):
            window_stack(ActionTimeSeries(0, [1.0, 2.0]), 3)

    def test_window_must_be_positive(self):
        with pytest.raises(ValueError):
            window_stack(ActionTimeSeries(0, [1.0, 2.0]), 0)
