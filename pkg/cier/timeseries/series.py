"""Episode ingestion: transitions to action time series, normalization and window embedding."""

from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..core.exceptions import (
    DataError, DimensionMismatch, EmptyEpisode, MixedEpisodes, TooShort, WindowTooLarge,
)
from ..models.transition import ActionTimeSeries, Transition

# Standard deviations below this are treated as constant dimensions.
CONSTANT_STD = 1e-12


def build_series(transitions: Sequence[Transition]) -> ActionTimeSeries:
    """Arrange the action frames of one episode chronologically.

    Args:
        transitions: Transitions of a single episode ordered by step index

    Returns:
        ActionTimeSeries whose frames equal the logged actions and whose return is
        the sum of rewards

    Raises:
        EmptyEpisode: If no transitions are given
        MixedEpisodes: If the transitions span several episodes
        DimensionMismatch: If action dimensions differ
        DataError: If step indices are not contiguous from 0
    """
    if not transitions:
        raise EmptyEpisode()

    episode_ids = {t.episode_id for t in transitions}
    if len(episode_ids) > 1:
        raise MixedEpisodes([t.episode_id for t in transitions])
    episode_id = transitions[0].episode_id

    d = transitions[0].action.shape[0]
    for t in transitions:
        if t.action.shape[0] != d:
            raise DimensionMismatch(d, t.action.shape[0], where=f"episode {episode_id} step {t.step_index}")

    for expected, t in enumerate(transitions):
        if t.step_index != expected:
            raise DataError(
                f"Episode {episode_id}: step indices must be contiguous from 0, "
                f"found {t.step_index} at position {expected}")

    frames = np.vstack([t.action for t in transitions])
    episode_return = sum(t.reward for t in transitions)
    return ActionTimeSeries(episode_id=episode_id, frames=frames, episode_return=episode_return)


def znormalize(series: ActionTimeSeries) -> ActionTimeSeries:
    """Per-dimension zero mean and unit standard deviation.

    Constant dimensions map to all zeros.

    Raises:
        TooShort: If the series has fewer than two frames
    """
    if series.length < 2:
        raise TooShort(series.length, 2)

    frames = series.frames
    mean = frames.mean(axis=0)
    std = frames.std(axis=0)
    constant = std < CONSTANT_STD
    scale = np.where(constant, 1.0, std)
    normalized = (frames - mean) / scale
    normalized[:, constant] = 0.0
    # Second centering pass removes round-off left by the first.
    normalized[:, ~constant] -= normalized[:, ~constant].mean(axis=0)
    return ActionTimeSeries(series.episode_id, normalized, series.episode_return)


def window_stack(series: ActionTimeSeries, w: int) -> np.ndarray:
    """Embed each run of ``w`` consecutive frames as one ``d*w`` vector.

    Row ``t`` is the concatenation of frames ``t..t+w-1``.

    Returns:
        Array of shape ``(n - w + 1, d * w)``

    Raises:
        WindowTooLarge: If ``w > n``
        ValueError: If ``w < 1``
    """
    if w < 1:
        raise ValueError(f"Window must be >= 1, got {w}")
    n, d = series.frames.shape
    if w > n:
        raise WindowTooLarge(w, n)
    windows = sliding_window_view(series.frames, (w, d))[:, 0]
    return np.ascontiguousarray(windows.reshape(n - w + 1, w * d))
