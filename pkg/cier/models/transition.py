"""Transition and action time-series models."""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np


def _as_vector(values: Any) -> np.ndarray:
    return np.atleast_1d(np.asarray(values, dtype=float))


@dataclass
class Transition:
    """One environment step ``(s_t, a_t, r_t, s_{t+1})`` with its episode bookkeeping."""

    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    done: bool
    episode_id: int
    step_index: int

    def __post_init__(self) -> None:
        self.state = _as_vector(self.state)
        self.action = _as_vector(self.action)
        self.next_state = _as_vector(self.next_state)
        self.reward = float(self.reward)
        self.done = bool(self.done)
        if self.step_index < 0:
            raise ValueError(f"step_index must be >= 0, got {self.step_index}")

    @property
    def key(self) -> tuple:
        """``(episode_id, step_index)``, unique within a run."""
        return (self.episode_id, self.step_index)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation."""
        return {
            "state": self.state.tolist(),
            "action": self.action.tolist(),
            "reward": self.reward,
            "next_state": self.next_state.tolist(),
            "done": self.done,
            "episode_id": self.episode_id,
            "step_index": self.step_index,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Transition':
        """Create from dictionary representation."""
        return cls(
            state=data["state"],
            action=data["action"],
            reward=data["reward"],
            next_state=data.get("next_state", data["state"]),
            done=data.get("done", False),
            episode_id=int(data["episode_id"]),
            step_index=int(data["step_index"]),
        )


@dataclass
class ActionTimeSeries:
    """Chronological action frames of one episode, plus the episode return."""

    episode_id: int
    frames: np.ndarray
    episode_return: float = 0.0

    def __post_init__(self) -> None:
        frames = np.asarray(self.frames, dtype=float)
        if frames.ndim == 1:
            frames = frames.reshape(-1, 1)
        if frames.ndim != 2 or frames.shape[0] < 1 or frames.shape[1] < 1:
            raise ValueError(f"frames must be a non-empty (n, d) array, got shape {frames.shape}")
        self.frames = frames
        self.episode_return = float(self.episode_return)

    @property
    def length(self) -> int:
        return int(self.frames.shape[0])

    @property
    def dim(self) -> int:
        return int(self.frames.shape[1])

    def __len__(self) -> int:
        return self.length

    def subsequence(self, start: int, end: int) -> 'Subsequence':
        """Frames ``start..end`` (inclusive) as a :class:`Subsequence`."""
        return Subsequence(self.episode_id, start, end, self.frames[start:end + 1].copy())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "episode_id": self.episode_id,
            "frames": self.frames.tolist(),
            "return": self.episode_return,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ActionTimeSeries':
        return cls(
            episode_id=int(data["episode_id"]),
            frames=data["frames"],
            episode_return=data.get("return", 0.0),
        )


@dataclass
class Subsequence:
    """A contiguous run of frames ``start..end`` (inclusive) from one episode.

    Segments produced by a segmentation cover every frame, so single-frame
    subsequences (``start == end``) are allowed.
    """

    episode_id: int
    start: int
    end: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not 0 <= self.start <= self.end:
            raise ValueError(f"Invalid subsequence bounds [{self.start}, {self.end}]")
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if values.shape[0] != self.end - self.start + 1:
            raise ValueError(
                f"Subsequence [{self.start}, {self.end}] expects {self.end - self.start + 1} frames, "
                f"got {values.shape[0]}"
            )
        self.values = values

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])

    def __len__(self) -> int:
        return self.length

    @property
    def span(self) -> List[int]:
        return [self.start, self.end]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "episode_id": self.episode_id,
            "start": self.start,
            "end": self.end,
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Subsequence':
        return cls(
            episode_id=int(data["episode_id"]),
            start=int(data["start"]),
            end=int(data["end"]),
            values=data["values"],
        )
