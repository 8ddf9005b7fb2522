"""Desk-scale continuous-control environments.

Both environments step at a fixed 5 Hz (``DT = 0.2`` simulated seconds per step)
and take 2-dimensional actions in ``[-1, 1]``.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..core.config import EnvConfig
from ..core.exceptions import ConfigurationError, DimensionMismatch, EpisodeFinished
from ..core.interfaces import Environment
from ..utils.logging import LoggerMixin

DT = 0.2
MOTIF_AMPLITUDE = 0.8


@dataclass
class EnvSpec:
    """State space, action box, step limit and discount of an environment."""

    state_dim: int
    action_dim: int
    low: np.ndarray
    high: np.ndarray
    max_steps: int
    gamma: float

    def __post_init__(self) -> None:
        self.low = np.broadcast_to(np.asarray(self.low, dtype=float), (self.action_dim,)).copy()
        self.high = np.broadcast_to(np.asarray(self.high, dtype=float), (self.action_dim,)).copy()
        if not (np.all(np.isfinite(self.low)) and np.all(np.isfinite(self.high))):
            raise ConfigurationError("Action bounds must be finite")
        if np.any(self.low >= self.high):
            raise ConfigurationError("Action bounds require low < high in every dimension")
        if not 0.0 < self.gamma < 1.0:
            raise ConfigurationError(f"gamma must be in (0, 1), got {self.gamma}")

    @property
    def action_scale(self) -> np.ndarray:
        return (self.high - self.low) / 2.0

    @property
    def action_center(self) -> np.ndarray:
        return (self.high + self.low) / 2.0

    def to_dict(self) -> dict:
        return {
            "state_dim": self.state_dim,
            "action_dim": self.action_dim,
            "low": self.low.tolist(),
            "high": self.high.tolist(),
            "max_steps": self.max_steps,
            "gamma": self.gamma,
        }


class _EpisodicEnv(Environment, LoggerMixin):
    """Shared episode bookkeeping: step counter, done flag, action clamping."""

    def __init__(self, config: EnvConfig, seed: Optional[int] = None):
        config.validate()
        self.config = config
        self.rng = np.random.default_rng(seed)
        self.t = 0
        self.done = True
        self.episode_return = 0.0

    @property
    def spec(self) -> EnvSpec:
        return self._spec

    def _clamp(self, action: np.ndarray) -> np.ndarray:
        action = np.atleast_1d(np.asarray(action, dtype=float))
        if action.shape != (self._spec.action_dim,):
            raise DimensionMismatch(self._spec.action_dim, action.size, where="action")
        clipped = np.clip(action, self._spec.low, self._spec.high)
        if not np.array_equal(clipped, action):
            self.logger.warning("Action %s outside bounds; clamped to %s", action.tolist(), clipped.tolist())
        return clipped

    def reset(self, seed: Optional[int] = None) -> np.ndarray:
        if seed is not None:
            self.rng = np.random.default_rng(seed)
        self.t = 0
        self.done = False
        self.episode_return = 0.0
        self._reset()
        return self._observe()

    def step(self, action: np.ndarray) -> Tuple[np.ndarray, float, bool]:
        if self.done:
            raise EpisodeFinished("step() called on a finished episode; call reset() first")
        action = self._clamp(action)
        reward, terminal = self._advance(action)
        self.t += 1
        self.done = terminal or self.t >= self._spec.max_steps
        self.episode_return += reward
        return self._observe(), reward, self.done

    def _reset(self) -> None:
        raise NotImplementedError

    def _advance(self, action: np.ndarray) -> Tuple[float, bool]:
        raise NotImplementedError

    def _observe(self) -> np.ndarray:
        raise NotImplementedError


class LaneWorldEnv(_EpisodicEnv):
    """Multi-lane road with scripted constant-velocity traffic.

    Action ``[acceleration, steering]``. The ego speed is clamped to
    ``[v_min, v_max]`` and its lateral position to the road. The reward is
    ``a * (v - v_min) / (v_max - v_min) - b * collision`` and a collision ends the
    episode.

    ``obstacles`` is an ``(n, 3)`` array of longitudinal position, lateral
    position and speed.
    """

    COLLISION_DX = 0.3
    COLLISION_DY = 0.4
    VIEW = 10.0

    def __init__(self, config: EnvConfig, seed: Optional[int] = None):
        super().__init__(config, seed)
        self._spec = EnvSpec(
            state_dim=2 + 2 * config.n_obstacles,
            action_dim=2,
            low=-1.0,
            high=1.0,
            max_steps=config.max_steps,
            gamma=config.gamma,
        )
        self.x = 0.0
        self.v = config.v_min
        self.y = 0.0
        self.obstacles = np.zeros((config.n_obstacles, 3))
        self.collided = False

    @property
    def road_width(self) -> float:
        return float(self.config.n_lanes - 1)

    def _reset(self) -> None:
        cfg = self.config
        self.x = 0.0
        self.v = cfg.v_min + 0.5 * (cfg.v_max - cfg.v_min)
        self.y = float(self.rng.integers(cfg.n_lanes))
        self.collided = False
        n = cfg.n_obstacles
        self.obstacles = np.column_stack([
            self.rng.uniform(1.5, 8.0, size=n),
            self.rng.integers(cfg.n_lanes, size=n).astype(float),
            self.rng.uniform(cfg.v_min, cfg.v_min + 0.5 * (cfg.v_max - cfg.v_min), size=n),
        ])

    def reward(self, v: float, collision: bool) -> float:
        cfg = self.config
        return cfg.reward_a * (v - cfg.v_min) / (cfg.v_max - cfg.v_min) - cfg.reward_b * float(collision)

    def _advance(self, action: np.ndarray) -> Tuple[float, bool]:
        cfg = self.config
        self.v = float(np.clip(self.v + action[0] * DT, cfg.v_min, cfg.v_max))
        self.y = float(np.clip(self.y + action[1] * DT, 0.0, self.road_width))
        self.x += self.v * DT
        if len(self.obstacles):
            self.obstacles[:, 0] += self.obstacles[:, 2] * DT
            dx = np.abs(self.obstacles[:, 0] - self.x)
            dy = np.abs(self.obstacles[:, 1] - self.y)
            self.collided = bool(np.any((dx < self.COLLISION_DX) & (dy < self.COLLISION_DY)))
        return self.reward(self.v, self.collided), self.collided

    def _observe(self) -> np.ndarray:
        cfg = self.config
        width = max(self.road_width, 1.0)
        ego = [(self.v - cfg.v_min) / (cfg.v_max - cfg.v_min), self.y / width]
        rel = np.column_stack([
            (self.obstacles[:, 0] - self.x) / self.VIEW,
            (self.obstacles[:, 1] - self.y) / width,
        ]).ravel() if len(self.obstacles) else np.zeros(0)
        return np.concatenate([ego, rel])


def motif_template(length: int) -> np.ndarray:
    """Fixed trigger pattern: ``length`` points evenly spaced on a circle of radius 0.8."""
    angles = 2.0 * np.pi * np.arange(length) / length
    return MOTIF_AMPLITUDE * np.column_stack([np.cos(angles), np.sin(angles)])


class PlantedFactorEnv(_EpisodicEnv):
    """Environment whose only informative reward follows a hidden action motif.

    When the last ``motif_length`` actions match the motif template within
    ``motif_tolerance`` (max-abs distance per component), a pulse of ``pulse``
    is paid ``delay`` steps later. The pulse fires at most once per episode; every
    step also carries ``N(0, noise_sigma^2)`` reward noise.

    The state holds the recent action window, the elapsed time fraction and a
    pending-pulse flag. The step interval of each completed motif is recorded as
    generator ground truth.
    """

    def __init__(self, config: EnvConfig, seed: Optional[int] = None):
        super().__init__(config, seed)
        self.motif = motif_template(config.motif_length)
        self._spec = EnvSpec(
            state_dim=2 * config.motif_length + 2,
            action_dim=2,
            low=-1.0,
            high=1.0,
            max_steps=config.max_steps,
            gamma=config.gamma,
        )
        self.history = np.zeros((config.motif_length, 2))
        self.pulse_at: Optional[int] = None
        self.triggered = False
        self._intervals: List[Tuple[int, int]] = []

    def _reset(self) -> None:
        self.history = np.zeros((self.config.motif_length, 2))
        self.pulse_at = None
        self.triggered = False
        self._intervals = []

    def matches(self, window: np.ndarray) -> bool:
        return bool(np.max(np.abs(window - self.motif)) <= self.config.motif_tolerance)

    def _advance(self, action: np.ndarray) -> Tuple[float, bool]:
        cfg = self.config
        self.history = np.vstack([self.history[1:], action])
        if not self.triggered and self.t + 1 >= cfg.motif_length and self.matches(self.history):
            self.triggered = True
            self.pulse_at = self.t + cfg.delay
            self._intervals.append((self.t - cfg.motif_length + 1, self.t))

        reward = float(self.rng.normal(0.0, cfg.noise_sigma)) if cfg.noise_sigma > 0 else 0.0
        if self.pulse_at is not None and self.t == self.pulse_at:
            reward += cfg.pulse
            self.pulse_at = None
        return reward, False

    def _observe(self) -> np.ndarray:
        pending = 1.0 if self.pulse_at is not None else 0.0
        return np.concatenate([self.history.ravel(), [self.t / self.config.max_steps, pending]])

    def planted_intervals(self) -> List[Tuple[int, int]]:
        return list(self._intervals)


ENVIRONMENT_TYPES = {
    "lane_world": LaneWorldEnv,
    "planted_factor": PlantedFactorEnv,
}


def make_env(config: EnvConfig, seed: Optional[int] = None) -> Environment:
    """Instantiate the environment named by ``config.name``."""
    config.validate()
    return ENVIRONMENT_TYPES[config.name](config, seed)
