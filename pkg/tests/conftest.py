"""Pytest configuration and fixtures for CIER tests."""

from typing import Dict, List, Tuple

import numpy as np
import pytest

from cier.core.config import CIERConfig, CurriculumSchedule, EnvConfig, ReplayConfig
from cier.models.graph import CausalDataset
from cier.models.transition import ActionTimeSeries, Transition


def make_transitions(actions, episode_id: int = 0, rewards=None, state_dim: int = 2) -> List[Transition]:
    """Transitions with zero states whose actions and rewards are given."""
    actions = np.asarray(actions, dtype=float)
    if actions.ndim == 1:
        actions = actions.reshape(-1, 1)
    rewards = np.zeros(len(actions)) if rewards is None else np.asarray(rewards, dtype=float)
    state = np.zeros(state_dim)
    return [
        Transition(state, a, r, state, i == len(actions) - 1, episode_id, i)
        for i, (a, r) in enumerate(zip(actions, rewards))
    ]


def two_regime_series(seed: int, length: int = 300, rho: float = 0.9,
                      episode_id: int = 0) -> Tuple[ActionTimeSeries, np.ndarray]:
    """First half independent dimensions, second half correlated at ``rho``; returns frame labels."""
    rng = np.random.default_rng(seed)
    half = length // 2
    independent = rng.normal(size=(half, 2))
    correlated = rng.multivariate_normal(np.zeros(2), [[1.0, rho], [rho, 1.0]], size=length - half)
    frames = np.vstack([independent, correlated])
    labels = np.r_[np.zeros(half, dtype=int), np.ones(length - half, dtype=int)]
    return ActionTimeSeries(episode_id, frames), labels


def fork_dataset(seed: int, n: int = 2000) -> CausalDataset:
    """U -> A, U -> B with a noise outcome; column order U, A, B, y."""
    rng = np.random.default_rng(seed)
    u = rng.integers(0, 2, n)
    a = np.where(rng.random(n) < 0.9, u, 1 - u)
    b = np.where(rng.random(n) < 0.9, u, 1 - u)
    y = rng.normal(size=n)
    return CausalDataset(np.column_stack([u, a, b]), y, names=["U", "A", "B", "y"])


def chain_dataset(seed: int, n: int = 2000) -> CausalDataset:
    """A -> B -> y with binary A, B; column order A, B, y."""
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, n)
    b = np.where(rng.random(n) < 0.85, a, 1 - a)
    y = 2.0 * b + rng.normal(scale=0.5, size=n)
    return CausalDataset(np.column_stack([a, b]), y, names=["A", "B", "y"])


def diamond_dataset(seed: int, n: int = 2000) -> CausalDataset:
    """A -> B -> y and A -> C -> y with binary A, B, C; column order A, B, C, y."""
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, n)
    b = np.where(rng.random(n) < 0.85, a, 1 - a)
    c = np.where(rng.random(n) < 0.85, a, 1 - a)
    y = 1.5 * b + 1.5 * c + rng.normal(scale=0.5, size=n)
    return CausalDataset(np.column_stack([a, b, c]), y, names=["A", "B", "C", "y"])


def independent_dataset(seed: int, n: int = 2000, factors: int = 3) -> CausalDataset:
    rng = np.random.default_rng(seed)
    return CausalDataset(rng.integers(0, 2, (n, factors)), rng.normal(size=n))


@pytest.fixture
def default_config() -> CIERConfig:
    """Default configuration with logging disabled."""
    return CIERConfig().update(**{"run.enable_logging": False, "run.log_level": "ERROR"})


@pytest.fixture
def tiny_config() -> CIERConfig:
    """Small, fast end-to-end configuration on the planted-factor environment."""
    return CIERConfig.from_dict({
        "ticc": {"window": 2, "max_em_iters": 5, "admm_iters": 50, "target_segment_length": 10},
        "tscf": {"max_iters": 10},
        "causal": {"restarts": 1, "max_sepset_size": 1},
        "replay": {"capacity": 500, "temp_capacity": 100, "batch": 16, "mode": "cier"},
        "curriculum": {"epsilon_m": 20},
        "env": {"name": "planted_factor", "max_steps": 20, "delay": 3},
        "agent": {"actor_hidden": [8, 8], "critic_hidden": [8, 8]},
        "run": {"episodes": 8, "warmup_steps": 40, "enable_logging": False, "log_level": "ERROR"},
    })


@pytest.fixture
def replay_config() -> ReplayConfig:
    return ReplayConfig(capacity=8, temp_capacity=4, batch=2, mode="uniform")


@pytest.fixture
def schedule() -> CurriculumSchedule:
    return CurriculumSchedule(epsilon_m=100, eta=1.0)


@pytest.fixture
def planted_env_config() -> EnvConfig:
    return EnvConfig(name="planted_factor", max_steps=50, motif_length=5, delay=10, noise_sigma=0.01)


@pytest.fixture
def regime_series() -> Tuple[ActionTimeSeries, np.ndarray]:
    return two_regime_series(seed=0)


@pytest.fixture
def fork_data() -> CausalDataset:
    return fork_dataset(seed=0)


@pytest.fixture
def chain_data() -> CausalDataset:
    return chain_dataset(seed=0)


@pytest.fixture
def episode_rows() -> Dict[str, List]:
    """Two short episodes of 2-d actions and 1-d states."""
    return {
        "actions": [[[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]], [[-0.1, 0.0], [0.2, -0.2]]],
        "rewards": [[1.0, 2.0, 3.0], [0.5, -0.5]],
    }
