"""Core interfaces and abstract base classes for CIER components."""

from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Tuple, TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from ..rl.envs import EnvSpec


class Environment(ABC):
    """Abstract base class for episodic continuous-control environments."""

    @property
    @abstractmethod
    def spec(self) -> 'EnvSpec':
        """State/action dimensions, action bounds, step limit and discount."""
        pass

    @abstractmethod
    def reset(self, seed: Optional[int] = None) -> np.ndarray:
        """Start a new episode.

        Args:
            seed: Reseeds the environment's generator when given

        Returns:
            The initial state
        """
        pass

    @abstractmethod
    def step(self, action: np.ndarray) -> Tuple[np.ndarray, float, bool]:
        """Advance one step.

        Args:
            action: Action vector; out-of-bounds components are clamped

        Returns:
            ``(next_state, reward, done)``

        Raises:
            EpisodeFinished: If the episode has already ended
        """
        pass

    def planted_intervals(self) -> List[Tuple[int, int]]:
        """Step intervals of planted patterns completed in the current episode."""
        return []


class Agent(ABC):
    """Abstract base class for off-policy actor-critic agents."""

    @abstractmethod
    def act(self, state: np.ndarray, noise_sigma: float = 0.0) -> np.ndarray:
        """Deterministic policy action plus optional Gaussian exploration noise, clipped to bounds."""
        pass

    @abstractmethod
    def update(self, batch: Dict[str, np.ndarray], weights: np.ndarray) -> np.ndarray:
        """One gradient step on a sampled batch.

        Args:
            batch: ``states``, ``actions``, ``rewards``, ``next_states`` and ``dones`` arrays
            weights: Importance-sampling weights scaling each sample's critic loss

        Returns:
            Per-sample TD errors used to refresh replay priorities
        """
        pass
