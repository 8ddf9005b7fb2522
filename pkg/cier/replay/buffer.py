"""Causal replay buffer: ring storage, curriculum-mixed priorities and the temporary pool.

Priorities per mode (``N`` stored transitions, ``mu`` the curriculum coefficient):

* ``uniform``: 1
* ``per``: ``(|delta| + eps) ** alpha``
* ``cier``: ``(1 - lambda_u) * mu * c_hat + lambda_u / N`` with ``c_hat = c / sum(c)``
* ``ciper``: ``(1 - lambda_u) * (td_coeff * d_hat + causal_coeff * mu * c_hat) + lambda_u / N``
  with ``d_hat`` the normalized PER priority

The causal and mixed modes keep the raw causal weights and PER terms in two sum
trees whose roots are the normalizing sums. A draw first picks a component
(uniform share, causal share, TD share) by its mass and then a slot inside it, so
adds and TD updates touch single leaves and a new epoch only changes the shares.
"""

from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..core.config import CurriculumSchedule, ReplayConfig
from ..core.exceptions import DimensionMismatch, NotEnoughExperience
from ..core.results import AnalysisRequest, SampledBatch
from ..models.factors import OccurrenceMap
from ..models.graph import CausalEffectTable
from ..models.transition import Transition
from ..utils.logging import LoggerMixin
from ..utils.serialization import write_json_lines
from .curriculum import mu
from .sum_tree import SumTree


class TemporaryPool:
    """Holds the episodes collected since the last causal analysis.

    The fill counter counts transitions and saturates at ``capacity``. The trainer polls
    it only at episode boundaries, so a request always carries complete episodes.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.counter = 0
        self._episodes: Dict[int, List[Transition]] = {}
        self._requests = 0

    @property
    def is_full(self) -> bool:
        return self.counter >= self.capacity

    @property
    def episode_ids(self) -> List[int]:
        return list(self._episodes)

    def push(self, transition: Transition) -> None:
        self._episodes.setdefault(transition.episode_id, []).append(transition)
        self.counter = min(self.counter + 1, self.capacity)

    def on_temp_full(self) -> Optional[AnalysisRequest]:
        """Emit the accumulated episodes and reset, or None while the pool is not full."""
        if not self.is_full:
            return None
        episodes = list(self._episodes.values())
        request = AnalysisRequest(
            request_id=self._requests,
            episode_ids=list(self._episodes),
            episodes=episodes,
            transition_count=sum(len(e) for e in episodes),
        )
        self._requests += 1
        self._episodes = {}
        self.counter = 0
        return request


class ReplayBuffer(LoggerMixin):
    """Fixed-capacity FIFO transition store with a priority sum tree.

    Args:
        config: Replay settings (capacity, mode, priority coefficients)
        schedule: Curriculum schedule for the causal term
        state_dim: State vector length
        action_dim: Action vector length
    """

    def __init__(self, config: ReplayConfig, schedule: CurriculumSchedule,
                 state_dim: int, action_dim: int, seed: Optional[int] = None):
        config.validate()
        self.config = config
        self.schedule = schedule
        self.mode = config.mode
        self.capacity = config.capacity
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.rng = np.random.default_rng(config.seed if seed is None else seed)

        cap = self.capacity
        self.states = np.zeros((cap, state_dim))
        self.actions = np.zeros((cap, action_dim))
        self.rewards = np.zeros(cap)
        self.next_states = np.zeros((cap, state_dim))
        self.dones = np.zeros(cap, dtype=bool)
        self.episode_ids = np.full(cap, -1, dtype=np.int64)
        self.step_indices = np.full(cap, -1, dtype=np.int64)
        self.causal = np.zeros(cap)
        self.td = np.zeros(cap)

        self.tree = SumTree(cap)
        self.causal_tree = SumTree(cap) if self.uses_global_priorities else None
        self.temp = TemporaryPool(config.temp_capacity)
        self._locations: Dict[Tuple[int, int], int] = {}
        self._pointer = 0
        self._size = 0
        self._max_td = 1.0
        self.epsilon_c = 0.0
        self.beta = config.per_beta

    def __len__(self) -> int:
        return self._size

    @property
    def uses_global_priorities(self) -> bool:
        return self.mode in ("cier", "ciper")

    @property
    def uses_importance_weights(self) -> bool:
        return self.mode in ("per", "ciper")

    @property
    def uses_td_priorities(self) -> bool:
        return self.mode in ("per", "ciper")

    def slot_of(self, episode_id: int, step_index: int) -> Optional[int]:
        return self._locations.get((episode_id, step_index))

    # -- priorities ---------------------------------------------------------

    def _per_priority(self, td: np.ndarray) -> np.ndarray:
        return (np.abs(td) + self.config.per_epsilon) ** self.config.per_alpha

    def curriculum(self) -> float:
        return mu(min(self.epsilon_c, self.schedule.epsilon_m), self.schedule)

    def compute_priorities(self) -> np.ndarray:
        """Priorities of every slot (0 for empty slots), recomputed from the stored arrays."""
        priorities = np.zeros(self.capacity)
        n = self._size
        if n == 0:
            return priorities
        idx = np.flatnonzero(self.episode_ids >= 0)

        if self.mode == "uniform":
            priorities[idx] = 1.0
            return priorities
        if self.mode == "per":
            priorities[idx] = self._per_priority(self.td[idx])
            return priorities

        lam = self.config.lambda_u
        causal = self.causal[idx]
        total_causal = float(causal.sum())
        c_hat = causal / total_causal if total_causal > 0 else np.zeros(n)
        causal_term = self.curriculum() * c_hat
        if self.mode == "cier":
            mixed = causal_term
        else:
            per = self._per_priority(self.td[idx])
            d_hat = per / per.sum()
            mixed = self.config.td_coeff * d_hat + self.config.causal_coeff * causal_term
        priorities[idx] = (1.0 - lam) * mixed + lam / n
        return priorities

    def shares(self) -> Tuple[float, float, float]:
        """Sampling mass of the uniform, causal and TD components in the causal modes."""
        lam = self.config.lambda_u
        causal = 0.0
        if self.causal_tree.total > 0:
            coeff = 1.0 if self.mode == "cier" else self.config.causal_coeff
            causal = (1.0 - lam) * coeff * self.curriculum()
        td = 0.0
        if self.mode == "ciper" and self.tree.total > 0:
            td = (1.0 - lam) * self.config.td_coeff
        return lam, causal, td

    def _priorities_of(self, slots: np.ndarray) -> np.ndarray:
        slots = np.asarray(slots, dtype=np.int64)
        if not self.uses_global_priorities:
            return self.tree.leaves[slots].copy()
        values = np.zeros(slots.shape[0])
        stored = slots < self._size
        if not stored.any():
            return values
        lam, causal, td = self.shares()
        values[stored] = lam / self._size
        if causal > 0:
            values[stored] += causal * self.causal_tree.leaves[slots[stored]] / self.causal_tree.total
        if td > 0:
            values[stored] += td * self.tree.leaves[slots[stored]] / self.tree.total
        return values

    def priority(self, slot: int) -> float:
        """Current priority of a stored slot."""
        return float(self._priorities_of(np.array([slot]))[0])

    def probabilities(self) -> np.ndarray:
        """Sampling distribution over slots (sums to 1)."""
        priorities = self._priorities_of(np.arange(self.capacity))
        return priorities / priorities.sum()

    def set_epoch(self, epsilon_c: float) -> None:
        """Advance the curriculum clock (episodes) and anneal the IS exponent."""
        self.epsilon_c = float(epsilon_c)
        progress = min(1.0, max(0.0, self.epsilon_c / self.schedule.epsilon_m))
        self.beta = self.config.per_beta + (self.config.per_beta_final - self.config.per_beta) * progress

    # -- storage ------------------------------------------------------------

    def add(self, transition: Transition) -> int:
        """Store a transition (evicting the oldest when full) and feed the temporary pool.

        Returns:
            The slot the transition occupies
        """
        if transition.action.shape[0] != self.action_dim:
            raise DimensionMismatch(self.action_dim, transition.action.shape[0], where="action")
        if transition.state.shape[0] != self.state_dim:
            raise DimensionMismatch(self.state_dim, transition.state.shape[0], where="state")

        slot = self._pointer
        if self._size == self.capacity:
            evicted = (int(self.episode_ids[slot]), int(self.step_indices[slot]))
            self._locations.pop(evicted, None)
        else:
            self._size += 1

        self.states[slot] = transition.state
        self.actions[slot] = transition.action
        self.rewards[slot] = transition.reward
        self.next_states[slot] = transition.next_state
        self.dones[slot] = transition.done
        self.episode_ids[slot] = transition.episode_id
        self.step_indices[slot] = transition.step_index
        self.causal[slot] = 0.0
        self.td[slot] = self._max_td
        self._locations[transition.key] = slot
        self._pointer = (self._pointer + 1) % self.capacity

        if self.uses_td_priorities:
            self.tree.update(slot, float(self._per_priority(np.array([self._max_td]))[0]))
        elif self.mode == "uniform":
            self.tree.update(slot, 1.0)

        if self.uses_global_priorities:
            self.causal_tree.update(slot, 0.0)
            self.temp.push(transition)
        return slot

    def extend(self, transitions: Iterable[Transition]) -> None:
        for transition in transitions:
            self.add(transition)

    def on_temp_full(self) -> Optional[AnalysisRequest]:
        return self.temp.on_temp_full()

    # -- sampling -----------------------------------------------------------

    @staticmethod
    def _find(tree: SumTree, values: np.ndarray) -> np.ndarray:
        return tree.find(np.minimum(values, np.nextafter(tree.total, 0.0)))

    def _sample_mixed(self, batch: int) -> np.ndarray:
        lam, causal, td = self.shares()
        total = lam + causal + td
        values = (np.arange(batch) + self.rng.random(batch)) * (total / batch)
        values = np.minimum(values, np.nextafter(total, 0.0))

        indices = np.empty(batch, dtype=np.int64)
        in_uniform = values < lam
        in_causal = ~in_uniform & (values < lam + causal)
        in_td = ~in_uniform & ~in_causal
        # Stored slots are always 0..N-1: the ring fills from slot 0 and never frees one.
        indices[in_uniform] = np.minimum((values[in_uniform] / lam * self._size).astype(np.int64), self._size - 1)
        if in_causal.any():
            scaled = (values[in_causal] - lam) / causal * self.causal_tree.total
            indices[in_causal] = self._find(self.causal_tree, scaled)
        if in_td.any():
            scaled = (values[in_td] - lam - causal) / td * self.tree.total
            indices[in_td] = self._find(self.tree, scaled)
        return indices

    def sample(self, batch: Optional[int] = None) -> SampledBatch:
        """Stratified proportional draw of ``batch`` slots with importance weights.

        Raises:
            NotEnoughExperience: If fewer than ``batch`` transitions are stored
        """
        batch = batch or self.config.batch
        if self._size < batch:
            raise NotEnoughExperience(self._size, batch)
        if self.uses_global_priorities:
            indices = self._sample_mixed(batch)
            probabilities = self._priorities_of(indices) / sum(self.shares())
        else:
            indices = self.tree.sample(batch, self.rng)
            probabilities = self.tree.leaves[indices] / self.tree.total
        if self.uses_importance_weights:
            weights = (self._size * probabilities) ** (-self.beta)
            weights = weights / weights.max()
        else:
            weights = np.ones(batch)
        return SampledBatch(indices=indices, weights=weights, probabilities=probabilities)

    def get_batch(self, indices: np.ndarray) -> Dict[str, np.ndarray]:
        return {
            "states": self.states[indices],
            "actions": self.actions[indices],
            "rewards": self.rewards[indices],
            "next_states": self.next_states[indices],
            "dones": self.dones[indices].astype(float),
        }

    def update_priorities(self, indices: np.ndarray, td_errors: np.ndarray) -> None:
        """Record new TD magnitudes for sampled slots."""
        magnitudes = np.abs(np.asarray(td_errors, dtype=float))
        indices = np.asarray(indices, dtype=int)
        self.td[indices] = magnitudes
        if magnitudes.size:
            self._max_td = max(self._max_td, float(magnitudes.max()))
        if self.uses_td_priorities:
            for slot, value in zip(indices, self._per_priority(magnitudes)):
                self.tree.update(int(slot), float(value))

    def install_causal_weights(self, weights: np.ndarray) -> None:
        """Swap in a complete causal weight array and rebuild the causal tree."""
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (self.capacity,):
            raise ValueError(f"Expected {self.capacity} weights, got shape {weights.shape}")
        if np.any(weights < 0) or np.any(weights > 1):
            raise ValueError("Causal weights must lie in [0, 1]")
        self.causal = weights.copy()
        if self.uses_global_priorities:
            self.causal_tree.rebuild(np.where(self.episode_ids >= 0, weights, 0.0))

    def snapshot(self, file_path: str) -> int:
        """Write one JSON line per stored transition; returns the line count."""
        slots = np.flatnonzero(self.episode_ids >= 0)
        priorities = self._priorities_of(slots)
        records = (
            {
                "episode": int(self.episode_ids[s]),
                "step": int(self.step_indices[s]),
                "c": float(self.causal[s]),
                "td": float(self.td[s]),
                "priority": float(p),
            }
            for s, p in zip(slots, priorities)
        )
        return write_json_lines(records, file_path)


def assign_causal_weights(buffer: ReplayBuffer, effect_table: CausalEffectTable,
                          occurrences: OccurrenceMap,
                          episode_ids: Optional[Iterable[int]] = None) -> np.ndarray:
    """Give every transition inside an occurrence of a relevant factor its normalized strength.

    ``c = strength_k / max_strength``; a transition covered by several factors keeps
    the largest weight. Every other transition, including those of episodes outside
    ``episode_ids``, is reset to 0, so only the latest analysis drives the causal term.
    An empty (or all-irrelevant) table sets every weight to 0.

    Returns:
        The installed weight array
    """
    weights = np.zeros(buffer.capacity)
    max_strength = effect_table.max_strength
    if max_strength <= 0:
        buffer.install_causal_weights(weights)
        buffer.logger.info("Effect table has no relevant factor; causal weights cleared")
        return weights

    analyzed = set(episode_ids) if episode_ids is not None else set(occurrences.episodes())
    relevant = {k: effect_table.strength(k) / max_strength for k in effect_table.relevant_factors()}
    covered = 0
    for (episode_id, factor), spans in occurrences.items():
        weight = relevant.get(factor)
        if not weight or episode_id not in analyzed:
            continue
        for start, end in spans:
            for step in range(start, end + 1):
                slot = buffer.slot_of(episode_id, step)
                if slot is not None and weight > weights[slot]:
                    if weights[slot] == 0.0:
                        covered += 1
                    weights[slot] = weight
    buffer.install_causal_weights(weights)
    buffer.logger.debug("Assigned causal weights to %d transitions from %d relevant factors",
                        covered, len(relevant))
    return weights


def on_temp_full(buffer: ReplayBuffer) -> Optional[AnalysisRequest]:
    """Analysis request for the episodes collected since the last analysis, if the pool is full."""
    return buffer.on_temp_full()

