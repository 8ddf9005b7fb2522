"""Monte-Carlo check that a buffer samples slots with its computed probabilities."""

from dataclasses import dataclass
from typing import Any, Dict, Iterable, Mapping, Optional

import numpy as np
from scipy import stats

from ..core.config import CurriculumSchedule, ReplayConfig
from ..core.exceptions import DataError
from ..models.transition import Transition
from .buffer import ReplayBuffer


@dataclass
class ConformanceReport:
    """Observed draw frequencies against the buffer's sampling distribution."""

    draws: int
    expected: np.ndarray
    observed: np.ndarray
    chi2: float
    p_value: float

    @property
    def frequencies(self) -> np.ndarray:
        return self.observed / self.draws

    @property
    def max_abs_error(self) -> float:
        return float(np.max(np.abs(self.frequencies - self.expected)))

    @property
    def max_relative_error(self) -> float:
        support = self.expected > 0
        return float(np.max(np.abs(self.frequencies[support] - self.expected[support]) / self.expected[support]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "draws": self.draws,
            "expected": self.expected.tolist(),
            "frequencies": self.frequencies.tolist(),
            "max_abs_error": self.max_abs_error,
            "max_relative_error": self.max_relative_error,
            "chi2": self.chi2,
            "p_value": self.p_value,
        }


def buffer_from_snapshot(records: Iterable[Mapping[str, Any]], mode: str, epoch: float = 0.0,
                         base: Optional[ReplayConfig] = None, schedule: Optional[CurriculumSchedule] = None,
                         seed: int = 0) -> ReplayBuffer:
    """Rebuild a buffer's priority state from snapshot records (``episode, step, c, td``).

    Transitions carry 1-dimensional placeholder states and actions; only the
    causal weights and TD magnitudes matter for sampling.
    """
    records = list(records)
    if not records:
        raise DataError("Snapshot has no records")
    n = len(records)
    base = base or ReplayConfig()
    config = ReplayConfig.from_dict({**base.to_dict(), "mode": mode, "capacity": n,
                                     "temp_capacity": n, "batch": min(base.batch, n), "seed": seed})
    buffer = ReplayBuffer(config, schedule or CurriculumSchedule(), state_dim=1, action_dim=1, seed=seed)
    try:
        for r in records:
            buffer.add(Transition([0.0], [0.0], 0.0, [0.0], False, int(r["episode"]), int(r["step"])))
        slots = np.arange(n)
        buffer.update_priorities(slots, np.array([float(r.get("td", 1.0)) for r in records]))
        buffer.install_causal_weights(np.array([float(r.get("c", 0.0)) for r in records]))
    except (KeyError, ValueError) as e:
        raise DataError(f"Invalid snapshot record: {e}")
    buffer.set_epoch(epoch)
    return buffer


def sampling_conformance(buffer: ReplayBuffer, draws: int, batch: Optional[int] = None) -> ConformanceReport:
    """Draw ``draws`` indices in batches and compare their frequencies with ``buffer.probabilities()``."""
    batch = batch or min(buffer.config.batch, len(buffer))
    rounds = max(1, draws // batch)
    counts = np.zeros(buffer.capacity)
    for _ in range(rounds):
        counts += np.bincount(buffer.sample(batch).indices, minlength=buffer.capacity)
    total = rounds * batch
    expected = buffer.probabilities()
    support = expected > 0
    chi2, p_value = stats.chisquare(counts[support], expected[support] * total)
    return ConformanceReport(draws=total, expected=expected, observed=counts,
                             chi2=float(chi2), p_value=float(p_value))
