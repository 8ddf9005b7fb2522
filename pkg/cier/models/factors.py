"""Time series causal factor models."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from .transition import Subsequence

SegmentKey = Tuple[int, int, int]


def segment_key(segment: Subsequence) -> SegmentKey:
    """``(episode_id, start, end)`` identifying a segment across the corpus."""
    return (segment.episode_id, segment.start, segment.end)


@dataclass
class TSCF:
    """One factor: a medoid subsequence and every member segment assigned to it."""

    id: int
    medoid: Subsequence
    members: List[Subsequence] = field(default_factory=list)

    @property
    def mean_length(self) -> float:
        if not self.members:
            return 0.0
        return float(np.mean([m.length for m in self.members]))

    @property
    def member_count(self) -> int:
        return len(self.members)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "medoid": self.medoid.to_dict(),
            "member_count": self.member_count,
            "mean_length": self.mean_length,
            "members": [list(segment_key(m)) for m in self.members],
        }


@dataclass
class TscfDictionary:
    """The K' factors of a corpus and the per-iteration medoid clustering cost."""

    factors: List[TSCF] = field(default_factory=list)
    cost_trace: List[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._index: Dict[SegmentKey, int] = {}
        for factor in self.factors:
            for member in factor.members:
                key = segment_key(member)
                if key in self._index:
                    raise ValueError(f"Segment {key} belongs to factors {self._index[key]} and {factor.id}")
                self._index[key] = factor.id

    @property
    def k_prime(self) -> int:
        return len(self.factors)

    @property
    def total_cost(self) -> float:
        return self.cost_trace[-1] if self.cost_trace else 0.0

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[TSCF]:
        return iter(self.factors)

    def factor_of(self, segment: Subsequence) -> Optional[int]:
        """Factor id containing ``segment``, or None when it was never clustered."""
        return self._index.get(segment_key(segment))

    def assignments(self) -> Dict[SegmentKey, int]:
        return dict(self._index)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k_prime": self.k_prime,
            "total_cost": self.total_cost,
            "cost_trace": list(self.cost_trace),
            "factors": [f.to_dict() for f in self.factors],
        }


@dataclass
class EpisodeEncoding:
    """Binary factor-presence vector ``U`` of an episode with its return as outcome."""

    episode_id: int
    U: np.ndarray
    outcome: float

    def __post_init__(self) -> None:
        self.U = np.asarray(self.U, dtype=int)
        if self.U.size and not np.all((self.U == 0) | (self.U == 1)):
            raise ValueError("U must be binary")
        self.outcome = float(self.outcome)

    def to_dict(self) -> Dict[str, Any]:
        return {"episode_id": self.episode_id, "U": self.U.tolist(), "outcome": self.outcome}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EpisodeEncoding':
        return cls(episode_id=int(data["episode_id"]), U=data["U"], outcome=data["outcome"])


class OccurrenceMap:
    """Mapping ``(episode_id, factor) -> [[start, end], ...]`` in frame (step) coordinates.

    Frames and environment steps coincide, so an interval directly names the
    transitions ``step_index in [start, end]`` of that episode.
    """

    def __init__(self, intervals: Optional[Dict[Tuple[int, int], List[List[int]]]] = None):
        self._intervals: Dict[Tuple[int, int], List[List[int]]] = {}
        for (episode_id, factor), spans in (intervals or {}).items():
            for start, end in spans:
                self.add(episode_id, factor, start, end)

    def add(self, episode_id: int, factor: int, start: int, end: int) -> None:
        if start > end or start < 0:
            raise ValueError(f"Invalid occurrence interval [{start}, {end}]")
        self._intervals.setdefault((int(episode_id), int(factor)), []).append([int(start), int(end)])

    def intervals(self, episode_id: int, factor: int) -> List[List[int]]:
        return list(self._intervals.get((episode_id, factor), []))

    def first_occurrence(self, episode_id: int, factor: int) -> Optional[int]:
        spans = self._intervals.get((episode_id, factor))
        if not spans:
            return None
        return min(start for start, _ in spans)

    def episodes(self) -> List[int]:
        return sorted({e for e, _ in self._intervals})

    def factors(self) -> List[int]:
        return sorted({k for _, k in self._intervals})

    def items(self):
        return self._intervals.items()

    def __contains__(self, key: Tuple[int, int]) -> bool:
        return bool(self._intervals.get(key))

    def __len__(self) -> int:
        return len(self._intervals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OccurrenceMap):
            return NotImplemented
        return self._normalized() == other._normalized()

    def _normalized(self) -> Dict[Tuple[int, int], List[List[int]]]:
        return {k: sorted(v) for k, v in self._intervals.items() if v}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "occurrences": [
                {"episode": e, "factor": k, "intervals": spans}
                for (e, k), spans in sorted(self._intervals.items())
            ]
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'OccurrenceMap':
        occurrences = cls()
        for record in data.get("occurrences", []):
            for start, end in record["intervals"]:
                occurrences.add(record["episode"], record["factor"], start, end)
        return occurrences
