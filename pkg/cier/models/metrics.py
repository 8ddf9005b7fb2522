"""Training metrics and run bookkeeping models."""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..utils.serialization import JSONSerializable, stable_hash


@dataclass
class Metrics(JSONSerializable):
    """Training-curve summary.

    ``AS`` is the mean score, ``BS`` the best score, ``SAS`` the first (1-based)
    episode whose score reaches ``AS``, ``ACS`` the mean of the cumulative sums.
    """

    AS: float
    BS: float
    SAS: int
    ACS: float

    def to_dict(self) -> Dict[str, Any]:
        return {"AS": self.AS, "BS": self.BS, "SAS": self.SAS, "ACS": self.ACS}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Metrics':
        return cls(AS=float(data["AS"]), BS=float(data["BS"]), SAS=int(data["SAS"]), ACS=float(data["ACS"]))


@dataclass
class EffectSnapshot:
    """State of the effect table after one causal analysis during training."""

    episode: int
    request_id: int
    k_prime: int
    strengths: Dict[int, float] = field(default_factory=dict)
    relevant: List[int] = field(default_factory=list)
    planted_factor: Optional[int] = None
    planted_relevant: Optional[bool] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "episode": self.episode,
            "request_id": self.request_id,
            "k_prime": self.k_prime,
            "strengths": {str(k): v for k, v in sorted(self.strengths.items())},
            "relevant": list(self.relevant),
            "planted_factor": self.planted_factor,
            "planted_relevant": self.planted_relevant,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EffectSnapshot':
        return cls(
            episode=int(data["episode"]),
            request_id=int(data["request_id"]),
            k_prime=int(data["k_prime"]),
            strengths={int(k): float(v) for k, v in data.get("strengths", {}).items()},
            relevant=[int(k) for k in data.get("relevant", [])],
            planted_factor=data.get("planted_factor"),
            planted_relevant=data.get("planted_relevant"),
            error=data.get("error"),
        )


@dataclass
class TrainingRun:
    """Artifacts of one seeded training run."""

    seed: int
    mode: str
    algorithm: str
    scores: List[float] = field(default_factory=list)
    effect_history: List[EffectSnapshot] = field(default_factory=list)
    ground_truth: Dict[str, Any] = field(default_factory=dict)
    wall_clock: float = 0.0

    @property
    def episodes(self) -> int:
        return len(self.scores)

    def planted_relevance_rate(self) -> Optional[float]:
        """Share of analysis snapshots in which the planted factor was relevant."""
        flags = [s.planted_relevant for s in self.effect_history if s.planted_relevant is not None]
        if not flags:
            return None
        return sum(1 for f in flags if f) / len(flags)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "mode": self.mode,
            "algorithm": self.algorithm,
            "scores": list(self.scores),
            "effect_history": [s.to_dict() for s in self.effect_history],
            "ground_truth": self.ground_truth,
            "wall_clock": self.wall_clock,
        }


@dataclass
class RunManifest(JSONSerializable):
    """What was run, with which inputs, and where the outputs went.

    ``input_hash`` is the SHA-256 of the canonical JSON of the config and seeds, so
    it does not change when the manifest is re-serialized.
    """

    config: Dict[str, Any]
    seeds: List[int]
    outputs: Dict[str, str] = field(default_factory=dict)
    wall_clock: float = 0.0
    created: str = field(default_factory=lambda: time.strftime('%Y-%m-%dT%H:%M:%S'))
    input_hash: str = ""

    def __post_init__(self) -> None:
        if not self.input_hash:
            self.input_hash = self.compute_hash()

    def compute_hash(self) -> str:
        return stable_hash({"config": self.config, "seeds": list(self.seeds)})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config,
            "seeds": list(self.seeds),
            "outputs": dict(self.outputs),
            "wall_clock": self.wall_clock,
            "created": self.created,
            "input_hash": self.input_hash,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunManifest':
        return cls(
            config=data["config"],
            seeds=list(data["seeds"]),
            outputs=data.get("outputs", {}),
            wall_clock=data.get("wall_clock", 0.0),
            created=data.get("created", ""),
            input_hash=data.get("input_hash", ""),
        )
