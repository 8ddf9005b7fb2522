"""Result classes for CIER operations."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class ValidationResult:
    """Result of schema validation."""

    is_valid: bool
    errors: List['SchemaError'] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.is_valid


@dataclass
class SchemaError:
    """Represents a schema validation error."""

    path: str
    message: str
    value: Any = None

    def __str__(self) -> str:
        return f"Schema error at '{self.path}': {self.message}"


@dataclass
class CITestResult:
    """Outcome of a conditional independence test.

    ``warnings`` carries attached notes such as low-power strata; an empty list
    means the asymptotic approximation was used without reservations.
    """

    statistic: float
    p_value: float
    dof: int = 0
    method: str = "g2"
    warnings: List[str] = field(default_factory=list)

    @property
    def low_power(self) -> bool:
        return any(w.startswith("LowPowerWarning") for w in self.warnings)

    def independent(self, alpha: float) -> bool:
        """Non-rejection of the independence hypothesis at ``alpha``."""
        return self.p_value > alpha

    def __iter__(self):
        # Allows ``statistic, p_value = ci_test(...)``.
        yield self.statistic
        yield self.p_value


@dataclass
class AnalysisRequest:
    """Episodes accumulated in the temporary pool since the previous analysis."""

    request_id: int
    episode_ids: List[int]
    episodes: List[List[Any]] = field(default_factory=list)
    transition_count: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "request_id": self.request_id,
            "episode_ids": list(self.episode_ids),
            "transition_count": self.transition_count,
        }


@dataclass
class SampledBatch:
    """Indices drawn from a replay buffer with their importance weights."""

    indices: Any
    weights: Any
    probabilities: Optional[Any] = None
