"""Segmentation models: TICC parameters, cluster models and label sequences."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, TYPE_CHECKING

import numpy as np
from scipy import linalg

from .transition import Subsequence

if TYPE_CHECKING:
    from ..core.config import TiccConfig

SYMMETRY_TOL = 1e-8
TOEPLITZ_TOL = 1e-8


@dataclass
class TiccParams:
    """Hyperparameters of a single TICC fit."""

    K: int
    w: int = 3
    beta: float = 50.0
    lambda_: float = 0.11
    max_em_iters: int = 30
    admm_iters: int = 200
    tol: float = 1e-4
    rho: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        """Check numeric ranges.

        Raises:
            ValueError: If any field is out of range
        """
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.w < 1:
            raise ValueError(f"w must be >= 1, got {self.w}")
        if self.beta < 0 or self.lambda_ < 0:
            raise ValueError("beta and lambda must be >= 0")
        if self.max_em_iters < 1 or self.admm_iters < 1:
            raise ValueError("iteration limits must be positive")
        if self.tol <= 0 or self.rho <= 0:
            raise ValueError("tol and rho must be positive")

    @classmethod
    def from_config(cls, config: 'TiccConfig', K: int) -> 'TiccParams':
        return cls(
            K=K,
            w=config.window,
            beta=config.beta,
            lambda_=config.sparsity_lambda,
            max_em_iters=config.max_em_iters,
            admm_iters=config.admm_iters,
            tol=config.tol,
            rho=config.rho,
            seed=config.seed,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K": self.K, "w": self.w, "beta": self.beta, "lambda": self.lambda_,
            "max_em_iters": self.max_em_iters, "admm_iters": self.admm_iters,
            "tol": self.tol, "rho": self.rho, "seed": self.seed,
        }


def toeplitz_violation(matrix: np.ndarray, block: int) -> float:
    """Largest deviation between blocks that share a block-diagonal offset.

    ``matrix`` is ``(block*w) x (block*w)``; for every offset the blocks
    ``(i, i+offset)`` must equal ``(0, offset)``.
    """
    w = matrix.shape[0] // block
    worst = 0.0
    for offset in range(w):
        reference = matrix[0:block, offset * block:(offset + 1) * block]
        for i in range(1, w - offset):
            j = i + offset
            candidate = matrix[i * block:(i + 1) * block, j * block:(j + 1) * block]
            worst = max(worst, float(np.max(np.abs(candidate - reference))))
    return worst


@dataclass
class ClusterModel:
    """A cluster's sparse block-Toeplitz precision matrix and empirical mean."""

    precision: np.ndarray
    mean: np.ndarray
    count: int = 0
    block: int = 1

    def __post_init__(self) -> None:
        self.precision = np.asarray(self.precision, dtype=float)
        self.mean = np.asarray(self.mean, dtype=float).ravel()

    @property
    def dim(self) -> int:
        return int(self.precision.shape[0])

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        return bool(np.max(np.abs(self.precision - self.precision.T)) < tol)

    def is_positive_definite(self) -> bool:
        try:
            linalg.cholesky(self.precision, lower=True)
        except linalg.LinAlgError:
            return False
        return True

    def is_block_toeplitz(self, tol: float = TOEPLITZ_TOL) -> bool:
        return toeplitz_violation(self.precision, self.block) < tol

    def invariant_violations(self) -> List[str]:
        """Names of the violated invariants; empty when the model is well formed."""
        problems = []
        if not self.is_symmetric():
            problems.append("symmetry")
        if not self.is_positive_definite():
            problems.append("positive_definite")
        if not self.is_block_toeplitz():
            problems.append("block_toeplitz")
        return problems

    def to_dict(self) -> Dict[str, Any]:
        return {
            "precision": self.precision.ravel().tolist(),
            "shape": list(self.precision.shape),
            "mean": self.mean.tolist(),
            "count": self.count,
            "block": self.block,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ClusterModel':
        shape = tuple(data["shape"])
        return cls(
            precision=np.asarray(data["precision"], dtype=float).reshape(shape),
            mean=data["mean"],
            count=data.get("count", 0),
            block=data.get("block", 1),
        )


@dataclass
class Segmentation:
    """Window labels of one episode and the frame segments they induce.

    ``labels`` has one entry per window (``n - w + 1``). ``segments`` are the
    maximal constant-label runs expressed in frame coordinates; together they
    cover frames ``0..n-1``.
    """

    episode_id: int
    labels: np.ndarray
    segments: List[Subsequence] = field(default_factory=list)
    segment_labels: List[int] = field(default_factory=list)
    window_runs: List[List[int]] = field(default_factory=list)
    objective_trace: List[float] = field(default_factory=list)
    converged: bool = True
    K: Optional[int] = None

    def __post_init__(self) -> None:
        self.labels = np.asarray(self.labels, dtype=int)

    @property
    def switch_count(self) -> int:
        return int(np.count_nonzero(np.diff(self.labels)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "episode_id": self.episode_id,
            "K": self.K,
            "labels": self.labels.tolist(),
            "segments": [
                {"start": s.start, "end": s.end, "label": label, "windows": run}
                for s, label, run in zip(self.segments, self.segment_labels, self.window_runs)
            ],
            "objective_trace": list(self.objective_trace),
            "converged": self.converged,
        }
