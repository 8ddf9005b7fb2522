"""Training-curve metrics and paired multi-seed comparisons."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np
from scipy import stats

from ..core.exceptions import EmptyScores, SeedMismatch
from ..models.metrics import Metrics
from ..utils.logging import get_logger

logger = get_logger(__name__)

METRIC_NAMES = ("AS", "BS", "SAS", "ACS")
MIN_SEEDS = 10


def compute_metrics(scores: Sequence[float]) -> Metrics:
    """AS (mean), BS (max), SAS (first 1-based episode reaching AS) and ACS (mean cumulative sum).

    Raises:
        EmptyScores: If ``scores`` is empty
    """
    values = np.asarray(scores, dtype=float)
    if values.size == 0:
        raise EmptyScores("Cannot compute metrics of an empty score sequence")
    average = float(values.mean())
    reached = (values >= average) | np.isclose(values, average)
    return Metrics(
        AS=average,
        BS=float(values.max()),
        SAS=int(np.flatnonzero(reached)[0]) + 1,
        ACS=float(np.cumsum(values).mean()),
    )


def episodes_to_threshold(scores: Sequence[float], threshold: float) -> int:
    """First 1-based episode whose score reaches ``threshold``; ``len(scores) + 1`` if none does."""
    values = np.asarray(scores, dtype=float)
    hits = np.flatnonzero(values >= threshold)
    return int(hits[0]) + 1 if hits.size else len(values) + 1


@dataclass
class PairedTest:
    """One-sided Wilcoxon signed-rank result on paired differences (treatment better)."""

    statistic: float
    p_value: float
    n_pairs: int
    nonzero: int

    def to_dict(self) -> Dict[str, Any]:
        return {"statistic": self.statistic, "p_value": self.p_value,
                "n_pairs": self.n_pairs, "nonzero": self.nonzero}


def signed_rank_test(differences: Sequence[float]) -> PairedTest:
    """Wilcoxon test of ``differences > 0``.

    ``statistic`` is the rank sum of the positive differences (zeros dropped,
    ties given average ranks). All-zero differences give ``p = 1``.
    """
    d = np.asarray(differences, dtype=float)
    nonzero = d[d != 0]
    if nonzero.size == 0:
        return PairedTest(statistic=0.0, p_value=1.0, n_pairs=int(d.size), nonzero=0)
    ranks = stats.rankdata(np.abs(nonzero))
    r_plus = float(ranks[nonzero > 0].sum())
    result = stats.wilcoxon(nonzero, alternative="greater")
    return PairedTest(statistic=r_plus, p_value=float(result.pvalue), n_pairs=int(d.size),
                      nonzero=int(nonzero.size))


@dataclass
class ComparisonReport:
    """Baseline-versus-treatment summary over paired seeds."""

    baseline_medians: Dict[str, float]
    treatment_medians: Dict[str, float]
    threshold: float
    baseline_episodes_to_threshold: List[int]
    treatment_episodes_to_threshold: List[int]
    score_test: PairedTest
    threshold_test: PairedTest
    seeds: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def p_value(self) -> float:
        return self.score_test.p_value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seeds": self.seeds,
            "baseline_medians": dict(self.baseline_medians),
            "treatment_medians": dict(self.treatment_medians),
            "threshold": self.threshold,
            "baseline_episodes_to_threshold": list(self.baseline_episodes_to_threshold),
            "treatment_episodes_to_threshold": list(self.treatment_episodes_to_threshold),
            "score_test": self.score_test.to_dict(),
            "threshold_test": self.threshold_test.to_dict(),
            "notes": list(self.notes),
        }


def _medians(metrics: List[Metrics]) -> Dict[str, float]:
    return {name: float(np.median([getattr(m, name) for m in metrics])) for name in METRIC_NAMES}


def compare_runs(baseline: Sequence[Sequence[float]], treatment: Sequence[Sequence[float]]) -> ComparisonReport:
    """Compare two sets of per-seed score curves paired by position.

    The score test pairs each seed's AS; the threshold test pairs the episodes each
    run needs to reach the baseline's median AS (fewer is better for treatment).

    Raises:
        SeedMismatch: If the seed counts or paired curve lengths differ
        EmptyScores: If any curve is empty
    """
    if len(baseline) != len(treatment):
        raise SeedMismatch(f"{len(baseline)} baseline runs but {len(treatment)} treatment runs")
    for i, (b, t) in enumerate(zip(baseline, treatment)):
        if len(b) != len(t):
            raise SeedMismatch(f"Seed {i}: baseline has {len(b)} episodes, treatment {len(t)}")
    if not baseline:
        raise EmptyScores("No runs to compare")

    notes = []
    if len(baseline) < MIN_SEEDS:
        notes.append(f"only {len(baseline)} paired seeds (recommended >= {MIN_SEEDS})")
        logger.warning("Comparing only %d paired seeds", len(baseline))

    base_metrics = [compute_metrics(s) for s in baseline]
    treat_metrics = [compute_metrics(s) for s in treatment]
    base_medians = _medians(base_metrics)
    threshold = base_medians["AS"]
    base_ett = [episodes_to_threshold(s, threshold) for s in baseline]
    treat_ett = [episodes_to_threshold(s, threshold) for s in treatment]

    return ComparisonReport(
        baseline_medians=base_medians,
        treatment_medians=_medians(treat_metrics),
        threshold=threshold,
        baseline_episodes_to_threshold=base_ett,
        treatment_episodes_to_threshold=treat_ett,
        score_test=signed_rank_test([t.AS - b.AS for b, t in zip(base_metrics, treat_metrics)]),
        threshold_test=signed_rank_test([b - t for b, t in zip(base_ett, treat_ett)]),
        seeds=len(baseline),
        notes=notes,
    )
