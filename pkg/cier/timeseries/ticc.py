"""Toeplitz inverse covariance-based clustering (TICC) of one action time series.

EM over window labels: the E-step is an exact Viterbi-style dynamic program with a
switching penalty, the M-step fits one sparse block-Toeplitz Gaussian per cluster
(:mod:`cier.timeseries.toeplitz`). The combined objective

    J = sum_t NLL(x_t | Theta_label(t)) + beta * switches + c * sum_i ||Theta_i||_1,
    c = lambda * N / (2 K)

never increases: the DP is optimal for fixed models, and each cluster's new
precision is only accepted when it lowers that cluster's share of J.
"""

import math
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..core.exceptions import DimensionMismatch, NotEnoughData, NotPositiveDefinite
from ..models.segmentation import ClusterModel, Segmentation, TiccParams
from ..models.transition import ActionTimeSeries, Subsequence
from ..utils.logging import LoggerMixin
from .series import window_stack
from .toeplitz import ToeplitzGraphicalLasso

if TYPE_CHECKING:
    from ..core.config import TiccConfig

LOG_2PI = math.log(2.0 * math.pi)


def adaptive_k(n: int, config: 'TiccConfig') -> int:
    """Cluster count for a series of length ``n``.

    ``round(n / target_segment_length)`` (half up) clamped to ``[k_min, k_max]`` and
    capped at ``max(1, n - window)``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k = int(math.floor(n / config.target_segment_length + 0.5))
    k = min(max(k, config.k_min), config.k_max)
    return min(k, max(1, n - config.window))


def _cholesky(model: ClusterModel) -> np.ndarray:
    try:
        return linalg.cholesky(model.precision, lower=True)
    except linalg.LinAlgError as e:
        raise NotPositiveDefinite(f"Cluster precision is not positive definite: {e}")


def log_likelihood(window: np.ndarray, model: ClusterModel) -> float:
    """Gaussian log-density of one stacked window under a cluster model.

    ``1/2 logdet(Theta) - 1/2 (x-m)^T Theta (x-m) - (dw/2) log(2 pi)``

    Raises:
        DimensionMismatch: If the window size differs from the model's
        NotPositiveDefinite: If the precision matrix cannot be factorized
    """
    x = np.asarray(window, dtype=float).ravel()
    if x.shape[0] != model.dim:
        raise DimensionMismatch(model.dim, x.shape[0], where="window vs cluster model")
    return float(-window_nll(x.reshape(1, -1), model)[0])


def window_nll(windows: np.ndarray, model: ClusterModel) -> np.ndarray:
    """Negative log-likelihood of every row of ``windows``."""
    chol = _cholesky(model)
    logdet = 2.0 * float(np.sum(np.log(np.diag(chol))))
    projected = (windows - model.mean) @ chol
    quad = np.einsum("ij,ij->i", projected, projected)
    return 0.5 * quad - 0.5 * logdet + 0.5 * model.dim * LOG_2PI


def viterbi_labels(costs: np.ndarray, beta: float) -> Tuple[np.ndarray, float]:
    """Label sequence minimizing ``sum_t costs[t, label_t] + beta * switches``.

    Ties prefer keeping the previous label, then the lowest cluster id.

    Returns:
        (labels, optimal objective value)
    """
    costs = np.asarray(costs, dtype=float)
    n, k = costs.shape
    value = costs[0].copy()
    back = np.zeros((n, k), dtype=int)
    for t in range(1, n):
        best = int(np.argmin(value))
        switch = value[best] + beta
        stay = value <= switch
        back[t] = np.where(stay, np.arange(k), best)
        value = np.where(stay, value, switch) + costs[t]

    labels = np.empty(n, dtype=int)
    labels[-1] = int(np.argmin(value))
    for t in range(n - 1, 0, -1):
        labels[t - 1] = back[t, labels[t]]
    return labels, float(value[labels[-1]])


def label_objective(costs: np.ndarray, labels: np.ndarray, beta: float) -> float:
    """``sum_t costs[t, labels_t] + beta * switches`` for a given sequence."""
    labels = np.asarray(labels, dtype=int)
    fit = float(np.sum(costs[np.arange(len(labels)), labels]))
    return fit + beta * int(np.count_nonzero(np.diff(labels)))


def label_runs(labels: Sequence[int]) -> List[Tuple[int, int, int]]:
    """Maximal constant-label runs as ``(start, end, label)`` in window indices."""
    labels = np.asarray(labels, dtype=int)
    runs = []
    start = 0
    for t in range(1, len(labels) + 1):
        if t == len(labels) or labels[t] != labels[start]:
            runs.append((start, t - 1, int(labels[start])))
            start = t
    return runs


def segments_from_labels(series: ActionTimeSeries, labels: Sequence[int],
                         w: int) -> Tuple[List[Subsequence], List[int], List[List[int]]]:
    """Turn window runs into frame segments that partition ``0..n-1``.

    A run starting at window ``s`` owns frames from ``s`` up to the frame before the
    next run's first window; the last run extends to the final frame.

    Returns:
        (segments, segment labels, window runs)
    """
    runs = label_runs(labels)
    segments, seg_labels, window_runs = [], [], []
    for idx, (start, end, label) in enumerate(runs):
        frame_end = runs[idx + 1][0] - 1 if idx + 1 < len(runs) else series.length - 1
        segments.append(series.subsequence(start, frame_end))
        seg_labels.append(label)
        window_runs.append([start, end])
    return segments, seg_labels, window_runs


class TiccSegmenter(LoggerMixin):
    """EM segmentation of one series into ``params.K`` block-Toeplitz clusters."""

    def __init__(self, params: TiccParams):
        self.params = params

    def _penalty_weight(self, n_windows: int) -> float:
        return self.params.lambda_ * n_windows / (2.0 * self.params.K)

    def _nll_matrix(self, windows: np.ndarray, models: List[ClusterModel]) -> np.ndarray:
        return np.column_stack([window_nll(windows, m) for m in models])

    def _cluster_objective(self, members: np.ndarray, model: ClusterModel, c: float) -> float:
        fit = float(np.sum(window_nll(members, model))) if len(members) else 0.0
        return fit + c * float(np.sum(np.abs(model.precision)))

    def objective(self, windows: np.ndarray, labels: np.ndarray, models: List[ClusterModel]) -> float:
        """The combined EM objective ``J``."""
        c = self._penalty_weight(len(windows))
        costs = self._nll_matrix(windows, models)
        penalty = c * sum(float(np.sum(np.abs(m.precision))) for m in models)
        return label_objective(costs, labels, self.params.beta) + penalty

    def _m_step(self, windows: np.ndarray, labels: np.ndarray, d: int,
                previous: Optional[List[ClusterModel]]) -> Tuple[List[ClusterModel], bool]:
        n_windows, dim = windows.shape
        c = self._penalty_weight(n_windows)
        models: List[ClusterModel] = []
        all_converged = True

        for cluster in range(self.params.K):
            members = windows[labels == cluster]
            old = previous[cluster] if previous is not None else None
            if len(members) == 0:
                if old is None:
                    models.append(ClusterModel(np.eye(dim), np.zeros(dim), 0, block=d))
                else:
                    models.append(ClusterModel(old.precision, old.mean, 0, block=d))
                continue

            mean = members.mean(axis=0)
            centered = members - mean
            S = centered.T @ centered / len(members)
            lam = 2.0 * c / len(members)
            solver = ToeplitzGraphicalLasso(
                block=d, window=self.params.w, lam=lam, rho=self.params.rho,
                max_iters=self.params.admm_iters, tol=self.params.tol)
            fit = solver.fit(S)
            all_converged = all_converged and fit.converged
            candidate = ClusterModel(fit.precision, mean, len(members), block=d)

            if old is not None:
                kept = ClusterModel(old.precision, mean, len(members), block=d)
                if self._cluster_objective(members, kept, c) < self._cluster_objective(members, candidate, c):
                    candidate = kept
            models.append(candidate)
        return models, all_converged

    def _repair_empty(self, labels: np.ndarray, costs: np.ndarray) -> Optional[np.ndarray]:
        """Move the worst-fit windows into each empty cluster; None when nothing is empty."""
        K = self.params.K
        counts = np.bincount(labels, minlength=K)
        empty = [k for k in range(K) if counts[k] == 0]
        if not empty:
            return None
        n = len(labels)
        take = int(math.ceil(n / K))
        repaired = labels.copy()
        assigned_nll = costs[np.arange(n), labels]
        order = np.argsort(-assigned_nll, kind="stable")
        used = np.zeros(n, dtype=bool)
        for cluster in empty:
            chosen = [i for i in order if not used[i]][:take]
            repaired[chosen] = cluster
            used[chosen] = True
        return repaired

    def fit(self, series: ActionTimeSeries) -> Tuple[List[ClusterModel], Segmentation]:
        """Segment ``series``.

        Raises:
            NotEnoughData: If fewer than ``2K`` windows exist
        """
        p = self.params
        windows = window_stack(series, p.w)
        n_windows = len(windows)
        if n_windows < 2 * p.K:
            raise NotEnoughData(n_windows, p.K)
        d = series.dim

        labels = (np.arange(n_windows) * p.K) // n_windows
        models, converged = self._m_step(windows, labels, d, None)
        trace = [self.objective(windows, labels, models)]

        for iteration in range(p.max_em_iters):
            costs = self._nll_matrix(windows, models)
            new_labels, _ = viterbi_labels(costs, p.beta)
            if np.array_equal(new_labels, labels):
                break

            new_models, conv = self._m_step(windows, new_labels, d, models)
            best = self.objective(windows, new_labels, new_models)

            repaired = self._repair_empty(new_labels, costs)
            if repaired is not None:
                repaired_models, repaired_conv = self._m_step(windows, repaired, d, new_models)
                repaired_objective = self.objective(windows, repaired, repaired_models)
                if repaired_objective <= best:
                    self.logger.debug("Re-seeded empty cluster(s) at EM iteration %d", iteration)
                    new_labels, new_models, conv, best = repaired, repaired_models, repaired_conv, repaired_objective
                else:
                    empty = np.flatnonzero(np.bincount(new_labels, minlength=p.K) == 0).tolist()
                    self.logger.warning("Cluster(s) %s left empty at EM iteration %d: re-seeding raises the "
                                        "objective from %.6f to %.6f", empty, iteration, best, repaired_objective)

            labels, models = new_labels, new_models
            converged = converged and conv
            trace.append(best)
            self.logger.debug("EM iteration %d: objective %.6f", iteration, best)

        segments, seg_labels, runs = segments_from_labels(series, labels, p.w)
        segmentation = Segmentation(
            episode_id=series.episode_id,
            labels=labels,
            segments=segments,
            segment_labels=seg_labels,
            window_runs=runs,
            objective_trace=trace,
            converged=converged,
            K=p.K,
        )
        return models, segmentation


def fit_ticc(series: ActionTimeSeries, params: TiccParams) -> Tuple[List[ClusterModel], Segmentation]:
    """Fit TICC to one series; see :class:`TiccSegmenter`."""
    return TiccSegmenter(params).fit(series)


def debug_dump(models: List[ClusterModel], segmentation: Segmentation) -> dict:
    """Labels, row-major precision matrices and the objective trace of one fit."""
    payload = segmentation.to_dict()
    payload["clusters"] = [m.to_dict() for m in models]
    return payload
