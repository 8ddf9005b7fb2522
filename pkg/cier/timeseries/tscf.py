"""Time series causal factors: DTW medoid clustering of segments and episode encoding."""

import math
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from ..core.exceptions import DimensionMismatch, InternalInconsistency, ReduceKPrime
from ..models.factors import TSCF, EpisodeEncoding, OccurrenceMap, TscfDictionary
from ..models.transition import Subsequence
from ..utils.logging import LoggerMixin, get_logger

logger = get_logger(__name__)

ArrayLike = Union[Subsequence, np.ndarray, Sequence]


def _frames(x: ArrayLike) -> np.ndarray:
    values = x.values if isinstance(x, Subsequence) else np.asarray(x, dtype=float)
    if values.ndim == 1:
        values = values.reshape(-1, 1)
    return values


def dtw(a: ArrayLike, b: ArrayLike, radius: Optional[int] = None) -> float:
    """Dynamic time warping distance with Euclidean frame cost.

    Args:
        a: First sequence (Subsequence or ``(n, d)`` array)
        b: Second sequence
        radius: Optional Sakoe-Chiba band radius; widened to ``|n - m|`` when
            narrower so that an alignment always exists

    Raises:
        DimensionMismatch: If the frame dimensions differ
    """
    A, B = _frames(a), _frames(b)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(A.shape[1], B.shape[1], where="dtw")
    n, m = len(A), len(B)
    if n == 0 or m == 0:
        raise ValueError("dtw needs non-empty sequences")
    cost = cdist(A, B, metric="euclidean")
    band = m if radius is None else max(int(radius), abs(n - m))

    # Row recursion D[i, j] = min(e_j, c[i, j] + D[i, j-1]) with
    # e_j = c[i, j] + min(D[i-1, j-1], D[i-1, j]) is a min-plus prefix scan.
    prev = np.full(m, np.inf)
    for i in range(n):
        lo, hi = max(0, i - band), min(m - 1, i + band)
        row_cost = cost[i, lo:hi + 1]
        if i == 0:
            entry = np.full(hi - lo + 1, np.inf)
            entry[0] = row_cost[0]
        else:
            diag = np.concatenate(([np.inf], prev[:-1]))[lo:hi + 1]
            entry = row_cost + np.minimum(diag, prev[lo:hi + 1])
        prefix = np.cumsum(row_cost)
        row = prefix + np.minimum.accumulate(entry - prefix)
        prev = np.full(m, np.inf)
        prev[lo:hi + 1] = row
    return float(prev[m - 1])


def dtw_matrix(segments: Sequence[ArrayLike], radius: Optional[int] = None) -> np.ndarray:
    """Symmetric pairwise DTW distances."""
    n = len(segments)
    distances = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            distances[i, j] = distances[j, i] = dtw(segments[i], segments[j], radius)
    return distances


def choose_k_prime(per_episode_k: Sequence[int]) -> int:
    """Mean of the per-episode cluster counts, rounded half up, at least 1."""
    if len(per_episode_k) == 0:
        raise ValueError("choose_k_prime needs at least one cluster count")
    return max(1, int(math.floor(float(np.mean(per_episode_k)) + 0.5)))


def merge_short_segments(segments: Sequence[Subsequence], min_length: int) -> List[Subsequence]:
    """Merge segments shorter than ``min_length`` into their temporal successor.

    A short final segment merges into its predecessor instead. ``segments`` must be
    the ordered, contiguous segments of one episode.
    """
    def join(first: Subsequence, second: Subsequence) -> Subsequence:
        return Subsequence(first.episode_id, first.start, second.end,
                           np.vstack([first.values, second.values]))

    merged: List[Subsequence] = []
    pending: Optional[Subsequence] = None
    last = len(segments) - 1
    for idx, segment in enumerate(segments):
        if pending is not None:
            segment = join(pending, segment)
            pending = None
        if segment.length < min_length:
            if idx < last:
                pending = segment
                continue
            if merged:
                merged[-1] = join(merged[-1], segment)
                continue
        merged.append(segment)
    return merged


class FactorClusterer(LoggerMixin):
    """K'-medoids clustering of segments under DTW.

    Medoids are seeded by farthest-point selection starting from a seeded random
    pick. Each iteration assigns segments to their nearest medoid (a medoid always
    stays in its own cluster) and moves every medoid to the member with the
    smallest summed distance to its co-members. The recorded cost never increases.
    """

    def __init__(self, k_prime: int, seed: int = 0, max_iters: int = 50, radius: Optional[int] = None):
        if k_prime < 1:
            raise ValueError(f"k_prime must be >= 1, got {k_prime}")
        self.k_prime = k_prime
        self.seed = seed
        self.max_iters = max_iters
        self.radius = radius

    def _seed_medoids(self, distances: np.ndarray) -> List[int]:
        n = len(distances)
        rng = np.random.default_rng(self.seed)
        medoids = [int(rng.integers(n))]
        nearest = distances[medoids[0]].copy()
        while len(medoids) < self.k_prime:
            candidates = nearest.copy()
            candidates[medoids] = -np.inf
            pick = int(np.argmax(candidates))
            medoids.append(pick)
            nearest = np.minimum(nearest, distances[pick])
        return medoids

    @staticmethod
    def _assign(distances: np.ndarray, medoids: List[int]) -> Tuple[np.ndarray, float]:
        labels = np.argmin(distances[:, medoids], axis=1)
        for k, m in enumerate(medoids):
            labels[m] = k
        cost = float(sum(distances[i, medoids[labels[i]]] for i in range(len(labels))))
        return labels, cost

    @staticmethod
    def _update_medoids(distances: np.ndarray, labels: np.ndarray, medoids: List[int]) -> List[int]:
        updated = []
        for k, current in enumerate(medoids):
            members = np.flatnonzero(labels == k)
            totals = distances[np.ix_(members, members)].sum(axis=1)
            best = totals.min()
            current_total = totals[np.flatnonzero(members == current)[0]]
            if current_total <= best:
                updated.append(current)
            else:
                updated.append(int(members[np.flatnonzero(totals == best)[0]]))
        return updated

    def fit(self, segments: Sequence[Subsequence],
            distances: Optional[np.ndarray] = None) -> TscfDictionary:
        """Cluster ``segments`` into ``k_prime`` factors.

        Raises:
            ReduceKPrime: If there are fewer segments than factors
            DimensionMismatch: If segment dimensions differ
        """
        n = len(segments)
        if n < self.k_prime:
            raise ReduceKPrime(self.k_prime, n)
        dims = {s.dim for s in segments}
        if len(dims) > 1:
            ordered = sorted(dims)
            raise DimensionMismatch(ordered[0], ordered[-1], where="segments")
        if distances is None:
            distances = dtw_matrix(segments, self.radius)

        medoids = self._seed_medoids(distances)
        labels, cost = self._assign(distances, medoids)
        trace = [cost]
        for iteration in range(self.max_iters):
            new_medoids = self._update_medoids(distances, labels, medoids)
            if new_medoids == medoids:
                break
            medoids = new_medoids
            labels, cost = self._assign(distances, medoids)
            trace.append(cost)
        else:
            self.logger.warning("K'-medoids stopped after %d iterations without a fixed point",
                                self.max_iters)

        factors = [
            TSCF(id=k, medoid=segments[m], members=[segments[i] for i in np.flatnonzero(labels == k)])
            for k, m in enumerate(medoids)
        ]
        self.logger.debug("Clustered %d segments into %d factors (cost %.4f)", n, self.k_prime, trace[-1])
        return TscfDictionary(factors=factors, cost_trace=trace)


def cluster_factors(all_segments: Sequence[Subsequence], k_prime: int, seed: int = 0,
                    max_iters: int = 50, radius: Optional[int] = None) -> TscfDictionary:
    """K'-medoid clustering of every segment in the corpus; see :class:`FactorClusterer`."""
    return FactorClusterer(k_prime, seed=seed, max_iters=max_iters, radius=radius).fit(all_segments)


def encode_episodes(dictionary: TscfDictionary,
                    episode_segments: Mapping[int, Sequence[Subsequence]],
                    outcomes: Mapping[int, float]) -> Tuple[List[EpisodeEncoding], OccurrenceMap]:
    """Binary factor-presence vectors and occurrence intervals for every episode.

    Args:
        dictionary: Clustered factors
        episode_segments: Segments of each episode, as clustered
        outcomes: Episode return per episode id

    Raises:
        InternalInconsistency: If a segment is not a member of any factor
    """
    encodings = []
    occurrences = OccurrenceMap()
    for episode_id in sorted(episode_segments):
        U = np.zeros(dictionary.k_prime, dtype=int)
        for segment in episode_segments[episode_id]:
            factor = dictionary.factor_of(segment)
            if factor is None:
                raise InternalInconsistency(
                    f"Segment [{segment.start}, {segment.end}] of episode {episode_id} has no factor")
            U[factor] = 1
            occurrences.add(episode_id, factor, segment.start, segment.end)
        encodings.append(EpisodeEncoding(episode_id, U, outcomes[episode_id]))
    return encodings, occurrences


def _overlap(a: Sequence[int], b: Sequence[int]) -> int:
    return max(0, min(a[1], b[1]) - max(a[0], b[0]) + 1)


def identify_planted_factor(occurrences: OccurrenceMap,
                            ground_truth: Mapping[int, Iterable[Sequence[int]]]) -> Optional[int]:
    """Factor whose occurrences overlap the known motif intervals the most.

    Args:
        occurrences: Factor occurrences in step coordinates
        ground_truth: Motif intervals ``[start, end]`` per episode id

    Returns:
        The best-overlapping factor id, or None when nothing overlaps
    """
    scores: Dict[int, int] = {}
    for (episode_id, factor), spans in occurrences.items():
        truth = list(ground_truth.get(episode_id, []))
        if not truth:
            continue
        total = sum(_overlap(span, t) for span in spans for t in truth)
        scores[factor] = scores.get(factor, 0) + total
    if not scores or max(scores.values()) == 0:
        return None
    best = max(scores.values())
    return min(k for k, v in scores.items() if v == best)
