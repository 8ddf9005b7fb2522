"""Causal analysis pipeline: episodes -> segments -> factors -> PAG -> DAG -> effect table."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..models.factors import EpisodeEncoding, OccurrenceMap, TscfDictionary
from ..models.graph import CausalDataset, CausalEffectTable, Pag
from ..models.segmentation import ClusterModel, Segmentation, TiccParams
from ..models.transition import ActionTimeSeries, Subsequence, Transition
from ..utils.logging import LoggerMixin
from .config import CIERConfig
from .exceptions import ReduceKPrime
from .results import AnalysisRequest

EpisodeInput = Union[ActionTimeSeries, Sequence[Transition]]


@dataclass
class AnalysisResult:
    """Everything one causal analysis produced."""

    request_id: int
    segmentations: Dict[int, Segmentation]
    episode_segments: Dict[int, List[Subsequence]]
    dictionary: TscfDictionary
    encodings: List[EpisodeEncoding]
    occurrences: OccurrenceMap
    pag: Pag
    dag: Pag
    effect_table: CausalEffectTable
    decisions: List[Any] = field(default_factory=list)
    planted_factor: Optional[int] = None
    cluster_models: Dict[int, List[ClusterModel]] = field(default_factory=dict)

    @property
    def k_prime(self) -> int:
        return self.dictionary.k_prime

    @property
    def episode_ids(self) -> List[int]:
        return sorted(self.episode_segments)

    @property
    def planted_relevant(self) -> Optional[bool]:
        if self.planted_factor is None:
            return None
        return self.planted_factor in self.effect_table.relevant_factors()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "request_id": self.request_id,
            "episodes": self.episode_ids,
            "k_prime": self.k_prime,
            "segment_counts": {str(k): len(v) for k, v in sorted(self.episode_segments.items())},
            "pag": self.pag.to_dict(),
            "dag": self.dag.to_dict(),
            "effects": self.effect_table.to_dict(),
            "orientation": [d.to_dict() for d in self.decisions],
            "planted_factor": self.planted_factor,
        }


class CausalAnalysisPipeline(LoggerMixin):
    """Runs segmentation, factor clustering, discovery, time correction and effect estimation.

    Args:
        config: Full configuration; only the ``ticc``, ``tscf`` and ``causal`` sections are read
    """

    def __init__(self, config: CIERConfig):
        config.validate()
        self.config = config

    # -- segmentation -------------------------------------------------------

    def cluster_count(self, n: int) -> int:
        """Adaptive K for a series of length ``n``, capped so every cluster can hold two windows."""
        from ..timeseries.ticc import adaptive_k

        w = self.config.ticc.window
        k = adaptive_k(n, self.config.ticc)
        return max(1, min(k, (n - w + 1) // 2))

    def segment_series(self, series: ActionTimeSeries,
                       k: Optional[int] = None) -> Tuple[Segmentation, List[ClusterModel]]:
        """TICC segmentation of one episode, with segments cut from the raw frames.

        Episodes too short for two windows become a single segment.

        Args:
            series: Raw action series
            k: Cluster count; adaptive when None
        """
        from ..timeseries.series import znormalize
        from ..timeseries.ticc import fit_ticc, segments_from_labels

        cfg = self.config.ticc
        n = series.length
        n_windows = n - cfg.window + 1
        if n_windows < 2:
            k = 1
        elif k is None:
            k = self.cluster_count(n)
        if k == 1:
            labels = np.zeros(max(n_windows, 1), dtype=int)
            return Segmentation(
                episode_id=series.episode_id,
                labels=labels,
                segments=[series.subsequence(0, n - 1)],
                segment_labels=[0],
                window_runs=[[0, len(labels) - 1]],
                K=1,
            ), []

        fitted = znormalize(series) if cfg.normalize else series
        models, segmentation = fit_ticc(fitted, TiccParams.from_config(cfg, k))
        if cfg.normalize:
            segments, seg_labels, runs = segments_from_labels(series, segmentation.labels, cfg.window)
            segmentation.segments = segments
            segmentation.segment_labels = seg_labels
            segmentation.window_runs = runs
        self.logger.debug("Episode %d: K=%d, %d segments, converged=%s",
                          series.episode_id, k, len(segmentation.segments), segmentation.converged)
        return segmentation, models

    def segment(self, series_list: Iterable[ActionTimeSeries]) -> Tuple[Dict[int, Segmentation],
                                                                          Dict[int, List[ClusterModel]]]:
        segmentations, models = {}, {}
        for series in series_list:
            segmentations[series.episode_id], models[series.episode_id] = self.segment_series(series)
        return segmentations, models

    # -- factors ------------------------------------------------------------

    def build_factors(self, segmentations: Mapping[int, Segmentation],
                      outcomes: Mapping[int, float]) -> Tuple[TscfDictionary, Dict[int, List[Subsequence]],
                                                              List[EpisodeEncoding], OccurrenceMap]:
        from ..timeseries.tscf import choose_k_prime, cluster_factors, encode_episodes, merge_short_segments

        cfg = self.config.tscf
        min_length = cfg.min_segment_length or self.config.ticc.window
        episode_segments = {
            ep: merge_short_segments(seg.segments, min_length) for ep, seg in sorted(segmentations.items())
        }
        corpus = [s for ep in sorted(episode_segments) for s in episode_segments[ep]]
        k_prime = cfg.k_prime or choose_k_prime([seg.K for seg in segmentations.values()])
        try:
            dictionary = cluster_factors(corpus, k_prime, seed=cfg.seed, max_iters=cfg.max_iters,
                                         radius=cfg.sakoe_chiba_radius)
        except ReduceKPrime as e:
            self.logger.warning("Reducing K' from %d to %d", e.requested, e.usable)
            dictionary = cluster_factors(corpus, e.usable, seed=cfg.seed, max_iters=cfg.max_iters,
                                         radius=cfg.sakoe_chiba_radius)
        encodings, occurrences = encode_episodes(dictionary, episode_segments, outcomes)
        return dictionary, episode_segments, encodings, occurrences

    # -- causal -------------------------------------------------------------

    def discover(self, encodings: Sequence[EpisodeEncoding], occurrences: OccurrenceMap):
        """PAG discovery, time correction and path strengths.

        Returns:
            (pag, dag, effect table, orientation decisions)
        """
        from ..causal.discovery import GfciLite
        from ..causal.effects import path_strengths
        from ..causal.time_correction import TimeCorrector

        cfg = self.config.causal
        data = CausalDataset.from_encodings(encodings)
        discovery = GfciLite(alpha=cfg.alpha, seed=cfg.seed, max_sepset_size=cfg.max_sepset_size,
                             restarts=cfg.restarts, min_samples_per_node=cfg.min_samples_per_node).fit(data)
        correction = TimeCorrector(occurrences).correct(discovery.pag)
        table = path_strengths(correction.pag, data, cfg.path_aggregation)
        return discovery.pag, correction.pag, table, correction.decisions

    # -- entry points -------------------------------------------------------

    def run(self, episodes: Sequence[EpisodeInput], request_id: int = 0,
            ground_truth: Optional[Mapping[int, Iterable[Sequence[int]]]] = None) -> AnalysisResult:
        """Full analysis of a batch of complete episodes.

        Args:
            episodes: Action series or per-episode transition lists
            request_id: Identifier carried into the result
            ground_truth: Planted motif intervals per episode, when known
        """
        from ..timeseries.series import build_series
        from ..timeseries.tscf import identify_planted_factor

        series_list = [e if isinstance(e, ActionTimeSeries) else build_series(e) for e in episodes]
        segmentations, models = self.segment(series_list)
        outcomes = {s.episode_id: s.episode_return for s in series_list}
        dictionary, episode_segments, encodings, occurrences = self.build_factors(segmentations, outcomes)
        pag, dag, table, decisions = self.discover(encodings, occurrences)

        planted = identify_planted_factor(occurrences, ground_truth) if ground_truth else None
        self.logger.info("Analysis %d: %d episodes, K'=%d, %d relevant factors",
                         request_id, len(series_list), dictionary.k_prime, len(table.relevant_factors()))
        return AnalysisResult(
            request_id=request_id,
            segmentations=segmentations,
            episode_segments=episode_segments,
            dictionary=dictionary,
            encodings=encodings,
            occurrences=occurrences,
            pag=pag,
            dag=dag,
            effect_table=table,
            decisions=decisions,
            planted_factor=planted,
            cluster_models=models,
        )

    def analyze(self, request: AnalysisRequest,
                ground_truth: Optional[Mapping[int, Iterable[Sequence[int]]]] = None) -> AnalysisResult:
        """Run the pipeline on the episodes of an analysis request."""
        return self.run(request.episodes, request_id=request.request_id, ground_truth=ground_truth)
