"""Data models for the CIER pipeline."""

from .transition import Transition, ActionTimeSeries, Subsequence
from .segmentation import TiccParams, ClusterModel, Segmentation
from .factors import TSCF, TscfDictionary, EpisodeEncoding, OccurrenceMap
from .graph import EndpointMark, Pag, CausalDataset, EffectEntry, CausalEffectTable
from .metrics import Metrics, EffectSnapshot, TrainingRun, RunManifest

__all__ = [
    "Transition",
    "ActionTimeSeries",
    "Subsequence",
    "TiccParams",
    "ClusterModel",
    "Segmentation",
    "TSCF",
    "TscfDictionary",
    "EpisodeEncoding",
    "OccurrenceMap",
    "EndpointMark",
    "Pag",
    "CausalDataset",
    "EffectEntry",
    "CausalEffectTable",
    "Metrics",
    "EffectSnapshot",
    "TrainingRun",
    "RunManifest",
]
