"""Action time series: ingestion, TICC segmentation and factor dictionaries."""

from .series import build_series, znormalize, window_stack
from .toeplitz import ToeplitzGraphicalLasso, toeplitz_project
from .ticc import TiccSegmenter, adaptive_k, fit_ticc, log_likelihood, viterbi_labels
from .tscf import (
    FactorClusterer, choose_k_prime, cluster_factors, dtw, encode_episodes,
    identify_planted_factor, merge_short_segments,
)

__all__ = [
    "build_series",
    "znormalize",
    "window_stack",
    "ToeplitzGraphicalLasso",
    "toeplitz_project",
    "TiccSegmenter",
    "adaptive_k",
    "fit_ticc",
    "log_likelihood",
    "viterbi_labels",
    "FactorClusterer",
    "choose_k_prime",
    "cluster_factors",
    "dtw",
    "encode_episodes",
    "identify_planted_factor",
    "merge_short_segments",
]
