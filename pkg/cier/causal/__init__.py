"""Causal discovery over factor encodings and effect estimation toward the reward."""

from .ci_tests import CITester, ci_test, g_squared_test, partial_correlation_test
from .scoring import BicScorer, bic_score
from .discovery import DiscoveryResult, GfciLite, gfci_lite
from .time_correction import TimeCorrector, precedence, time_correction
from .effects import PathStrengthEstimator, ate, path_strengths

__all__ = [
    "CITester",
    "ci_test",
    "g_squared_test",
    "partial_correlation_test",
    "BicScorer",
    "bic_score",
    "DiscoveryResult",
    "GfciLite",
    "gfci_lite",
    "TimeCorrector",
    "precedence",
    "time_correction",
    "PathStrengthEstimator",
    "ate",
    "path_strengths",
]
