"""Core components of CIER: configuration, errors, interfaces and the analysis pipeline."""

from .config import CIERConfig, load_config_from_env, load_default_config
from .exceptions import (
    CIERError,
    ConfigurationError,
    DataError,
    NumericalError,
    EpisodeFinished,
)
from .interfaces import Agent, Environment
from .pipeline import AnalysisResult, CausalAnalysisPipeline
from .results import AnalysisRequest, CITestResult, SampledBatch, SchemaError, ValidationResult

__all__ = [
    "CIERConfig",
    "load_config_from_env",
    "load_default_config",
    "CIERError",
    "ConfigurationError",
    "DataError",
    "NumericalError",
    "EpisodeFinished",
    "Agent",
    "Environment",
    "AnalysisResult",
    "CausalAnalysisPipeline",
    "AnalysisRequest",
    "CITestResult",
    "SampledBatch",
    "SchemaError",
    "ValidationResult",
]
