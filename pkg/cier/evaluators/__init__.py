"""Configuration validation and training-curve evaluation."""

from .schema_validator import ConfigSchemaValidator
from .metrics import ComparisonReport, PairedTest, compare_runs, compute_metrics, episodes_to_threshold

__all__ = [
    "ConfigSchemaValidator",
    "ComparisonReport",
    "PairedTest",
    "compare_runs",
    "compute_metrics",
    "episodes_to_threshold",
]
