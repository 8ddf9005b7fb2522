"""Utility modules for CIER."""

from .logging import setup_logger, get_logger, LoggerMixin
from .serialization import JSONSerializable, save_json, load_json, write_json_lines, read_json_lines, stable_hash

__all__ = [
    "setup_logger",
    "get_logger",
    "LoggerMixin",
    "JSONSerializable",
    "save_json",
    "load_json",
    "write_json_lines",
    "read_json_lines",
    "stable_hash",
]
