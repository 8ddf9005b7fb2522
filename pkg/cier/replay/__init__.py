"""Replay storage with curriculum-weighted causal priorities."""

from .sum_tree import SumTree
from .curriculum import mu
from .buffer import ReplayBuffer, TemporaryPool, assign_causal_weights, on_temp_full
from .conformance import ConformanceReport, buffer_from_snapshot, sampling_conformance

__all__ = [
    "SumTree",
    "mu",
    "ReplayBuffer",
    "TemporaryPool",
    "assign_causal_weights",
    "on_temp_full",
    "ConformanceReport",
    "buffer_from_snapshot",
    "sampling_conformance",
]
