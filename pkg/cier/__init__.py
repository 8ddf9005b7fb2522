"""
CIER: Causal Inference Experience Replay

Segments episode action histories into recurring patterns, discovers which of them
cause the reward, and tilts replay sampling toward the transitions inside them.
"""

__version__ = "0.1.0"
__author__ = "CIER Team"

from .core.config import CIERConfig
from .core.pipeline import CausalAnalysisPipeline
from .replay.buffer import ReplayBuffer
from .rl.trainer import train

__all__ = [
    "CIERConfig",
    "CausalAnalysisPipeline",
    "ReplayBuffer",
    "train",
]
