"""Exception classes for the CIER pipeline."""

from typing import Any, List, Optional


class CIERError(Exception):
    """Base exception for CIER errors."""
    pass


class ConfigurationError(CIERError):
    """Raised when configuration is invalid."""
    pass


class DataError(CIERError):
    """Raised when input data violates a precondition (CLI exit code 3)."""
    pass


class NumericalError(CIERError):
    """Raised when a numerical procedure fails (CLI exit code 4)."""
    pass


# -- series -------------------------------------------------------------------

class EmptyEpisode(DataError):
    """Raised when an episode has no transitions."""

    def __init__(self, episode_id: Optional[int] = None):
        self.episode_id = episode_id
        super().__init__(f"Episode {episode_id} has no transitions")


class MixedEpisodes(DataError):
    """Raised when a transition sequence spans several episodes."""

    def __init__(self, episode_ids: List[int]):
        self.episode_ids = sorted(set(episode_ids))
        super().__init__(f"Transitions belong to several episodes: {self.episode_ids}")


class DimensionMismatch(DataError):
    """Raised when vectors that must share a dimension do not."""

    def __init__(self, expected: int, actual: int, where: str = ""):
        self.expected = expected
        self.actual = actual
        suffix = f" ({where})" if where else ""
        super().__init__(f"Expected dimension {expected}, got {actual}{suffix}")


class TooShort(DataError):
    """Raised when a series is too short for the requested operation."""

    def __init__(self, length: int, minimum: int):
        self.length = length
        self.minimum = minimum
        super().__init__(f"Series of length {length} is shorter than the minimum {minimum}")


class WindowTooLarge(DataError):
    """Raised when a window exceeds the series length."""

    def __init__(self, window: int, length: int):
        self.window = window
        self.length = length
        super().__init__(f"Window {window} is larger than series length {length}")


# -- ticc / tscf --------------------------------------------------------------

class NotEnoughData(DataError):
    """Raised when there are too few windows to fit the requested clusters."""

    def __init__(self, windows: int, clusters: int):
        self.windows = windows
        self.clusters = clusters
        super().__init__(f"{windows} windows cannot support {clusters} clusters (need >= {2 * clusters})")


class NotPositiveDefinite(NumericalError):
    """Raised when a precision matrix fails its symmetric factorization."""
    pass


class ReduceKPrime(DataError):
    """Raised when fewer segments exist than requested factors.

    The caller is expected to retry with ``k_prime = usable``.
    """

    def __init__(self, requested: int, usable: int):
        self.requested = requested
        self.usable = usable
        super().__init__(f"Requested {requested} factors but only {usable} segments are available")


class InternalInconsistency(DataError):
    """Raised when bookkeeping between segments and factors disagrees."""
    pass


# -- causal -------------------------------------------------------------------

class NotADag(DataError):
    """Raised when a graph expected to be acyclic contains a cycle."""
    pass


class NoOverlap(DataError):
    """Raised when a treatment arm is missing, overall or in every stratum."""

    def __init__(self, treatment: Any, reason: str = "one treatment arm is empty"):
        self.treatment = treatment
        self.reason = reason
        super().__init__(f"No overlap for treatment {treatment}: {reason}")


class GraphCycle(NumericalError):
    """Raised when a corrected graph still contains a directed cycle."""

    def __init__(self, cycle: List[Any]):
        self.cycle = cycle
        super().__init__(f"Directed cycle detected: {cycle}")


# -- replay / rl --------------------------------------------------------------

class NotEnoughExperience(DataError):
    """Raised when sampling more transitions than are stored."""

    def __init__(self, stored: int, batch: int):
        self.stored = stored
        self.batch = batch
        super().__init__(f"Cannot sample {batch} transitions from {stored} stored")


class EpisodeFinished(CIERError):
    """Raised when stepping an environment whose episode has ended."""
    pass


class ShapeError(DataError):
    """Raised when array shapes do not match a network's layout."""
    pass


class DivergenceError(NumericalError):
    """Raised when training produces non-finite or runaway scores."""

    def __init__(self, episode: int, score: float, bound: float):
        self.episode = episode
        self.score = score
        self.bound = bound
        super().__init__(f"Training diverged at episode {episode}: score {score} (bound {bound})")


# -- metrics ------------------------------------------------------------------

class EmptyScores(DataError):
    """Raised when metrics are requested for an empty score sequence."""
    pass


class SeedMismatch(DataError):
    """Raised when paired runs have different seed counts or lengths."""
    pass
