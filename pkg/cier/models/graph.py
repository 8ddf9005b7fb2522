"""Causal graph models: endpoint marks, PAGs, datasets and effect tables."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from .factors import EpisodeEncoding


class EndpointMark(Enum):
    """Mark at one end of a PAG edge."""

    ARROW = ">"
    TAIL = "-"
    CIRCLE = "o"

    def __str__(self) -> str:
        return self.value


EdgeTuple = Tuple[int, EndpointMark, int, EndpointMark]


class Pag:
    """Partial ancestral graph over the factor nodes and the outcome node.

    Nodes are integers ``0..n-1``; by convention the outcome is the last node.
    ``mark(a, b)`` is the endpoint mark at ``b`` on the edge between ``a`` and ``b``,
    so a directed edge ``a -> b`` has ``mark(a, b) == ARROW`` and
    ``mark(b, a) == TAIL``.
    """

    def __init__(self, names: Sequence[str], outcome: Optional[int] = None):
        self.names = [str(n) for n in names]
        self.outcome = len(self.names) - 1 if outcome is None else outcome
        self._marks: Dict[Tuple[int, int], EndpointMark] = {}

    @property
    def nodes(self) -> List[int]:
        return list(range(len(self.names)))

    @property
    def factor_nodes(self) -> List[int]:
        return [n for n in self.nodes if n != self.outcome]

    def _check_node(self, node: int) -> None:
        if not 0 <= node < len(self.names):
            raise KeyError(f"Unknown node {node}")

    def add_edge(self, a: int, b: int,
                 mark_at_a: EndpointMark = EndpointMark.CIRCLE,
                 mark_at_b: EndpointMark = EndpointMark.CIRCLE) -> None:
        """Add or overwrite the single edge between ``a`` and ``b``."""
        self._check_node(a)
        self._check_node(b)
        if a == b:
            raise ValueError(f"Self-edge on node {a} is not allowed")
        self._marks[(b, a)] = mark_at_a
        self._marks[(a, b)] = mark_at_b

    def add_directed(self, a: int, b: int) -> None:
        self.add_edge(a, b, EndpointMark.TAIL, EndpointMark.ARROW)

    def remove_edge(self, a: int, b: int) -> None:
        self._marks.pop((a, b), None)
        self._marks.pop((b, a), None)

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self._marks

    def mark(self, a: int, b: int) -> EndpointMark:
        """Mark at ``b`` on edge ``a *-* b``."""
        return self._marks[(a, b)]

    def set_mark(self, a: int, b: int, mark: EndpointMark) -> None:
        """Set the mark at ``b`` on the existing edge ``a *-* b``."""
        if (a, b) not in self._marks:
            raise KeyError(f"No edge between {a} and {b}")
        self._marks[(a, b)] = mark

    def adjacent(self, node: int) -> Set[int]:
        return {b for (a, b) in self._marks if a == node}

    def is_directed(self, a: int, b: int) -> bool:
        """True for ``a -> b``."""
        return (self.has_edge(a, b)
                and self._marks[(a, b)] is EndpointMark.ARROW
                and self._marks[(b, a)] is EndpointMark.TAIL)

    def is_fully_directed(self) -> bool:
        return all(self.is_directed(a, b) or self.is_directed(b, a) for a, _, b, _ in self.edges())

    def edges(self) -> List[EdgeTuple]:
        """``(a, mark_at_a, b, mark_at_b)`` with ``a < b``, sorted."""
        result = []
        for (a, b), mark_at_b in sorted(self._marks.items()):
            if a < b:
                result.append((a, self._marks[(b, a)], b, mark_at_b))
        return result

    def edge_count(self) -> int:
        return len(self._marks) // 2

    def parents(self, node: int) -> List[int]:
        return sorted(a for a in self.adjacent(node) if self.is_directed(a, node))

    def children(self, node: int) -> List[int]:
        return sorted(b for b in self.adjacent(node) if self.is_directed(node, b))

    def skeleton(self) -> Set[frozenset]:
        return {frozenset((a, b)) for a, _, b, _ in self.edges()}

    def copy(self) -> 'Pag':
        clone = Pag(self.names, self.outcome)
        clone._marks = dict(self._marks)
        return clone

    def to_digraph(self) -> nx.DiGraph:
        """Directed edges as a networkx graph; undirected or partially oriented edges are omitted."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        for a, _, b, _ in self.edges():
            if self.is_directed(a, b):
                graph.add_edge(a, b)
            elif self.is_directed(b, a):
                graph.add_edge(b, a)
        return graph

    @classmethod
    def from_digraph(cls, graph: nx.DiGraph, names: Sequence[str], outcome: Optional[int] = None) -> 'Pag':
        pag = cls(names, outcome)
        for a, b in graph.edges():
            pag.add_directed(a, b)
        return pag

    def edge_label(self, a: int, b: int) -> str:
        """Two-character mark code, e.g. ``o>`` for ``a o-> b``."""
        return f"{self._marks[(b, a)]}{self._marks[(a, b)]}"

    def describe_edge(self, a: int, b: int) -> str:
        left = {EndpointMark.ARROW: "<", EndpointMark.TAIL: "-", EndpointMark.CIRCLE: "o"}[self._marks[(b, a)]]
        return f"{self.names[a]} {left}-{self._marks[(a, b)]} {self.names[b]}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pag):
            return NotImplemented
        return self.names == other.names and self.outcome == other.outcome and self._marks == other._marks

    def __repr__(self) -> str:
        return f"Pag(nodes={len(self.names)}, edges={self.edge_count()})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "names": list(self.names),
            "outcome": self.outcome,
            "edges": [
                {"a": a, "b": b, "mark_a": str(ma), "mark_b": str(mb)}
                for a, ma, b, mb in self.edges()
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Pag':
        pag = cls(data["names"], data.get("outcome"))
        for edge in data.get("edges", []):
            pag.add_edge(edge["a"], edge["b"], EndpointMark(edge["mark_a"]), EndpointMark(edge["mark_b"]))
        return pag


@dataclass
class CausalDataset:
    """Episodes as rows: binary factor columns ``U_k`` followed by the continuous outcome."""

    treatments: np.ndarray
    outcome: np.ndarray
    names: List[str] = field(default_factory=list)
    episode_ids: List[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        treatments = np.asarray(self.treatments, dtype=float)
        if treatments.ndim == 1:
            treatments = treatments.reshape(-1, 1)
        outcome = np.asarray(self.outcome, dtype=float).ravel()
        if treatments.shape[0] != outcome.shape[0]:
            raise ValueError(
                f"{treatments.shape[0]} treatment rows but {outcome.shape[0]} outcome values")
        if outcome.shape[0] < 1:
            raise ValueError("CausalDataset needs at least one row")
        if treatments.size and not np.all((treatments == 0) | (treatments == 1)):
            raise ValueError("Treatment columns must be binary")
        self.treatments = treatments
        self.outcome = outcome
        if not self.names:
            self.names = [f"U{k}" for k in range(treatments.shape[1])] + ["y"]
        if len(self.names) != treatments.shape[1] + 1:
            raise ValueError("names must list every treatment column plus the outcome")
        if not self.episode_ids:
            self.episode_ids = list(range(outcome.shape[0]))

    @property
    def n_rows(self) -> int:
        return int(self.outcome.shape[0])

    @property
    def n_factors(self) -> int:
        return int(self.treatments.shape[1])

    @property
    def outcome_index(self) -> int:
        return self.n_factors

    @property
    def matrix(self) -> np.ndarray:
        """All columns, outcome last."""
        return np.column_stack([self.treatments, self.outcome])

    def column(self, index: int) -> np.ndarray:
        if index == self.outcome_index:
            return self.outcome
        return self.treatments[:, index]

    def is_binary(self, index: int) -> bool:
        return index != self.outcome_index

    @classmethod
    def from_encodings(cls, encodings: Iterable[EpisodeEncoding],
                       names: Optional[List[str]] = None) -> 'CausalDataset':
        encodings = list(encodings)
        if not encodings:
            raise ValueError("CausalDataset needs at least one encoding")
        return cls(
            treatments=np.vstack([e.U for e in encodings]),
            outcome=np.array([e.outcome for e in encodings]),
            names=list(names) if names else [],
            episode_ids=[e.episode_id for e in encodings],
        )


@dataclass
class EffectEntry:
    """Causal strength of one factor toward the outcome."""

    factor: int
    strength: float = 0.0
    relevant: bool = False
    direct_effect: float = 0.0
    paths: List[List[int]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "factor": self.factor,
            "strength": self.strength,
            "relevant": self.relevant,
            "direct_effect": self.direct_effect,
            "paths": [list(p) for p in self.paths],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EffectEntry':
        return cls(
            factor=int(data["factor"]),
            strength=float(data.get("strength", 0.0)),
            relevant=bool(data.get("relevant", False)),
            direct_effect=float(data.get("direct_effect", 0.0)),
            paths=[list(p) for p in data.get("paths", [])],
        )


@dataclass
class CausalEffectTable:
    """Per-factor strengths; irrelevant factors always carry strength 0."""

    entries: Dict[int, EffectEntry] = field(default_factory=dict)
    aggregation: str = "sum"

    def __post_init__(self) -> None:
        for entry in self.entries.values():
            if not np.isfinite(entry.strength) or entry.strength < 0:
                raise ValueError(f"Strength of factor {entry.factor} must be finite and >= 0")
            if not entry.relevant:
                entry.strength = 0.0

    def strength(self, factor: int) -> float:
        entry = self.entries.get(factor)
        return entry.strength if entry else 0.0

    def strengths(self) -> Dict[int, float]:
        return {k: e.strength for k, e in sorted(self.entries.items())}

    def relevant_factors(self) -> List[int]:
        return sorted(k for k, e in self.entries.items() if e.relevant)

    @property
    def max_strength(self) -> float:
        relevant = [e.strength for e in self.entries.values() if e.relevant]
        return max(relevant) if relevant else 0.0

    def is_empty(self) -> bool:
        return not self.relevant_factors()

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "aggregation": self.aggregation,
            "effects": [e.to_dict() for _, e in sorted(self.entries.items())],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CausalEffectTable':
        entries = [EffectEntry.from_dict(e) for e in data.get("effects", [])]
        return cls(entries={e.factor: e for e in entries}, aggregation=data.get("aggregation", "sum"))
