"""Decomposable BIC score for DAGs over a :class:`CausalDataset`."""

import math
from typing import Dict, FrozenSet, Iterable, Tuple, Union

import networkx as nx
import numpy as np

from ..core.exceptions import NotADag
from ..models.graph import CausalDataset

MIN_VARIANCE = 1e-12

GraphLike = Union[nx.DiGraph, Dict[int, Iterable[int]]]


def _as_digraph(graph: GraphLike, n_nodes: int) -> nx.DiGraph:
    if isinstance(graph, nx.DiGraph):
        dag = graph.copy()
    else:
        dag = nx.DiGraph()
        for child, parents in graph.items():
            dag.add_edges_from((p, child) for p in parents)
    dag.add_nodes_from(range(n_nodes))
    return dag


class BicScorer:
    """Caches family scores ``loglik(node | parents) - (params / 2) log N``.

    A binary child gets a multinomial family with ``2 ** |parents|`` free
    parameters; the outcome child gets a linear-Gaussian regression on its parents
    with ``|parents| + 2`` parameters (coefficients, intercept, variance). A
    continuous parent of a binary child is split at its median.
    """

    def __init__(self, data: CausalDataset):
        self.data = data
        self.log_n = math.log(data.n_rows)
        self._cache: Dict[Tuple[int, FrozenSet[int]], float] = {}

    def _binary_parent(self, index: int) -> np.ndarray:
        column = self.data.column(index)
        if self.data.is_binary(index):
            return column.astype(int)
        return (column > np.median(column)).astype(int)

    def _multinomial(self, node: int, parents: Tuple[int, ...]) -> float:
        child = self.data.column(node).astype(int)
        if parents:
            bits = np.column_stack([self._binary_parent(p) for p in parents])
            config = bits @ (1 << np.arange(len(parents)))
        else:
            config = np.zeros(len(child), dtype=int)
        counts = np.zeros((1 << len(parents), 2))
        np.add.at(counts, (config, child), 1)
        totals = counts.sum(axis=1, keepdims=True)
        positive = counts > 0
        loglik = float(np.sum(counts[positive] * np.log((counts / np.where(totals > 0, totals, 1))[positive])))
        params = 1 << len(parents)
        return loglik - 0.5 * params * self.log_n

    def _linear_gaussian(self, node: int, parents: Tuple[int, ...]) -> float:
        y = self.data.column(node)
        n = len(y)
        design = np.column_stack([np.ones(n)] + [self.data.column(p) for p in parents])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        residual = y - design @ coef
        variance = max(float(np.dot(residual, residual)) / n, MIN_VARIANCE)
        loglik = -0.5 * n * (math.log(2.0 * math.pi * variance) + 1.0)
        params = len(parents) + 2
        return loglik - 0.5 * params * self.log_n

    def family_score(self, node: int, parents: Iterable[int]) -> float:
        key = (node, frozenset(parents))
        if key not in self._cache:
            ordered = tuple(sorted(key[1]))
            if self.data.is_binary(node):
                self._cache[key] = self._multinomial(node, ordered)
            else:
                self._cache[key] = self._linear_gaussian(node, ordered)
        return self._cache[key]

    def score(self, graph: GraphLike) -> float:
        """Sum of family scores.

        Raises:
            NotADag: If the graph has a directed cycle
        """
        n_nodes = self.data.n_factors + 1
        dag = _as_digraph(graph, n_nodes)
        if not nx.is_directed_acyclic_graph(dag):
            raise NotADag(f"Graph has a directed cycle: {nx.find_cycle(dag)}")
        return sum(self.family_score(node, dag.predecessors(node)) for node in range(n_nodes))


def bic_score(graph: GraphLike, data: CausalDataset) -> float:
    """BIC of ``graph`` (a DAG over the dataset's column indices) on ``data``."""
    return BicScorer(data).score(graph)
