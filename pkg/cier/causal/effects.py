"""Average treatment effects and path-accumulated causal strengths."""

from typing import Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np

from ..core.exceptions import GraphCycle, NoOverlap
from ..models.graph import CausalDataset, CausalEffectTable, EffectEntry, Pag
from ..utils.logging import get_logger

logger = get_logger(__name__)

AGGREGATIONS = ("sum", "product")


def ate(data: CausalDataset, treatment: int, outcome: int, adjustment: Sequence[int] = ()) -> float:
    """Backdoor-adjusted average effect of binary ``treatment`` on ``outcome``.

    ``sum_z P(z) * (mean(y | t=1, z) - mean(y | t=0, z))`` over strata of the
    adjustment columns. Strata lacking either arm are skipped and ``P(z)`` is
    renormalized over the usable ones; with no adjustment this is the plain
    difference of means.

    Raises:
        NoOverlap: If an arm is empty overall or in every stratum
    """
    t = data.column(treatment).astype(int)
    y = data.column(outcome)
    if not np.any(t == 1) or not np.any(t == 0):
        raise NoOverlap(treatment)

    adjustment = [c for c in adjustment if c not in (treatment, outcome)]
    if not adjustment:
        return float(np.mean(y[t == 1]) - np.mean(y[t == 0]))

    z = np.column_stack([data.column(c) for c in adjustment])
    _, strata = np.unique(z, axis=0, return_inverse=True)
    strata = np.asarray(strata).ravel()

    weighted = 0.0
    usable = 0
    for stratum in np.unique(strata):
        mask = strata == stratum
        treated = mask & (t == 1)
        control = mask & (t == 0)
        if not np.any(treated) or not np.any(control):
            continue
        size = int(np.count_nonzero(mask))
        weighted += size * (float(np.mean(y[treated])) - float(np.mean(y[control])))
        usable += size
    if usable == 0:
        raise NoOverlap(treatment, "no stratum of the adjustment set contains both arms")
    return weighted / usable


def _aggregate(values: List[float], aggregation: str) -> float:
    if aggregation == "sum":
        return float(sum(values))
    return float(np.prod(values))


class PathStrengthEstimator:
    """Accumulates edge effects along every directed path from a factor to the outcome.

    The strength of edge ``a -> b`` is ``|ate(a, b | other parents of b)|``; a
    path's strength aggregates its edges (``sum`` or ``product``), a factor's
    strength sums its paths.
    """

    def __init__(self, data: CausalDataset, aggregation: str = "sum"):
        if aggregation not in AGGREGATIONS:
            raise ValueError(f"Unknown aggregation {aggregation!r}; expected one of {AGGREGATIONS}")
        self.data = data
        self.aggregation = aggregation
        self._edges: Dict[Tuple[int, int], float] = {}

    def edge_effect(self, dag: nx.DiGraph, a: int, b: int) -> float:
        """Signed adjusted effect of ``a`` on ``b``; 0 without overlap."""
        key = (a, b)
        if key not in self._edges:
            others = sorted(p for p in dag.predecessors(b) if p != a)
            try:
                self._edges[key] = ate(self.data, a, b, others)
            except NoOverlap as e:
                logger.warning("Edge %s -> %s has strength 0: %s",
                               self.data.names[a], self.data.names[b], e.reason)
                self._edges[key] = 0.0
        return self._edges[key]

    def estimate(self, pag: Pag) -> CausalEffectTable:
        dag = pag.to_digraph()
        if not nx.is_directed_acyclic_graph(dag):
            raise GraphCycle([edge[0] for edge in nx.find_cycle(dag)])

        entries = {}
        for factor in pag.factor_nodes:
            paths = [list(p) for p in nx.all_simple_paths(dag, factor, pag.outcome)]
            strength = 0.0
            for path in paths:
                edges = [abs(self.edge_effect(dag, a, b)) for a, b in zip(path, path[1:])]
                strength += _aggregate(edges, self.aggregation)
            direct = self.edge_effect(dag, factor, pag.outcome) if dag.has_edge(factor, pag.outcome) else 0.0
            entries[factor] = EffectEntry(
                factor=factor,
                strength=strength if paths else 0.0,
                relevant=bool(paths) and strength > 0.0,
                direct_effect=direct,
                paths=paths,
            )
        return CausalEffectTable(entries=entries, aggregation=self.aggregation)


def path_strengths(pag: Pag, data: CausalDataset, aggregation: str = "sum") -> CausalEffectTable:
    """Per-factor causal strength toward the outcome of a fully directed ``pag``.

    Raises:
        GraphCycle: If the graph is not acyclic
    """
    return PathStrengthEstimator(data, aggregation).estimate(pag)
