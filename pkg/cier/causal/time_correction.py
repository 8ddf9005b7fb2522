"""Temporal orientation of ambiguous PAG edges.

Every edge incident to the outcome points into it. ``a -> b`` and ``a o-> b`` keep
their direction. Bidirected, circle-circle and any other partially oriented edges
are oriented by temporal precedence: the factor that more often occurs first
(over episodes containing both) is the cause. Pairs that never co-occur fall back
to the median first occurrence of each factor, then to the lower factor id.

Edges are inserted strongest-evidence first; an edge that would close a cycle is
inserted reversed, so the result is always a DAG with the outcome as a sink.
"""

from dataclasses import dataclass, field
from statistics import median
from typing import List, Optional, Tuple

import networkx as nx

from ..models.factors import OccurrenceMap
from ..models.graph import EndpointMark, Pag
from ..utils.logging import LoggerMixin

OUTCOME_SUPPORT = 3.0
DIRECTED_SUPPORT = 2.0
SEMI_DIRECTED_SUPPORT = 1.5
MEDIAN_SUPPORT = 0.25


@dataclass
class OrientationDecision:
    """How one edge was oriented."""

    cause: int
    effect: int
    support: float
    rule: str
    reversed: bool = False

    def to_dict(self) -> dict:
        return {"cause": self.cause, "effect": self.effect, "support": self.support,
                "rule": self.rule, "reversed": self.reversed}


@dataclass
class CorrectionResult:
    pag: Pag
    decisions: List[OrientationDecision] = field(default_factory=list)

    @property
    def reversals(self) -> List[OrientationDecision]:
        return [d for d in self.decisions if d.reversed]


def precedence(occurrences: OccurrenceMap, a: int, b: int) -> Optional[float]:
    """Share of co-occurrence episodes where ``a`` first occurs before ``b``.

    Equal first occurrences count one half. None when the pair never co-occurs.
    """
    wins = 0.0
    both = 0
    for episode in occurrences.episodes():
        fa = occurrences.first_occurrence(episode, a)
        fb = occurrences.first_occurrence(episode, b)
        if fa is None or fb is None:
            continue
        both += 1
        if fa < fb:
            wins += 1.0
        elif fa == fb:
            wins += 0.5
    return wins / both if both else None


def median_first_occurrence(occurrences: OccurrenceMap, factor: int) -> Optional[float]:
    firsts = [occurrences.first_occurrence(e, factor) for e in occurrences.episodes()]
    firsts = [f for f in firsts if f is not None]
    return float(median(firsts)) if firsts else None


class TimeCorrector(LoggerMixin):
    """Turns a PAG into a DAG using temporal precedence of factor occurrences."""

    def __init__(self, occurrences: OccurrenceMap):
        self.occurrences = occurrences

    def _by_time(self, a: int, b: int) -> Tuple[int, int, float, str]:
        q = precedence(self.occurrences, a, b)
        if q is not None and q != 0.5:
            return (a, b, abs(q - 0.5), "precedence") if q > 0.5 else (b, a, abs(q - 0.5), "precedence")
        if q is None:
            ma = median_first_occurrence(self.occurrences, a)
            mb = median_first_occurrence(self.occurrences, b)
            if ma is not None and mb is not None and ma != mb:
                return (a, b, MEDIAN_SUPPORT, "median") if ma < mb else (b, a, MEDIAN_SUPPORT, "median")
        low, high = min(a, b), max(a, b)
        return low, high, 0.0, "id"

    def _propose(self, pag: Pag, a: int, mark_a: EndpointMark, b: int,
                 mark_b: EndpointMark) -> Tuple[int, int, float, str]:
        if b == pag.outcome:
            return a, b, OUTCOME_SUPPORT, "outcome"
        if a == pag.outcome:
            return b, a, OUTCOME_SUPPORT, "outcome"
        if mark_a is EndpointMark.TAIL and mark_b is EndpointMark.ARROW:
            return a, b, DIRECTED_SUPPORT, "directed"
        if mark_b is EndpointMark.TAIL and mark_a is EndpointMark.ARROW:
            return b, a, DIRECTED_SUPPORT, "directed"
        if mark_a is EndpointMark.CIRCLE and mark_b is EndpointMark.ARROW:
            return a, b, SEMI_DIRECTED_SUPPORT, "semi-directed"
        if mark_b is EndpointMark.CIRCLE and mark_a is EndpointMark.ARROW:
            return b, a, SEMI_DIRECTED_SUPPORT, "semi-directed"
        return self._by_time(a, b)

    def correct(self, pag: Pag) -> CorrectionResult:
        proposals = [self._propose(pag, a, ma, b, mb) for a, ma, b, mb in pag.edges()]
        proposals.sort(key=lambda p: (-p[2], min(p[0], p[1]), max(p[0], p[1])))

        dag = nx.DiGraph()
        dag.add_nodes_from(pag.nodes)
        decisions = []
        for cause, effect, support, rule in proposals:
            flipped = nx.has_path(dag, effect, cause)
            if flipped:
                self.logger.warning("Reversed %s -> %s (%s rule) to avoid a cycle",
                                    pag.names[cause], pag.names[effect], rule)
                cause, effect = effect, cause
            dag.add_edge(cause, effect)
            decisions.append(OrientationDecision(cause, effect, support, rule, flipped))

        return CorrectionResult(pag=Pag.from_digraph(dag, pag.names, pag.outcome), decisions=decisions)


def time_correction(pag: Pag, occurrences: OccurrenceMap) -> Pag:
    """Orient every edge of ``pag``; the result is a DAG whose outcome is a sink."""
    return TimeCorrector(occurrences).correct(pag).pag
