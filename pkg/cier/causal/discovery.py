"""Two-phase PAG discovery: BIC hill-climbing seeds an FCI-style refinement.

Phase 1 climbs from the empty DAG (plus seeded random restarts) over single-edge
additions, deletions and reversals. Phase 2 prunes the resulting skeleton with
conditional independence tests on subsets of the current adjacencies, orients
unshielded colliders and applies the FCI orientation rules R1-R3. Endpoints that
stay undetermined are circles.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx
import numpy as np

from ..models.graph import CausalDataset, EndpointMark, Pag
from ..utils.logging import LoggerMixin
from .ci_tests import CITester
from .scoring import BicScorer

ARROW, TAIL, CIRCLE = EndpointMark.ARROW, EndpointMark.TAIL, EndpointMark.CIRCLE
MIN_IMPROVEMENT = 1e-9


@dataclass
class DiscoveryResult:
    """PAG plus the intermediate artifacts of a discovery run."""

    pag: Pag
    phase1_dag: nx.DiGraph
    phase1_score: float
    score_trace: List[float] = field(default_factory=list)
    sepsets: Dict[FrozenSet[int], Set[int]] = field(default_factory=dict)
    dropped: List[int] = field(default_factory=list)
    ci_tests: int = 0


class GfciLite(LoggerMixin):
    """PAG discovery over a :class:`CausalDataset`.

    Args:
        alpha: Significance level of the independence tests
        seed: Seed for the random restarts
        max_sepset_size: Largest conditioning set tried during pruning
        restarts: Random restarts of the hill-climb in addition to the empty start
        min_samples_per_node: Rows per node below which a warning is logged
    """

    def __init__(self, alpha: float = 0.01, seed: int = 0, max_sepset_size: int = 3,
                 restarts: int = 3, min_samples_per_node: int = 10):
        self.alpha = alpha
        self.seed = seed
        self.max_sepset_size = max_sepset_size
        self.restarts = restarts
        self.min_samples_per_node = min_samples_per_node

    # -- phase 1 ------------------------------------------------------------

    def _allowed(self, a: int, b: int, outcome: int) -> bool:
        return a != outcome

    def _hill_climb(self, scorer: BicScorer, nodes: List[int], outcome: int,
                    start: nx.DiGraph) -> Tuple[nx.DiGraph, List[float]]:
        dag = start.copy()
        parents = {n: set(dag.predecessors(n)) for n in nodes}
        family = {n: scorer.family_score(n, parents[n]) for n in nodes}
        trace = [sum(family.values())]

        while True:
            best_delta, best_move = MIN_IMPROVEMENT, None
            for a in nodes:
                for b in nodes:
                    if a == b:
                        continue
                    if dag.has_edge(a, b):
                        delete = scorer.family_score(b, parents[b] - {a}) - family[b]
                        if delete > best_delta:
                            best_delta, best_move = delete, ("delete", a, b)
                        if self._allowed(b, a, outcome):
                            dag.remove_edge(a, b)
                            reachable = nx.has_path(dag, a, b)
                            dag.add_edge(a, b)
                            if not reachable:
                                reverse = (scorer.family_score(b, parents[b] - {a}) - family[b]
                                           + scorer.family_score(a, parents[a] | {b}) - family[a])
                                if reverse > best_delta:
                                    best_delta, best_move = reverse, ("reverse", a, b)
                    elif not dag.has_edge(b, a) and self._allowed(a, b, outcome):
                        if nx.has_path(dag, b, a):
                            continue
                        add = scorer.family_score(b, parents[b] | {a}) - family[b]
                        if add > best_delta:
                            best_delta, best_move = add, ("add", a, b)

            if best_move is None:
                return dag, trace

            kind, a, b = best_move
            if kind == "add":
                dag.add_edge(a, b)
                parents[b].add(a)
            elif kind == "delete":
                dag.remove_edge(a, b)
                parents[b].discard(a)
            else:
                dag.remove_edge(a, b)
                parents[b].discard(a)
                dag.add_edge(b, a)
                parents[a].add(b)
            for n in (a, b):
                family[n] = scorer.family_score(n, parents[n])
            trace.append(sum(family.values()))

    def _random_start(self, rng: np.random.Generator, nodes: List[int], outcome: int) -> nx.DiGraph:
        order = list(rng.permutation([n for n in nodes if n != outcome])) + (
            [outcome] if outcome in nodes else [])
        dag = nx.DiGraph()
        dag.add_nodes_from(nodes)
        for i, j in combinations(range(len(order)), 2):
            if rng.random() < 0.25:
                dag.add_edge(int(order[i]), int(order[j]))
        return dag

    def phase_one(self, data: CausalDataset, nodes: List[int]) -> Tuple[nx.DiGraph, float, List[float]]:
        """Best local optimum over the empty start and the random restarts."""
        scorer = BicScorer(data)
        outcome = data.outcome_index
        rng = np.random.default_rng(self.seed)
        empty = nx.DiGraph()
        empty.add_nodes_from(nodes)

        best_dag, best_trace = self._hill_climb(scorer, nodes, outcome, empty)
        for restart in range(self.restarts):
            dag, trace = self._hill_climb(scorer, nodes, outcome, self._random_start(rng, nodes, outcome))
            if trace[-1] > best_trace[-1] + MIN_IMPROVEMENT:
                self.logger.debug("Restart %d improved BIC to %.4f", restart, trace[-1])
                best_dag, best_trace = dag, trace
        return best_dag, best_trace[-1], best_trace

    # -- phase 2 ------------------------------------------------------------

    def _prune(self, pag: Pag, tester: CITester) -> Dict[FrozenSet[int], Set[int]]:
        sepsets: Dict[FrozenSet[int], Set[int]] = {}
        for depth in range(self.max_sepset_size + 1):
            testable = False
            for a, _, b, _ in pag.edges():
                if not pag.has_edge(a, b):
                    continue
                candidates = set()
                for x, y in ((a, b), (b, a)):
                    neighbours = sorted(pag.adjacent(x) - {y})
                    if len(neighbours) >= depth:
                        testable = True
                        candidates.update(frozenset(s) for s in combinations(neighbours, depth))
                for subset in sorted(candidates, key=sorted):
                    if tester(a, b, subset).independent(self.alpha):
                        pag.remove_edge(a, b)
                        sepsets[frozenset((a, b))] = set(subset)
                        break
            if not testable:
                break
        return sepsets

    def _orient_colliders(self, pag: Pag, sepsets: Dict[FrozenSet[int], Set[int]],
                          phase1: nx.DiGraph) -> None:
        for c in pag.nodes:
            for a, b in combinations(sorted(pag.adjacent(c)), 2):
                if pag.has_edge(a, b):
                    continue
                pair = frozenset((a, b))
                if pair in sepsets:
                    collider = c not in sepsets[pair]
                else:
                    collider = phase1.has_edge(a, c) and phase1.has_edge(b, c)
                if collider:
                    pag.set_mark(a, c, ARROW)
                    pag.set_mark(b, c, ARROW)

    @staticmethod
    def _orient(pag: Pag, a: int, b: int, mark: EndpointMark) -> bool:
        """Set the mark at ``b`` on ``a *-* b`` if it is still a circle."""
        if pag.mark(a, b) is CIRCLE:
            pag.set_mark(a, b, mark)
            return True
        return False

    def _rule1(self, pag: Pag) -> bool:
        # alpha *-> beta o-* gamma, alpha and gamma not adjacent => beta -> gamma
        changed = False
        for alpha in pag.nodes:
            for beta in sorted(pag.adjacent(alpha)):
                if pag.mark(alpha, beta) is not ARROW:
                    continue
                for gamma in sorted(pag.adjacent(beta) - {alpha}):
                    if pag.has_edge(alpha, gamma) or pag.mark(gamma, beta) is not CIRCLE:
                        continue
                    changed |= self._orient(pag, gamma, beta, TAIL)
                    changed |= self._orient(pag, beta, gamma, ARROW)
        return changed

    def _rule2(self, pag: Pag) -> bool:
        # alpha -> beta *-> gamma or alpha *-> beta -> gamma, alpha *-o gamma => alpha *-> gamma
        changed = False
        for alpha in pag.nodes:
            for beta in sorted(pag.adjacent(alpha)):
                if pag.mark(alpha, beta) is not ARROW:
                    continue
                for gamma in sorted(pag.adjacent(beta) - {alpha}):
                    if pag.mark(beta, gamma) is not ARROW or not pag.has_edge(alpha, gamma):
                        continue
                    if pag.mark(alpha, gamma) is not CIRCLE:
                        continue
                    if pag.mark(beta, alpha) is TAIL or pag.mark(gamma, beta) is TAIL:
                        changed |= self._orient(pag, alpha, gamma, ARROW)
        return changed

    def _rule3(self, pag: Pag) -> bool:
        # alpha *-> beta <-* gamma, alpha *-o theta o-* gamma, alpha/gamma not adjacent,
        # theta *-o beta => theta *-> beta
        changed = False
        for alpha, gamma in combinations(pag.nodes, 2):
            if pag.has_edge(alpha, gamma):
                continue
            shared = pag.adjacent(alpha) & pag.adjacent(gamma)
            for beta in sorted(shared):
                if pag.mark(alpha, beta) is not ARROW or pag.mark(gamma, beta) is not ARROW:
                    continue
                for theta in sorted(shared - {beta}):
                    if not pag.has_edge(theta, beta):
                        continue
                    if pag.mark(alpha, theta) is CIRCLE and pag.mark(gamma, theta) is CIRCLE \
                            and pag.mark(theta, beta) is CIRCLE:
                        changed |= self._orient(pag, theta, beta, ARROW)
        return changed

    def phase_two(self, data: CausalDataset, phase1: nx.DiGraph,
                  tester: Optional[CITester] = None) -> Tuple[Pag, Dict[FrozenSet[int], Set[int]]]:
        tester = tester or CITester(data)
        pag = Pag(data.names, data.outcome_index)
        for a, b in phase1.edges():
            pag.add_edge(a, b, CIRCLE, CIRCLE)

        sepsets = self._prune(pag, tester)
        self._orient_colliders(pag, sepsets, phase1)
        while self._rule1(pag) | self._rule2(pag) | self._rule3(pag):
            pass
        return pag, sepsets

    # -- entry point --------------------------------------------------------

    def fit(self, data: CausalDataset) -> DiscoveryResult:
        n_nodes = data.n_factors + 1
        recommended = self.min_samples_per_node * n_nodes
        if data.n_rows < recommended:
            self.logger.warning("Only %d episodes for %d nodes (recommended >= %d)",
                                data.n_rows, n_nodes, recommended)

        dropped = [i for i in range(n_nodes) if np.ptp(data.column(i)) == 0]
        for column in dropped:
            self.logger.warning("Dropping constant column %s", data.names[column])
        nodes = [i for i in range(n_nodes) if i not in dropped]

        phase1, score, trace = self.phase_one(data, nodes)
        tester = CITester(data)
        pag, sepsets = self.phase_two(data, phase1, tester)
        self.logger.info("Discovered PAG with %d edges over %d nodes (BIC %.3f, %d CI tests)",
                         pag.edge_count(), n_nodes, score, tester.calls)
        return DiscoveryResult(
            pag=pag,
            phase1_dag=phase1,
            phase1_score=score,
            score_trace=trace,
            sepsets=sepsets,
            dropped=dropped,
            ci_tests=tester.calls,
        )


def gfci_lite(data: CausalDataset, alpha: float = 0.01, seed: int = 0, **kwargs) -> Pag:
    """Discover a PAG over ``data``; see :class:`GfciLite`."""
    return GfciLite(alpha=alpha, seed=seed, **kwargs).fit(data).pag
