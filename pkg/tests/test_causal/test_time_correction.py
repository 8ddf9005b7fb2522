"""Tests for temporal orientation of PAG edges."""

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cier.causal.time_correction import (
    TimeCorrector, median_first_occurrence, precedence, time_correction,
)
from cier.models.factors import OccurrenceMap
from cier.models.graph import EndpointMark, Pag

CIRCLE, ARROW, TAIL = EndpointMark.CIRCLE, EndpointMark.ARROW, EndpointMark.TAIL
MARKS = [CIRCLE, ARROW, TAIL]


def always_before(first, second, episodes=3):
    return OccurrenceMap({
        **{(e, first): [[0, 2]] for e in range(episodes)},
        **{(e, second): [[5, 7]] for e in range(episodes)},
    })


@pytest.mark.unit
class TestPrecedence:
    """Test cases for the occurrence statistics."""

    def test_share_of_episodes(self):
        occ = OccurrenceMap({(0, 0): [[0, 1]], (0, 1): [[4, 5]],
                             (1, 0): [[6, 7]], (1, 1): [[2, 3]],
                             (2, 0): [[1, 1]], (2, 1): [[1, 2]]})
        assert precedence(occ, 0, 1) == pytest.approx(0.5)
        assert precedence(occ, 1, 0) == pytest.approx(0.5)

    def test_never_co_occur(self):
        occ = OccurrenceMap({(0, 0): [[0, 1]], (1, 1): [[4, 5]]})
        assert precedence(occ, 0, 1) is None

    def test_median_first_occurrence(self):
        occ = OccurrenceMap({(0, 0): [[2, 3]], (1, 0): [[10, 11], [4, 5]], (2, 0): [[8, 8]]})
        assert median_first_occurrence(occ, 0) == 4.0
        assert median_first_occurrence(occ, 3) is None


@pytest.mark.unit
class TestTimeCorrection:
    """Test cases for time_correction."""

    def test_circle_edge_follows_time(self):
        """Test that A o-o B with A always first becomes A -> B."""
        pag = Pag(["A", "B", "y"])
        pag.add_edge(0, 1, CIRCLE, CIRCLE)

        dag = time_correction(pag, always_before(0, 1))

        assert dag.is_directed(0, 1)

    def test_later_factor_is_effect(self):
        pag = Pag(["A", "B", "y"])
        pag.add_edge(0, 1, CIRCLE, CIRCLE)
        assert time_correction(pag, always_before(1, 0)).is_directed(1, 0)

    def test_tie_breaks_on_lower_id(self):
        """Test that without temporal evidence 2 o-o 5 becomes 2 -> 5."""
        pag = Pag([f"U{i}" for i in range(6)] + ["y"])
        pag.add_edge(5, 2, CIRCLE, CIRCLE)

        result = TimeCorrector(OccurrenceMap()).correct(pag)

        assert result.pag.is_directed(2, 5)
        assert result.decisions[0].rule == "id"

    def test_semi_directed_into_outcome(self):
        """Test that A o-> y becomes A -> y."""
        pag = Pag(["A", "y"])
        pag.add_edge(0, 1, CIRCLE, ARROW)
        assert time_correction(pag, OccurrenceMap()).is_directed(0, 1)

    def test_outcome_is_always_a_sink(self):
        pag = Pag(["A", "y"])
        pag.add_directed(1, 0)

        dag = time_correction(pag, always_before(0, 1))

        assert dag.is_directed(0, 1)
        assert dag.children(1) == []

    def test_directed_edge_kept_against_time(self):
        pag = Pag(["A", "B", "y"])
        pag.add_directed(1, 0)
        assert time_correction(pag, always_before(0, 1)).is_directed(1, 0)

    def test_semi_directed_edge_kept(self):
        pag = Pag(["A", "B", "y"])
        pag.add_edge(1, 0, CIRCLE, ARROW)
        assert time_correction(pag, always_before(0, 1)).is_directed(1, 0)

    def test_median_fallback(self):
        """Test that factors that never co-occur are ordered by median first occurrence."""
        occ = OccurrenceMap({(0, 0): [[9, 9]], (1, 1): [[2, 3]]})
        pag = Pag(["A", "B", "y"])
        pag.add_edge(0, 1, CIRCLE, CIRCLE)

        result = TimeCorrector(occ).correct(pag)

        assert result.pag.is_directed(1, 0)
        assert result.decisions[0].rule == "median"

    def test_cycle_reversed(self):
        """Test that a temporal proposal closing a cycle is inserted reversed."""
        pag = Pag(["A", "B", "C", "y"])
        pag.add_directed(0, 1)
        pag.add_directed(1, 2)
        pag.add_edge(2, 0, CIRCLE, CIRCLE)

        result = TimeCorrector(always_before(2, 0)).correct(pag)

        assert result.pag.is_directed(0, 2)
        assert len(result.reversals) == 1
        assert nx.is_directed_acyclic_graph(result.pag.to_digraph())

    def test_result_is_fully_directed_dag(self):
        pag = Pag(["A", "B", "C", "y"])
        pag.add_edge(0, 1, ARROW, ARROW)
        pag.add_edge(1, 2, CIRCLE, CIRCLE)
        pag.add_edge(2, 3, CIRCLE, CIRCLE)
        pag.add_edge(0, 3, ARROW, CIRCLE)

        dag = time_correction(pag, always_before(0, 1))

        assert dag.is_fully_directed()
        assert dag.skeleton() == pag.skeleton()
        assert nx.is_directed_acyclic_graph(dag.to_digraph())
        assert dag.children(3) == []


def random_pag(rng):
    """PAG on 2..8 nodes with arbitrary endpoint marks, directed cycles included."""
    n = int(rng.integers(2, 9))
    pag = Pag([f"U{k}" for k in range(n - 1)] + ["y"])
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.6:
                pag.add_edge(a, b, MARKS[rng.integers(3)], MARKS[rng.integers(3)])
    return pag


def random_occurrences(rng, factors):
    spans = {}
    for episode in range(int(rng.integers(0, 5))):
        for factor in range(factors):
            if rng.random() < 0.6:
                start = int(rng.integers(0, 20))
                spans[(episode, factor)] = [[start, start + int(rng.integers(0, 4))]]
    return OccurrenceMap(spans)


@pytest.mark.property
class TestTimeCorrectionProperties:
    """Orientation invariants over randomized graphs."""

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=200, deadline=None)
    def test_always_a_dag_with_outcome_sink(self, seed):
        rng = np.random.default_rng(seed)
        pag = random_pag(rng)
        occ = random_occurrences(rng, len(pag.names) - 1)

        dag = time_correction(pag, occ)

        assert dag.is_fully_directed()
        assert dag.skeleton() == pag.skeleton()
        assert nx.is_directed_acyclic_graph(dag.to_digraph())
        assert dag.children(dag.outcome) == []
