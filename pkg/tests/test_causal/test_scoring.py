"""Tests for the BIC score."""

import networkx as nx
import pytest

from cier.causal.scoring import BicScorer, bic_score
from cier.core.exceptions import NotADag


@pytest.mark.unit
class TestBicScore:
    """Test cases for BIC scoring."""

    def test_true_chain_beats_empty_graph(self, chain_data):
        truth = {1: [0], 2: [1]}
        assert bic_score(truth, chain_data) > bic_score({}, chain_data)

    def test_superfluous_edge_penalized(self, chain_data):
        """Test that adding A -> y on top of the chain lowers the score."""
        chain = nx.DiGraph([(0, 1), (1, 2)])
        extended = nx.DiGraph([(0, 1), (1, 2), (0, 2)])
        assert bic_score(chain, chain_data) > bic_score(extended, chain_data)

    def test_decomposes_into_families(self, chain_data):
        scorer = BicScorer(chain_data)
        total = scorer.score({1: [0], 2: [1]})
        parts = scorer.family_score(0, []) + scorer.family_score(1, [0]) + scorer.family_score(2, [1])
        assert total == pytest.approx(parts)

    def test_markov_equivalent_binary_edges(self, fork_data):
        """Test that reversing a binary-binary edge leaves the score unchanged."""
        forward = bic_score({1: [0]}, fork_data)
        backward = bic_score({0: [1]}, fork_data)
        assert forward == pytest.approx(backward)

    def test_cycle_rejected(self, chain_data):
        with pytest.raises(NotADag):
            bic_score(nx.DiGraph([(0, 1), (1, 0)]), chain_data)
