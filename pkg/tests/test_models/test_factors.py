"""Tests for factor dictionaries, encodings and occurrence maps."""

import numpy as np
import pytest

from cier.models.factors import TSCF, EpisodeEncoding, OccurrenceMap, TscfDictionary, segment_key
from cier.models.transition import Subsequence


def seg(episode, start, end):
    return Subsequence(episode, start, end, np.zeros(end - start + 1))


@pytest.mark.unit
class TestTscfDictionary:
    """Test cases for TscfDictionary."""

    def test_factor_lookup(self):
        """Test that each member segment maps back to its factor."""
        a, b, c = seg(0, 0, 2), seg(0, 3, 5), seg(1, 0, 4)
        dictionary = TscfDictionary([TSCF(0, a, [a, c]), TSCF(1, b, [b])], cost_trace=[3.0, 2.0])

        assert dictionary.k_prime == 2
        assert dictionary.total_cost == 2.0
        assert dictionary.factor_of(c) == 0
        assert dictionary.factor_of(b) == 1
        assert dictionary.factor_of(seg(5, 0, 1)) is None
        assert segment_key(c) == (1, 0, 4)

    def test_duplicate_member_rejected(self):
        """Test that a segment cannot belong to two factors."""
        a = seg(0, 0, 2)
        with pytest.raises(ValueError, match="belongs to factors"):
            TscfDictionary([TSCF(0, a, [a]), TSCF(1, a, [a])])

    def test_mean_length(self):
        factor = TSCF(0, seg(0, 0, 1), [seg(0, 0, 1), seg(1, 0, 3)])
        assert factor.mean_length == 3.0
        assert factor.member_count == 2


@pytest.mark.unit
class TestEpisodeEncoding:
    """Test cases for EpisodeEncoding."""

    def test_binary_required(self):
        """Test that a non-binary presence vector is rejected."""
        with pytest.raises(ValueError, match="binary"):
            EpisodeEncoding(0, [0, 2, 1], 1.0)

    def test_dict_round_trip(self):
        encoding = EpisodeEncoding(4, [1, 0, 1, 0], 2.5)
        restored = EpisodeEncoding.from_dict(encoding.to_dict())

        np.testing.assert_array_equal(restored.U, [1, 0, 1, 0])
        assert restored.outcome == 2.5


@pytest.mark.unit
class TestOccurrenceMap:
    """Test cases for OccurrenceMap."""

    def test_first_occurrence(self):
        """Test the earliest start across several intervals."""
        occ = OccurrenceMap()
        occ.add(0, 1, 10, 14)
        occ.add(0, 1, 3, 5)

        assert occ.first_occurrence(0, 1) == 3
        assert occ.first_occurrence(0, 2) is None
        assert (0, 1) in occ
        assert (0, 2) not in occ
        assert occ.episodes() == [0]
        assert occ.factors() == [1]

    def test_invalid_interval(self):
        with pytest.raises(ValueError, match="Invalid occurrence interval"):
            OccurrenceMap().add(0, 0, 5, 2)

    def test_json_form(self):
        """Test the documented JSON layout and its round trip."""
        occ = OccurrenceMap({(1, 0): [[2, 4]], (0, 3): [[0, 1], [6, 9]]})
        data = occ.to_dict()

        assert data["occurrences"][0] == {"episode": 0, "factor": 3, "intervals": [[0, 1], [6, 9]]}
        assert OccurrenceMap.from_dict(data) == occ

    def test_equality_ignores_interval_order(self):
        first = OccurrenceMap({(0, 0): [[5, 6], [1, 2]]})
        second = OccurrenceMap({(0, 0): [[1, 2], [5, 6]]})
        assert first == second
