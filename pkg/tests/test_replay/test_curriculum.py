"""Tests for the curriculum coefficient."""

import pytest
from hypothesis import given, settings, strategies as st

from cier.core.config import CurriculumSchedule
from cier.replay.curriculum import mu


@pytest.mark.unit
class TestCurriculum:
    """Test cases for mu."""

    def test_quarter_ellipse_point(self):
        """Test that episode 60 of 100 gives 0.8."""
        assert mu(60, CurriculumSchedule(epsilon_m=100, eta=1.0)) == pytest.approx(0.8)

    def test_endpoints(self):
        schedule = CurriculumSchedule(epsilon_m=50, eta=2.0)
        assert mu(0, schedule) == pytest.approx(2.0)
        assert mu(50, schedule) == pytest.approx(0.0)

    def test_out_of_range_clamped(self):
        schedule = CurriculumSchedule(epsilon_m=10, eta=1.0)
        assert mu(-3, schedule) == pytest.approx(1.0)
        assert mu(25, schedule) == pytest.approx(0.0)

    @pytest.mark.property
    @given(st.floats(0, 1000), st.floats(0, 1000))
    @settings(max_examples=80, deadline=None)
    def test_non_increasing(self, first, second):
        schedule = CurriculumSchedule(epsilon_m=1000, eta=1.5)
        early, late = sorted((first, second))
        assert mu(late, schedule) <= mu(early, schedule) + 1e-12
        assert 0.0 <= mu(late, schedule) <= 1.5
