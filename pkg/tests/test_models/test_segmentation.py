"""Tests for segmentation models."""

import numpy as np
import pytest

from cier.core.config import TiccConfig
from cier.models.segmentation import ClusterModel, Segmentation, TiccParams, toeplitz_violation


def block_toeplitz(blocks):
    """Symmetric block-Toeplitz matrix from the first block row."""
    w = len(blocks)
    d = blocks[0].shape[0]
    matrix = np.zeros((w * d, w * d))
    for i in range(w):
        for j in range(w):
            block = blocks[j - i] if j >= i else blocks[i - j].T
            matrix[i * d:(i + 1) * d, j * d:(j + 1) * d] = block
    return matrix


@pytest.mark.unit
class TestTiccParams:
    """Test cases for TiccParams."""

    def test_from_config(self):
        """Test that parameters are copied from the config section."""
        params = TiccParams.from_config(TiccConfig(window=4, beta=10.0), K=3)

        assert params.K == 3
        assert params.w == 4
        assert params.beta == 10.0
        assert params.lambda_ == 0.11

    @pytest.mark.parametrize("kwargs", [
        {"K": 0}, {"K": 2, "w": 0}, {"K": 2, "beta": -1.0}, {"K": 2, "tol": 0.0},
    ])
    def test_invalid_values(self, kwargs):
        """Test that out-of-range parameters are rejected."""
        with pytest.raises(ValueError):
            TiccParams(**kwargs)


@pytest.mark.unit
class TestClusterModel:
    """Test cases for ClusterModel invariants."""

    def test_well_formed_model(self):
        """Test that an identity precision satisfies every invariant."""
        model = ClusterModel(np.eye(4), np.zeros(4), block=2)

        assert model.dim == 4
        assert model.invariant_violations() == []

    def test_block_toeplitz_detected(self):
        """Test that a block-Toeplitz matrix passes and a perturbed one fails."""
        b0 = np.array([[2.0, 0.3], [0.3, 2.0]])
        b1 = np.array([[0.4, 0.1], [0.0, 0.2]])
        matrix = block_toeplitz([b0, b1, np.zeros((2, 2))])

        assert toeplitz_violation(matrix, 2) < 1e-12
        broken = matrix.copy()
        broken[2:4, 2:4] += 0.5
        assert toeplitz_violation(broken, 2) == pytest.approx(0.5)
        assert not ClusterModel(broken, np.zeros(6), block=2).is_block_toeplitz()

    def test_indefinite_precision_reported(self):
        """Test that a non positive definite precision is flagged."""
        model = ClusterModel(np.diag([1.0, -1.0]), np.zeros(2))
        assert "positive_definite" in model.invariant_violations()

    def test_asymmetric_precision_reported(self):
        """Test that an asymmetric precision is flagged."""
        model = ClusterModel(np.array([[1.0, 0.2], [0.0, 1.0]]), np.zeros(2))
        assert "symmetry" in model.invariant_violations()

    def test_dict_round_trip(self):
        """Test dictionary conversion preserves the matrix."""
        model = ClusterModel(np.array([[2.0, 0.1], [0.1, 3.0]]), [0.5, -0.5], count=4, block=1)
        restored = ClusterModel.from_dict(model.to_dict())

        np.testing.assert_array_equal(restored.precision, model.precision)
        np.testing.assert_array_equal(restored.mean, model.mean)
        assert restored.count == 4


@pytest.mark.unit
class TestSegmentation:
    """Test cases for Segmentation."""

    def test_switch_count(self):
        """Test counting label switches."""
        seg = Segmentation(0, [0, 0, 1, 1, 0, 2])
        assert seg.switch_count == 3

    def test_constant_labels_have_no_switches(self):
        assert Segmentation(0, [1, 1, 1]).switch_count == 0
