"""Tests for the numpy networks and optimizer."""

import numpy as np
import pytest

from cier.core.exceptions import ShapeError
from cier.rl.networks import Adam, Mlp, mlp_backward, soft_update


def numerical_gradient(net, x, upstream, param, index, eps=1e-6):
    original = param[index]
    param[index] = original + eps
    plus = np.sum(upstream * net(x))
    param[index] = original - eps
    minus = np.sum(upstream * net(x))
    param[index] = original
    return (plus - minus) / (2 * eps)


@pytest.mark.unit
class TestMlp:
    """Test cases for Mlp and mlp_backward."""

    def test_linear_unit_gradient(self):
        """Test that y = w x + b at x = 2 gives dW = 2 and db = 1."""
        net = Mlp([1, 1])
        net.weights[0][...] = 3.0
        net.biases[0][...] = 0.5

        assert net(np.array([2.0]))[0] == pytest.approx(6.5)
        grads, dx = mlp_backward(net, np.array([[2.0]]), np.array([[1.0]]))

        assert grads[0][0, 0] == pytest.approx(2.0)
        assert grads[1][0] == pytest.approx(1.0)
        assert dx[0, 0] == pytest.approx(3.0)

    @pytest.mark.parametrize("activation", ["linear", "tanh"])
    def test_matches_finite_differences(self, activation):
        rng = np.random.default_rng(0)
        net = Mlp([3, 5, 4, 2], activation, scale=np.array([2.0, 0.5]), rng=rng)
        for weight in net.weights:
            weight *= 10.0
        x = rng.normal(size=(6, 3))
        upstream = rng.normal(size=(6, 2))

        grads, dx = mlp_backward(net, x, upstream)

        for param, grad in zip(net.params, grads):
            for index in list(np.ndindex(param.shape))[:6]:
                assert grad[index] == pytest.approx(numerical_gradient(net, x, upstream, param, index), abs=1e-4)
        shifted = x.copy()
        shifted[0, 1] += 1e-6
        expected = (np.sum(upstream * net(shifted)) - np.sum(upstream * net(x))) / 1e-6
        assert dx[0, 1] == pytest.approx(expected, abs=1e-3)

    @pytest.mark.parametrize("config_seed", range(10))
    def test_random_configurations_match_finite_differences(self, config_seed):
        """Test analytic gradients of actor and critic layouts against central differences."""
        rng = np.random.default_rng(100 + config_seed)
        actor = config_seed % 2 == 0
        sizes = [int(rng.integers(1, 7))] + [int(w) for w in rng.integers(2, 9, size=rng.integers(1, 3))]
        sizes.append(int(rng.integers(1, 4)))
        if actor:
            net = Mlp(sizes, "tanh", scale=rng.uniform(0.5, 2.0, sizes[-1]),
                      center=rng.uniform(-1.0, 1.0, sizes[-1]), rng=rng)
        else:
            net = Mlp(sizes, rng=rng)
        x = rng.normal(size=(5, sizes[0]))
        upstream = rng.normal(size=(5, sizes[-1]))

        grads, dx = mlp_backward(net, x, upstream)

        worst = 0.0
        for param, grad in zip(net.params, grads):
            for index in np.ndindex(param.shape):
                numeric = numerical_gradient(net, x, upstream, param, index)
                worst = max(worst, abs(grad[index] - numeric) / max(abs(grad[index]), abs(numeric), 1e-3))
        for index in np.ndindex(x.shape):
            numeric = numerical_gradient(net, x, upstream, x, index)
            worst = max(worst, abs(dx[index] - numeric) / max(abs(dx[index]), abs(numeric), 1e-3))
        assert worst < 1e-4

    def test_tanh_head_stays_in_box(self):
        net = Mlp([2, 8, 2], "tanh", scale=np.array([1.0, 2.0]), center=np.array([0.0, 1.0]),
                  rng=np.random.default_rng(1))
        for weight in net.weights:
            weight *= 100.0
        out = net(np.random.default_rng(2).normal(size=(50, 2)) * 10)

        assert np.all(np.abs(out[:, 0]) <= 1.0)
        assert np.all((out[:, 1] >= -1.0) & (out[:, 1] <= 3.0))

    def test_unbatched_input(self):
        net = Mlp([3, 4, 2], rng=np.random.default_rng(0))
        x = np.array([0.1, -0.2, 0.3])
        np.testing.assert_allclose(net(x), net(x[None, :])[0])
        grads, dx = mlp_backward(net, x, np.ones(2))
        assert dx.shape == (3,)

    def test_shape_errors(self):
        net = Mlp([3, 4, 2])
        with pytest.raises(ShapeError):
            net(np.zeros((2, 4)))
        with pytest.raises(ShapeError):
            mlp_backward(net, np.zeros((2, 3)), np.zeros((2, 3)))

    def test_invalid_layout(self):
        with pytest.raises(ValueError):
            Mlp([3])
        with pytest.raises(ValueError):
            Mlp([3, 2], output_activation="relu")

    def test_copy_is_independent(self):
        net = Mlp([2, 3, 1])
        clone = net.copy()
        clone.weights[0] += 1.0
        assert not np.allclose(clone.weights[0], net.weights[0])


@pytest.mark.unit
class TestOptimization:
    """Test cases for Adam and soft_update."""

    def test_adam_first_step_has_learning_rate_size(self):
        param = np.array([1.0])
        optimizer = Adam([param], lr=0.1)
        optimizer.step([np.array([2.0])])
        assert param[0] == pytest.approx(0.9)

    def test_adam_minimizes_quadratic(self):
        param = np.array([5.0, -3.0])
        optimizer = Adam([param], lr=0.01)
        for _ in range(3000):
            optimizer.step([2.0 * param])
        np.testing.assert_allclose(param, 0.0, atol=0.05)

    def test_adam_gradient_count(self):
        with pytest.raises(ShapeError):
            Adam([np.zeros(2)]).step([np.zeros(2), np.zeros(2)])

    def test_soft_update(self):
        source = Mlp([2, 3, 1], rng=np.random.default_rng(0))
        target = Mlp([2, 3, 1], rng=np.random.default_rng(1))
        before = [p.copy() for p in target.params]

        soft_update(target, source, 0.25)

        for t, s, b in zip(target.params, source.params, before):
            np.testing.assert_allclose(t, 0.25 * s + 0.75 * b)
        soft_update(target, source, 1.0)
        for t, s in zip(target.params, source.params):
            np.testing.assert_allclose(t, s)
