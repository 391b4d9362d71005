"""Tests for the cross-entropy and weighted MSE losses."""

import math

import numpy as np
import pytest

from sdflab.core.exceptions import ShapeMismatchError
from sdflab.core.grid import GridMeta, ScalarVolume
from sdflab.core.net.layers import softmax_channels
from sdflab.core.net.losses import loss_cross_entropy, loss_weighted_mse, sdf_weights
from tests.utils.gradcheck import numeric_gradient, relative_error


class TestCrossEntropy:
    """Test the voxel-mean cross-entropy on softmax output."""

    def test_should_be_zero_for_exact_one_hot(self):
        labels = np.array([1, 0, 1, 1]).reshape(4, 1, 1)
        probs = np.stack([1 - labels, labels]).astype(np.float64)
        loss, _ = loss_cross_entropy(probs, labels)
        assert loss == 0.0

    def test_should_be_log_two_for_uniform_prediction(self):
        labels = np.random.default_rng(0).integers(0, 2, size=(3, 4, 5))
        loss, _ = loss_cross_entropy(np.full((2, 3, 4, 5), 0.5), labels)
        assert loss == pytest.approx(math.log(2.0))

    def test_should_stay_finite_for_confident_mistakes(self):
        labels = np.ones((2, 1, 1), dtype=np.uint8)
        probs = np.stack([np.ones((2, 1, 1)), np.zeros((2, 1, 1))])
        loss, _ = loss_cross_entropy(probs, labels)
        assert math.isfinite(loss)

    def test_should_match_finite_differences_through_softmax(self):
        """The gradient is taken with respect to the logits."""
        rng = np.random.default_rng(1)
        logits = rng.normal(size=(2, 3, 3, 2))
        labels = rng.integers(0, 2, size=(3, 3, 2))

        def loss() -> float:
            return loss_cross_entropy(softmax_channels(logits), labels)[0]

        _, analytic = loss_cross_entropy(softmax_channels(logits), labels)

        assert relative_error(analytic, numeric_gradient(loss, logits)).max() < 1e-5

    def test_should_reject_mismatched_dims(self):
        with pytest.raises(ShapeMismatchError):
            loss_cross_entropy(np.full((2, 2, 2, 2), 0.5), np.zeros((2, 2, 3)))

    def test_should_reject_single_channel_input(self):
        with pytest.raises(ShapeMismatchError):
            loss_cross_entropy(np.full((1, 2, 2, 2), 0.5), np.zeros((2, 2, 2)))


class TestWeightedMse:
    """Test the inverse-distance weighted squared error."""

    def test_should_be_zero_when_prediction_equals_target(self):
        target = np.random.default_rng(2).normal(size=(3, 3, 3))
        loss, grad = loss_weighted_mse(target[None].copy(), target)
        assert loss == 0.0
        assert not grad.any()

    def test_should_weight_contour_voxel_fully(self):
        loss, _ = loss_weighted_mse(np.ones((1, 1, 1, 1)), np.zeros((1, 1, 1)), epsilon=1.0)
        assert loss == 1.0

    def test_should_match_elementwise_sum_oracle(self):
        rng = np.random.default_rng(3)
        pred = rng.normal(size=(1, 4, 4, 4))
        target = rng.normal(scale=3.0, size=(4, 4, 4))

        loss, grad = loss_weighted_mse(pred, target, epsilon=0.5)

        expected_loss = 0.0
        expected_grad = np.zeros_like(pred)
        for index in np.ndindex(4, 4, 4):
            w = 1.0 / (abs(target[index]) + 0.5)
            residual = pred[(0, *index)] - target[index]
            expected_loss += w * residual * residual / 64
            expected_grad[(0, *index)] = 2.0 * w * residual / 64
        assert loss == pytest.approx(expected_loss, rel=1e-12)
        assert np.allclose(grad, expected_grad, rtol=1e-12)

    @pytest.mark.parametrize("normalization", ["mean", "weight-sum"])
    def test_should_match_finite_differences(self, normalization):
        rng = np.random.default_rng(4)
        pred = rng.normal(size=(1, 4, 4, 4))
        target = rng.normal(scale=2.0, size=(4, 4, 4))

        def loss() -> float:
            return loss_weighted_mse(pred, target, 1.0, normalization)[0]

        _, analytic = loss_weighted_mse(pred, target, 1.0, normalization)

        assert relative_error(analytic, numeric_gradient(loss, pred)).max() < 1e-5

    def test_should_divide_by_weight_sum(self):
        pred = np.array([1.0, 1.0]).reshape(1, 2, 1, 1)
        target = np.array([0.0, 1.0]).reshape(2, 1, 1)
        loss, _ = loss_weighted_mse(pred, target, 1.0, "weight-sum")
        # weights 1 and 1/2, residuals 1 and 0
        assert loss == pytest.approx(1.0 / 1.5)

    def test_should_favour_voxels_near_the_contour(self):
        """Equal residuals cost strictly more where |d| is smaller."""
        rng = np.random.default_rng(5)
        distances = np.sort(np.abs(rng.normal(scale=5.0, size=50)))
        for near, far in zip(distances[:-1], distances[1:]):
            if near == far:
                continue
            near_loss, _ = loss_weighted_mse(np.full((1, 1, 1, 1), near + 0.3), np.full((1, 1, 1), near))
            far_loss, _ = loss_weighted_mse(np.full((1, 1, 1, 1), far + 0.3), np.full((1, 1, 1), far))
            assert near_loss > far_loss

    def test_should_accept_scalar_volume_targets(self):
        target = ScalarVolume.full(GridMeta.of((2, 2, 2)), 3.0)
        loss, _ = loss_weighted_mse(np.full((1, 2, 2, 2), 3.0), target)
        assert loss == 0.0

    def test_should_reject_two_channel_prediction(self):
        with pytest.raises(ShapeMismatchError):
            loss_weighted_mse(np.zeros((2, 2, 2, 2)), np.zeros((2, 2, 2)))

    def test_should_reject_non_positive_epsilon(self):
        with pytest.raises(ValueError):
            sdf_weights(np.zeros(3), 0.0)
