import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alstm.exceptions import NumericError, ShapeError
from alstm.nn import ParamSet, TwoLayerNet, grad_check, init_glorot, make_rng, sigmoid, two_layer_forward

from oracles import two_layer


def zero_net(n_in, n_hidden, n_out, out_act="identity", b2=None):
    return TwoLayerNet(
        np.zeros((n_hidden, n_in)), np.zeros(n_hidden), np.zeros((n_out, n_hidden)),
        np.zeros(n_out) if b2 is None else np.asarray(b2, dtype=float), out_act=out_act,
    )


class TestTwoLayerForward:
    def test_zero_weights_identity_output(self):
        out = two_layer_forward(zero_net(2, 3, 4), np.array([1.0, 2.0]))
        np.testing.assert_array_equal(out, np.zeros(4))

    def test_zero_weights_sigmoid_bias(self):
        out = two_layer_forward(zero_net(5, 3, 1, "sigmoid", b2=[0.3]), np.arange(5.0))
        assert out[0] == pytest.approx(0.574442516811659, abs=1e-15)

    @pytest.mark.parametrize("out_act", ["identity", "sigmoid", "tanh"])
    def test_matches_straight_line_evaluation(self, out_act):
        rng = make_rng(7)
        W1, b1 = rng.normal(size=(3, 2)), rng.normal(size=3)
        W2, b2 = rng.normal(size=(2, 3)), rng.normal(size=2)
        x = np.array([0.1, -0.2])
        act = {"identity": lambda a: a, "sigmoid": lambda a: 1 / (1 + math.exp(-a)), "tanh": math.tanh}[out_act]
        expected = two_layer(W1.tolist(), b1.tolist(), W2.tolist(), b2.tolist(), x.tolist(), act)
        got = two_layer_forward(TwoLayerNet(W1, b1, W2, b2, out_act=out_act), x)
        np.testing.assert_allclose(got, expected, rtol=0, atol=1e-14)

    def test_batch_equals_rowwise(self):
        rng = make_rng(3)
        net = TwoLayerNet(rng.normal(size=(4, 3)), rng.normal(size=4), rng.normal(size=(2, 4)),
                          rng.normal(size=2), out_act="sigmoid")
        X = rng.normal(size=(6, 3))
        batch = two_layer_forward(net, X)
        for k in range(6):
            np.testing.assert_allclose(batch[k], two_layer_forward(net, X[k]), atol=1e-15)

    def test_dimension_mismatch_names_net(self):
        net = TwoLayerNet(np.zeros((3, 2)), np.zeros(3), np.zeros((1, 3)), np.zeros(1), name="feat_x")
        with pytest.raises(ShapeError, match="feat_x"):
            two_layer_forward(net, np.zeros(4))

    def test_inconsistent_layer_shapes(self):
        with pytest.raises(ShapeError, match="W2"):
            TwoLayerNet(np.zeros((3, 2)), np.zeros(3), np.zeros((1, 4)), np.zeros(1))

    def test_non_finite_output_is_an_error(self):
        net = zero_net(1, 1, 1)
        with pytest.raises(NumericError):
            two_layer_forward(TwoLayerNet(net.W1, net.b1, net.W2, np.array([np.inf])), np.zeros(1))


def test_sigmoid_is_stable_for_large_inputs():
    out = sigmoid(np.array([-1000.0, 0.0, 1000.0]))
    np.testing.assert_array_equal(out, [0.0, 0.5, 1.0])


class TestGlorot:
    def test_single_entry_bound(self):
        w = init_glorot((1, 1), make_rng(0))
        assert abs(w[0, 0]) <= math.sqrt(3.0)

    def test_deterministic(self):
        np.testing.assert_array_equal(init_glorot((4, 6), make_rng(11)), init_glorot((4, 6), make_rng(11)))

    def test_different_seeds_differ(self):
        assert not np.array_equal(init_glorot((4, 6), make_rng(1)), init_glorot((4, 6), make_rng(2)))

    @pytest.mark.parametrize("shape", [(0, 3), (2, 0)])
    def test_zero_sized_shape(self, shape):
        with pytest.raises(ShapeError):
            init_glorot(shape, make_rng(0))

    def test_stream_mean_within_three_sigma(self):
        rng = make_rng(5)
        draws = np.concatenate([init_glorot((4, 6), rng).ravel() for _ in range(100_000 // 24 + 1)])
        draws = draws[:100_000]
        r = math.sqrt(6.0 / 10.0)
        sigma_mean = (r / math.sqrt(3.0)) / math.sqrt(draws.size)
        assert abs(draws.mean()) <= 3 * sigma_mean
        assert draws.min() >= -r and draws.max() <= r


class TestParamSet:
    def test_grad_buffers_mirror_shapes_and_order(self):
        ps = ParamSet([("b", np.zeros(3)), ("a", np.ones((2, 2)))])
        assert list(ps) == ["b", "a"]
        assert all(ps.grads[k].shape == ps[k].shape for k in ps)
        assert ps.n_scalars() == 7

    def test_duplicate_name(self):
        ps = ParamSet([("w", np.zeros(1))])
        with pytest.raises(KeyError):
            ps.add("w", np.zeros(1))

    def test_copy_is_deep(self):
        ps = ParamSet([("w", np.zeros(2))])
        cp = ps.copy()
        cp["w"][0] = 5
        assert ps["w"][0] == 0


class TestGradCheck:
    def test_quadratic_is_exact(self):
        rng = np.random.default_rng(0)
        A = rng.normal(size=(3, 3))
        A = A @ A.T
        ps = ParamSet([("p", rng.normal(size=3))])
        ps.grads["p"][:] = A @ ps["p"]
        err = grad_check(lambda: 0.5 * ps["p"] @ A @ ps["p"], ps, 1e-5)
        assert err <= 1e-8

    def test_sum_of_entries_gradient_is_one(self):
        ps = ParamSet([("a", np.arange(4.0).reshape(2, 2)), ("b", np.array([0.5, -1.0]))])
        for g in ps.grads.values():
            g.fill(1.0)
        assert grad_check(lambda: sum(v.sum() for v in ps.values.values()), ps) <= 1e-9

    def test_half_squared_norm_gradient_is_p(self):
        ps = ParamSet([("p", np.array([0.3, -2.0, 1.5]))])
        ps.grads["p"][:] = ps["p"]
        assert grad_check(lambda: 0.5 * float(ps["p"] @ ps["p"]), ps) <= 1e-9

    def test_empty_param_set(self):
        assert grad_check(lambda: 1.0, ParamSet()) == 0.0

    def test_detects_wrong_gradient(self):
        ps = ParamSet([("p", np.array([1.0]))])
        ps.grads["p"][:] = 0.0
        assert grad_check(lambda: float(ps["p"][0] ** 2), ps) > 0.5

    def test_restores_parameters(self):
        ps = ParamSet([("p", np.array([0.1, 0.2]))])
        before = ps["p"].copy()
        grad_check(lambda: float(np.sum(ps["p"] ** 3)), ps)
        np.testing.assert_array_equal(ps["p"], before)

    def test_non_finite_loss(self):
        ps = ParamSet([("p", np.array([0.0]))])
        with pytest.raises(NumericError):
            grad_check(lambda: float("nan"), ps)

    @pytest.mark.parametrize("eps", [1e-9, 1e-2])
    def test_epsilon_range(self, eps):
        with pytest.raises(ValueError):
            grad_check(lambda: 0.0, ParamSet(), eps)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**63 - 1))
def test_rng_stream_reproducible(seed):
    assert np.array_equal(make_rng(seed).uniform(size=5), make_rng(seed).uniform(size=5))
