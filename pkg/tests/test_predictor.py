import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from channelaging.models.channel.channel_model import (
    AgingParams,
    age_channel,
    aged_csi,
    estimate_variance,
    generate_channel,
    observe_and_estimate,
)
from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.kernel.rng import Rng
from channelaging.models.predictor.wiener import (
    correlation_matrix,
    correlation_vector,
    dense_theta,
    predict_channel,
    prediction_mse,
    predictor_bank,
    simulate_observation_history,
    thetas,
    wiener_coefficients,
)

ALPHA = 0.9037129


def analytic_mse(weights, alpha, beta, p_p):
    """E|g[n+1] - sum_j w_j y[n-j]|^2 per entry for real weights."""
    order = len(weights) - 1
    A = beta * correlation_matrix(order, alpha) + np.eye(order + 1) / p_p
    return beta - 2.0 * alpha * beta * weights @ correlation_vector(order, alpha) + weights @ A @ weights


def test_order_zero_unit_example():
    state = wiener_coefficients(0, 0.7, 1.0, 1.0)
    np.testing.assert_allclose(state.weights, [0.35])
    assert state.theta == pytest.approx(0.5)
    assert state.mse_per_entry == pytest.approx(1.0 - 0.49 * 0.5)


@seed(4)
@given(
    alpha=st.floats(min_value=-1.0, max_value=1.0),
    beta=st.floats(min_value=1e-3, max_value=10.0),
    p_p=st.floats(min_value=1e-2, max_value=1e3),
)
def test_order_zero_theta_is_estimate_variance(alpha, beta, p_p):
    state = wiener_coefficients(0, alpha, beta, p_p)
    assert state.theta == pytest.approx(estimate_variance(beta, p_p), rel=1e-12)
    assert 0.0 < state.theta <= beta
    assert state.mse_per_entry >= 0.0


def test_reduced_theta_matches_dense_construction():
    state = wiener_coefficients(2, 0.9, 1.0, 10.0)
    dense = dense_theta(2, 0.9, 1.0, 10.0, M=2)
    np.testing.assert_allclose(np.diag(dense), [state.theta] * 2, rtol=1e-10)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_dense_theta_is_scaled_identity(order):
    state = wiener_coefficients(order, ALPHA, 0.7, 5.0)
    dense = dense_theta(order, ALPHA, 0.7, 5.0, M=3)
    off_diagonal = dense - np.diag(np.diag(dense))
    assert np.max(np.abs(off_diagonal)) <= 1e-12
    np.testing.assert_allclose(np.diag(dense), [state.theta] * 3, rtol=1e-10)


@seed(5)
@settings(max_examples=50, deadline=None)
@given(
    alpha=st.floats(min_value=0.0, max_value=1.0),
    beta=st.floats(min_value=1e-2, max_value=10.0),
    p_p=st.floats(min_value=1e-2, max_value=1e3),
)
def test_theta_grows_with_order(alpha, beta, p_p):
    values = [wiener_coefficients(p, alpha, beta, p_p).theta for p in range(6)]
    assert all(b >= a * (1.0 - 1e-12) for a, b in zip(values, values[1:]))
    assert values[-1] <= beta * (1.0 + 1e-12)


def test_weights_are_locally_optimal():
    state = wiener_coefficients(3, 0.9, 0.8, 4.0)
    best = analytic_mse(state.weights, 0.9, 0.8, 4.0)
    assert best == pytest.approx(state.mse_per_entry, rel=1e-10)
    for j in range(4):
        for step in (1e-3, -1e-3):
            perturbed = state.weights.copy()
            perturbed[j] += step
            assert analytic_mse(perturbed, 0.9, 0.8, 4.0) >= best


def test_prediction_mse():
    assert prediction_mse(wiener_coefficients(2, 0.0, 0.6, 3.0), 64) == pytest.approx(64 * 0.6)
    assert prediction_mse(wiener_coefficients(0, 1.0, 1.0, 1.0), 10) == pytest.approx(5.0)


def test_large_antenna_asymptote():
    tau, E_u, M, beta = 10, 10**1.5, 1e12, 0.8
    p_p = tau * E_u / math.sqrt(M)
    for order in range(4):
        expected = beta**2 * p_p * sum(ALPHA ** (2 * j) for j in range(order + 1))
        assert wiener_coefficients(order, ALPHA, beta, p_p).theta == pytest.approx(expected, rel=0.05)


def test_wiener_rejects_bad_inputs():
    with pytest.raises(ValueError):
        wiener_coefficients(-1, 0.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        wiener_coefficients(1, 0.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        wiener_coefficients(1, 0.5, 1.0, 0.0)


def test_bank_and_thetas():
    states = predictor_bank(2, 0.9, [1.0, 0.5], 3.0)
    assert [s.beta for s in states] == [1.0, 0.5]
    np.testing.assert_array_equal(thetas(states), [states[0].theta, states[1].theta])


def test_order_zero_prediction_is_aged_csi():
    profile = FadingProfile.from_betas([1.0, 0.4, 2.0])
    aging = AgingParams.from_alpha(ALPHA)
    rng = Rng(31)
    g = generate_channel(profile, 16, rng)
    realization = observe_and_estimate(g, profile, 5.0, rng)
    states = predictor_bank(0, ALPHA, profile.betas, 5.0)
    predicted = predict_channel([realization.observation], states)
    np.testing.assert_allclose(predicted, aged_csi(realization.estimate, aging), rtol=1e-12)


def test_order_zero_history_uses_the_same_draws():
    profile = FadingProfile.from_betas([1.0, 0.4])
    history, channel = simulate_observation_history(profile, 8, AgingParams.from_alpha(0.9), 2.0, 0, Rng(32))
    rng = Rng(32)
    g = generate_channel(profile, 8, rng)
    np.testing.assert_array_equal(channel, g)
    np.testing.assert_array_equal(history[0], observe_and_estimate(g, profile, 2.0, rng).observation)


def test_zero_history_gives_zero_prediction():
    states = predictor_bank(2, 0.9, [1.0, 0.5], 3.0)
    assert not np.any(predict_channel([np.zeros((4, 2))] * 3, states))


def test_predict_channel_checks_history():
    states = predictor_bank(2, 0.9, [1.0, 0.5], 3.0)
    with pytest.raises(ValueError):
        predict_channel([np.zeros((4, 2))] * 2, states)
    with pytest.raises(ValueError):
        predict_channel([np.zeros((4, 3))] * 3, states)
    with pytest.raises(ValueError):
        predict_channel([np.zeros((4, 2))] * 3, states[:1] + predictor_bank(1, 0.9, [0.5], 3.0))


@pytest.mark.slow
def test_prediction_statistics_match_closed_form():
    betas = np.array([1.0, 0.5])
    profile = FadingProfile.from_betas(betas)
    aging = AgingParams.from_alpha(0.9)
    p_p, order = 5.0, 2
    rng = Rng(33)
    history, channel = simulate_observation_history(profile, 4, aging, p_p, order, rng, batch=(20000,))
    target = age_channel(channel, aging, profile, rng)
    states = predictor_bank(order, aging.alpha, betas, p_p)
    predicted = predict_channel(history, states)
    error = target - predicted

    for k, state in enumerate(states):
        power = np.abs(predicted[..., k]) ** 2
        assert power.mean() == pytest.approx(aging.alpha**2 * state.theta, rel=0.02)
        assert np.mean(np.abs(error[..., k]) ** 2) == pytest.approx(state.mse_per_entry, rel=0.03)
        cross = np.ravel(np.conj(predicted[..., k]) * error[..., k])
        std_err = cross.real.std(ddof=1) / math.sqrt(cross.size)
        assert abs(cross.real.mean()) <= 4 * std_err
