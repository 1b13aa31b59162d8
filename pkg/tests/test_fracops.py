"""Discrete fractional operators: weights, derivatives, integral, duality."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcsir import (
    DomainError,
    FractionalSetup,
    ab_integral,
    abc_derivative,
    abc_derivative_backward,
    abc_linear_ode_solution,
    duality_residual,
    gamma,
    kernel_weights,
    mittag_leffler,
)

# scalar decay solution c(t) for alpha=0.5, rate 1, c0=1 from an independent
# 40-digit numerical Laplace inversion of
# C(s) = B s^{alpha-1} / ((B + a(1-alpha)) s^alpha + a alpha)
FROZEN_DECAY_ALPHA_HALF = {
    0.5: 0.458474433120800061,
    1.0: 0.412830673269699735,
    2.0: 0.3600290436748762,
    5.0: 0.28380809543607129,
}


def _antiderivative(setup, t):
    """t * E_{a,2}(-g t^a): exact integral of the kernel from 0 to t."""
    if t == 0.0:
        return 0.0
    return t * mittag_leffler(setup.alpha, 2.0, -setup.gamma_coef * t ** setup.alpha)


# ---------------------------------------------------------------- weights

def test_weight_single_interval_matches_reference():
    w = kernel_weights(0.5, 1.0, 1)
    assert abs(w[1] - 0.55596274325131957831) <= 1e-10 * w[1]


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9, 0.95])
def test_weights_positive_and_recent_history_heavier(alpha):
    setup = FractionalSetup(alpha, 0.1, 60)
    w = setup.lag_weights
    assert w[0] == 0.0
    assert np.all(w[1:] > 0.0)
    # w[n][k] increasing in k <=> lag weights decreasing in the lag
    assert np.all(np.diff(w[1:]) < 0.0)
    for n in (1, 13, 60):
        row = setup.weight_row(n)
        assert row.shape == (n,)
        assert np.all(np.diff(row) > 0.0) or n == 1
        want = _antiderivative(setup, n * 0.1)
        assert abs(row.sum() - want) <= 1e-9 * max(1.0, want)


def test_weight_table_entries_match_defining_difference():
    setup = FractionalSetup(0.7, 0.25, 12)
    for n in (1, 5, 12):
        for k in range(n):
            want = _antiderivative(setup, (n - k) * 0.25) - _antiderivative(
                setup, (n - k - 1) * 0.25
            )
            assert abs(setup.weight(n, k) - want) <= 1e-12 * max(1.0, want)


def test_weights_domain_errors():
    for bad_alpha in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(DomainError):
            kernel_weights(bad_alpha, 0.1, 5)
    with pytest.raises(DomainError):
        kernel_weights(0.5, -1.0, 5)
    with pytest.raises(DomainError):
        kernel_weights(0.5, 0.1, 0)


# ------------------------------------------------------------- derivative

def test_derivative_of_constant_is_exactly_zero():
    setup = FractionalSetup(0.9, 0.05, 80)
    out = abc_derivative(np.full(81, 4.25), setup)
    assert np.all(out == 0.0)


@pytest.mark.parametrize("alpha", [0.5, 0.9, 0.95])
def test_derivative_exact_on_affine_input(alpha):
    setup = FractionalSetup(alpha, 0.05, 200)
    t = setup.t_grid
    out = abc_derivative(1.5 + 0.75 * t, setup)
    assert out[0] == 0.0
    for n in range(1, 201):
        want = setup.derivative_coef * 0.75 * _antiderivative(setup, t[n])
        assert abs(out[n] - want) <= 1e-9 * max(1.0, abs(want))


@settings(max_examples=25, deadline=None)
@given(
    a=st.floats(-3.0, 3.0),
    b=st.floats(-3.0, 3.0),
    alpha=st.floats(0.35, 0.95),
)
def test_derivative_linearity(a, b, alpha):
    setup = FractionalSetup(alpha, 0.1, 40)
    t = setup.t_grid
    y = np.sin(t)
    z = np.cos(2.0 * t) - t
    combined = abc_derivative(a * y + b * z, setup)
    split = a * abc_derivative(y, setup) + b * abc_derivative(z, setup)
    assert np.max(np.abs(combined - split)) <= 1e-12 * (1 + abs(a) + abs(b))


def test_derivative_length_mismatch():
    setup = FractionalSetup(0.5, 0.1, 10)
    with pytest.raises(DomainError):
        abc_derivative(np.zeros(10), setup)
    with pytest.raises(DomainError):
        abc_derivative(np.full(11, np.nan), setup)


# ---------------------------------------------------- backward derivative

def test_backward_of_constant_is_zero():
    setup = FractionalSetup(0.7, 0.05, 40)
    assert np.all(abc_derivative_backward(np.full(41, -2.0), setup) == 0.0)


def test_backward_on_identity_function():
    setup = FractionalSetup(0.9, 0.05, 200)
    t = setup.t_grid
    big_t = t[-1]
    out = abc_derivative_backward(t, setup)
    for n in range(0, 200):
        want = -setup.derivative_coef * _antiderivative(setup, big_t - t[n])
        assert abs(out[n] - want) <= 1e-9 * max(1.0, abs(want))
    assert out[-1] == 0.0  # no history left at the terminal point


def test_backward_is_reversed_forward():
    setup = FractionalSetup(0.6, 0.02, 50)
    y = np.sin(setup.t_grid) + 0.3 * setup.t_grid
    fwd = abc_derivative(y, setup)
    # reversing the input and the output recovers the forward values
    again = abc_derivative_backward(y[::-1], setup)[::-1]
    np.testing.assert_array_equal(again, fwd)


def test_backward_tends_to_negative_slope_in_classical_limit():
    setup = FractionalSetup(0.999, 0.001, 1000)
    t = setup.t_grid
    out = abc_derivative_backward(2.0 * t, setup)
    interior = out[100:-100]
    assert np.max(np.abs(interior + 2.0)) <= 0.02 * 2.0


# ---------------------------------------------------------------- integral

def test_integral_of_constant_matches_closed_form():
    alpha = 0.5
    setup = FractionalSetup(alpha, 0.01, 100)
    c = 2.5
    out = ab_integral(np.full(101, c), setup)
    for n in (10, 50, 100):
        t = n * 0.01
        want = c * ((1.0 - alpha) + t ** alpha / gamma(alpha)) / setup.b_alpha
        assert abs(out[n] - want) <= 1e-12 * want


def test_integral_classical_limit_is_running_trapezoid():
    setup = FractionalSetup(0.999, 0.01, 100)
    y = np.sin(setup.t_grid)
    out = ab_integral(y, setup)
    running = np.concatenate(
        ([0.0], np.cumsum(0.5 * 0.01 * (y[1:] + y[:-1])))
    )
    assert abs(out[-1] - running[-1]) <= 0.01 * abs(running[-1])


def test_integral_inverts_derivative_under_refinement():
    errs = []
    for m in (100, 200, 400):
        setup = FractionalSetup(0.7, 1.0 / m, m)
        y = np.sin(2.0 * setup.t_grid) + 0.3
        recovered = ab_integral(abc_derivative(y, setup), setup)
        errs.append(np.max(np.abs(recovered - (y - y[0]))))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 1e-4


# ----------------------------------------------------- scalar decay law

def test_decay_law_against_laplace_oracle():
    for t, want in FROZEN_DECAY_ALPHA_HALF.items():
        got = abc_linear_ode_solution(0.5, 1.0, 1.0, t)
        assert abs(got - want) <= 1e-12 * want


def test_decay_law_zero_rate_is_constant():
    for t in (0.0, 0.5, 3.0, 20.0):
        assert abc_linear_ode_solution(0.4, 0.0, 3.3, t) == pytest.approx(3.3, abs=1e-14)


def test_decay_law_classical_limit():
    # at order 0.9999 the law collapses onto exp(-a t); 0.999 retains a
    # visible heavy tail (a few per cent at a t = 5), decreasing in order
    worst = {}
    for alpha in (0.999, 0.9999):
        worst[alpha] = max(
            abs(abc_linear_ode_solution(alpha, 0.5, 1.0, t) - math.exp(-0.5 * t))
            / math.exp(-0.5 * t)
            for t in (0.5, 1.0, 2.0, 5.0, 10.0)
        )
    assert worst[0.9999] <= 0.01
    assert worst[0.9999] < worst[0.999]


def test_decay_law_domain():
    with pytest.raises(DomainError):
        abc_linear_ode_solution(1.2, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        abc_linear_ode_solution(0.5, -1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        abc_linear_ode_solution(0.5, 1.0, 1.0, -0.1)


# ----------------------------------------------------------------- duality

def test_duality_zero_input():
    setup = FractionalSetup(0.7, 0.01, 100)
    v = np.cos(setup.t_grid)
    assert duality_residual(np.zeros(101), v, setup) == 0.0


def test_duality_constants_reduce_to_boundary_terms():
    setup = FractionalSetup(0.7, 0.004, 250)
    c = np.full(251, 1.3)
    assert duality_residual(c, c, setup) <= 1e-9


def test_duality_residual_shrinks_under_refinement():
    res = {}
    for m in (250, 500):
        setup = FractionalSetup(0.7, 1.0 / m, m)
        res[m] = duality_residual(np.sin(setup.t_grid), np.cos(setup.t_grid), setup)
    assert res[250] / res[500] >= 1.8


# ------------------------------------------------------------ continuity

def test_operator_outputs_continuous_in_order():
    # the memory rate a/(1-a) steepens near the classical limit, so the
    # order-derivative of the outputs carries a 1/(1-a) factor
    alphas = np.linspace(0.3, 0.999, 30)
    outs = []
    for a in alphas:
        setup = FractionalSetup(float(a), 0.02, 50)
        outs.append(abc_derivative(np.sin(setup.t_grid), setup))
    outs = np.array(outs)
    scale = np.abs(outs).max()
    d_alpha = alphas[1] - alphas[0]
    jumps = np.max(np.abs(np.diff(outs, axis=0)), axis=1)
    bounds = 1.0 * d_alpha * scale / (1.0 - alphas[1:])
    assert np.all(jumps <= bounds)
