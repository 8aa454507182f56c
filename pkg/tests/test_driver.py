"""Expansion driver: frozen coefficients, convergence behaviour, stability
under order changes, divergence detection, and input validation."""

import dataclasses
import math

import numpy as np
import pytest

from pdetaylor import (
    DivergenceError,
    PdeProblem,
    TaylorExpansion,
    compute_expansion,
    get_problem,
)

PI = math.pi
KAPPA = -0.4 * PI**2  # heat decay rate for the default parameters


def test_heat_coefficients_match_decay_powers():
    x = np.array([0.2, 0.5, 0.8])
    exp = compute_expansion(get_problem("heat"), x, 2)
    g = np.sin(PI * x)
    np.testing.assert_array_equal(exp.coeffs[0][0], g)
    np.testing.assert_allclose(exp.coeffs[0][1], KAPPA * g, rtol=1e-14)
    np.testing.assert_allclose(exp.coeffs[0][2], KAPPA**2 / 2 * g, rtol=1e-13)


def test_diffusion_coefficients_alternate_inverse_factorials():
    x = np.array([-0.35, 0.5])
    exp = compute_expansion(get_problem("diffusion"), x, 3)
    g = np.sin(PI * x)
    for i in range(4):
        np.testing.assert_allclose(
            exp.coeffs[0][i], (-1.0) ** i / math.factorial(i) * g, rtol=1e-11, atol=1e-13
        )


def test_wave_coefficients_standing_pattern():
    x = np.array([0.5])
    exp = compute_expansion(get_problem("wave"), x, 2)
    u, v = exp.coeffs
    assert u[0][0] == pytest.approx(2.0, rel=1e-15)
    assert u[1][0] == 0.0
    assert u[2][0] == pytest.approx(-(PI**2), rel=1e-13)
    assert v[0][0] == 0.0
    assert v[1][0] == pytest.approx(-2 * PI**2, rel=1e-13)
    assert v[2][0] == 0.0


def test_derivatives_are_factorial_scaled_coefficients():
    x = np.linspace(0.1, 0.9, 5)
    exp = compute_expansion(get_problem("heat"), x, 6)
    derivs = exp.derivatives()
    for i in range(7):
        np.testing.assert_array_equal(derivs[0][i], math.factorial(i) * exp.coeffs[0][i])


def test_evaluate_at_zero_returns_initial_profile():
    x = np.linspace(0.15, 0.85, 8)
    exp = compute_expansion(get_problem("heat"), x, 5)
    np.testing.assert_array_equal(exp.evaluate(0.0)[0], np.sin(PI * x))


def test_heat_evaluation_converges_to_exact():
    prob = get_problem("heat")
    x = np.linspace(0.05, 0.95, 21)
    exp = compute_expansion(prob, x, 10)
    got = exp.evaluate(0.1)[0]
    want = prob.exact(0.1, x)[0]
    assert np.max(np.abs(got - want)) < 2e-12


def test_diffusion_evaluation_converges_to_exact():
    prob = get_problem("diffusion")
    x = np.linspace(-0.9, 0.9, 19)
    exp = compute_expansion(prob, x, 10)
    got = exp.evaluate(0.05)[0]
    want = prob.exact(0.05, x)[0]
    assert np.max(np.abs(got - want)) < 1e-14


def test_wave_evaluation_converges_to_exact():
    prob = get_problem("wave")
    x = np.linspace(0.1, 0.9, 9)
    exp = compute_expansion(prob, x, 10)
    for t1 in (0.01, 0.1):
        got = exp.evaluate(t1)
        want = prob.exact(t1, x)
        for m in range(2):
            np.testing.assert_allclose(got[m], want[m], rtol=0, atol=5e-13)


@pytest.mark.parametrize("name", ["heat", "diffusion", "wave", "burgers", "allen_cahn", "schrodinger"])
def test_low_order_coefficients_stable_under_higher_truncation(name):
    # Raising the expansion order must not disturb already-computed
    # coefficients: the convolution never reads above the diagonal, so
    # the overlap is reproduced bit for bit.
    prob = get_problem(name)
    lo, hi = prob.domain
    x = np.linspace(lo + 0.2, hi - 0.2, 4)
    small = compute_expansion(prob, x, 4)
    large = compute_expansion(prob, x, 6)
    for m in range(prob.components):
        for i in range(5):
            np.testing.assert_array_equal(small.coeffs[m][i], large.coeffs[m][i])


def test_linear_problem_scales_linearly():
    heat = get_problem("heat")
    tripled = dataclasses.replace(
        heat,
        ic=lambda seed: [h * 3.0 for h in heat.ic(seed)],
        ic_numpy=lambda x: [3.0 * g for g in heat.ic_numpy(x)],
    )
    x = np.linspace(0.1, 0.9, 6)
    base = compute_expansion(heat, x, 6)
    big = compute_expansion(tripled, x, 6)
    for i in range(7):
        np.testing.assert_allclose(big.coeffs[0][i], 3.0 * base.coeffs[0][i], rtol=1e-14)


def test_remainder_shrinks_at_series_order():
    # With K retained orders the first dropped term dominates, so halving the
    # horizon divides the error by about 2**(K+1).
    prob = get_problem("heat")
    x = np.linspace(0.1, 0.9, 11)
    exp = compute_expansion(prob, x, 4)
    err = {}
    for t1 in (0.1, 0.2):
        err[t1] = np.max(np.abs(exp.evaluate(t1)[0] - prob.exact(t1, x)[0]))
    ratio = err[0.2] / err[0.1]
    assert 2**3 <= ratio <= 2**7


def _toy_problem(ic_value, rhs):
    return PdeProblem(
        name="toy",
        components=1,
        domain=(-1.0, 1.0),
        t_end=1.0,
        params={},
        ic=lambda seed: [seed * 0.0 + ic_value],
        rhs=rhs,
        ic_numpy=lambda x: [np.full_like(x, ic_value)],
        rhs_numpy=lambda u, u_x, u_xx, t, x: [np.zeros_like(x)],
    )


def test_constant_profile_with_diffusion_rhs_stays_put():
    prob = _toy_problem(4.0, lambda u, u_x, u_xx, t, x: [u_xx[0]])
    x = np.array([-0.5, 0.0, 0.5])
    exp = compute_expansion(prob, x, 5)
    np.testing.assert_array_equal(exp.coeffs[0][0], np.full(3, 4.0))
    for i in range(1, 6):
        np.testing.assert_array_equal(exp.coeffs[0][i], np.zeros(3))
    np.testing.assert_array_equal(exp.evaluate(0.7)[0], np.full(3, 4.0))


def test_divergence_error_reports_order_and_component():
    prob = _toy_problem(1e200, lambda u, u_x, u_xx, t, x: [u[0] * u[0]])
    with np.errstate(over="ignore"), pytest.raises(DivergenceError) as err:
        compute_expansion(prob, np.array([0.0]), 3)
    assert err.value.order == 1
    assert err.value.component == 0
    assert "order 1" in str(err.value)


def test_divergence_error_can_appear_at_higher_order():
    # growth ~ u^3 squares the magnitude each round: finite at first order,
    # infinite soon after
    prob = _toy_problem(1e120, lambda u, u_x, u_xx, t, x: [u[0] * u[0] * u[0]])
    with np.errstate(over="ignore"), pytest.raises(DivergenceError) as err:
        compute_expansion(prob, np.array([0.0]), 5)
    assert err.value.order >= 1


def test_rhs_must_return_series():
    prob = _toy_problem(1.0, lambda u, u_x, u_xx, t, x: [np.zeros(1)])
    with pytest.raises(TypeError, match="series"):
        compute_expansion(prob, np.array([0.0]), 2)


def test_points_must_be_inside_domain():
    prob = get_problem("heat")
    with pytest.raises(ValueError, match="inside"):
        compute_expansion(prob, np.array([0.5, 1.0]), 3)
    with pytest.raises(ValueError, match="inside"):
        compute_expansion(prob, np.array([-0.1]), 3)
    with pytest.raises(ValueError):
        compute_expansion(prob, np.array([]), 3)


def test_order_validation():
    prob = get_problem("heat")
    x = np.array([0.5])
    for bad in (0, -1, 21, 2.5):
        with pytest.raises(ValueError):
            compute_expansion(prob, x, bad)


def test_expansion_metadata_and_tails():
    x = np.array([0.3, 0.6])
    exp = compute_expansion(get_problem("heat"), x, 3)
    assert isinstance(exp, TaylorExpansion)
    assert exp.problem == "heat"
    assert exp.max_order == 3
    assert exp.components == 1
    np.testing.assert_array_equal(exp.points, x)
    assert len(exp.coeffs[0]) == 4
    # each retained jet still starts with the coefficient batch it produced
    for i, tail in enumerate(exp.jet_tails[0]):
        np.testing.assert_array_equal(tail.coeffs[0], exp.coeffs[0][i])
        assert tail.order == 2 * (3 + 1 - i)
