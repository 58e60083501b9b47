"""
Tests for collocation grids, gPC coefficients and moments.
"""

import math

import numpy as np
import pytest

from riskbound.distributions import Distribution
from riskbound.errors import ConfigurationError, NodeEvaluationError
from riskbound.models import (
    AffineMap,
    AnalyticModel,
    ConstantModel,
    DecayModel,
    Heat1DModel,
    OscillatorModel,
    OutputFunctional,
    OutputKind,
    oscillator_solution,
)
from riskbound.orthopoly import PolynomialFamily, evaluate_basis, gauss_rule, tensor_rule
from riskbound.surrogate import (
    Surrogate,
    collocation_rule,
    compute_coefficients,
    convergence_study,
    evaluate,
    mean,
    second_moment,
    solve_at_nodes,
    surrogate_evaluator,
    variance,
)

UNIT = Distribution.uniform(0.0, 1.0)
DECAY_MEAN = (1 - math.exp(-1)) / 2
DECAY_SECOND = (1 - math.exp(-2)) / 6


def _surrogate(model, orders=(8, 8), laws=(UNIT, UNIT), mode='output', degrees=None):
    grid = solve_at_nodes(model, collocation_rule(laws[0], laws[1], orders), mode)
    return compute_coefficients(grid, degrees)


# solve_at_nodes

def test_decay_values_are_exact():
    rule = collocation_rule(UNIT, UNIT, (5, 4))
    grid = solve_at_nodes(DecayModel(), rule)
    z1, z2 = rule.nodes[:, 0], rule.nodes[:, 1]
    np.testing.assert_allclose(grid.values, z2 * np.exp(-z1), rtol=1e-15)


def test_constant_model_on_four_nodes():
    grid = solve_at_nodes(ConstantModel(value=2.5), collocation_rule(UNIT, UNIT, (2, 2)))
    np.testing.assert_array_equal(grid.values, [2.5, 2.5, 2.5, 2.5])


def test_oscillator_single_node():
    beta = Distribution.beta_law(5, 5)
    rule = collocation_rule(beta, beta, (1, 1))
    model = OscillatorModel()
    grid = solve_at_nodes(model, rule)
    assert grid.values[0] == pytest.approx(oscillator_solution(0.5, 0.5, 4.0, model), rel=1e-14)


def test_node_failure_carries_coordinates():
    with pytest.raises(NodeEvaluationError) as excinfo:
        solve_at_nodes(AnalyticModel(function=lambda z1, z2: np.log(z1 - 0.5)), collocation_rule(UNIT, UNIT, (3, 3)))
    assert excinfo.value.node[0] < 0.5


def test_process_pool_matches_serial():
    model = Heat1DModel(t_final=1e-4, time_steps=5, cells=16)
    rule = collocation_rule(Distribution.beta_law(5, 5, 0.003, 0.005), Distribution.beta_law(5, 5, 0.30, 0.41), (2, 2))
    serial = solve_at_nodes(model, rule, workers=1)
    pooled = solve_at_nodes(model, rule, workers=2)
    np.testing.assert_array_equal(serial.values, pooled.values)


# compute_coefficients

def test_constant_coefficients():
    s = _surrogate(ConstantModel(value=1.0), orders=(4, 3))
    expected = np.zeros(12)
    expected[0] = 1.0
    np.testing.assert_allclose(s.coefficients, expected, atol=1e-14)


def test_basis_function_coefficient():
    family = PolynomialFamily.legendre(0.0, 1.0)
    s = _surrogate(AnalyticModel(function=lambda z1, z2: evaluate_basis(family, 2, z1)), orders=(4, 4))
    assert s.coefficient(2, 0) == pytest.approx(1.0, abs=1e-10)
    others = np.delete(s.coefficients, 2)
    np.testing.assert_allclose(others, 0.0, atol=1e-10)


def test_coefficient_index_order():
    family = PolynomialFamily.legendre(0.0, 1.0)
    s = _surrogate(AnalyticModel(function=lambda z1, z2: evaluate_basis(family, 1, z2)), orders=(3, 3))
    assert s.coefficient(0, 1) == pytest.approx(1.0, abs=1e-12)
    assert s.coefficients[1 * 3 + 0] == pytest.approx(1.0, abs=1e-12)
    assert s.matrix[1, 0] == pytest.approx(1.0, abs=1e-12)


def test_decay_mean_coefficient():
    s = _surrogate(DecayModel())
    assert s.degrees == (7, 7) and s.coefficients.size == 64
    assert s.coefficients[0] == pytest.approx(0.3160603, abs=1e-7)


def test_under_resolved_grid():
    grid = solve_at_nodes(DecayModel(), collocation_rule(UNIT, UNIT, (4, 4)))
    with pytest.raises(ConfigurationError, match=r'need orders >= \(6, 3\)'):
        compute_coefficients(grid, (5, 2))


def test_smaller_basis_than_grid():
    grid = solve_at_nodes(DecayModel(), collocation_rule(UNIT, UNIT, (8, 8)))
    s = compute_coefficients(grid, (4, 1))
    assert s.coefficients.size == 10
    assert mean(s) == pytest.approx(DECAY_MEAN, rel=1e-12)


# evaluate and moments

def test_evaluate_examples():
    assert evaluate(_surrogate(ConstantModel(value=-1.5), orders=(3, 3)), 0.3, 0.9) == pytest.approx(-1.5, abs=1e-12)
    assert evaluate(_surrogate(DecayModel()), 0.5, 0.5) == pytest.approx(0.5 * math.exp(-0.5), abs=1e-6)


def test_interpolation_at_nodes():
    model = OscillatorModel()
    beta = Distribution.beta_law(5, 5)
    grid = solve_at_nodes(model, collocation_rule(beta, beta, (6, 6)))
    s = compute_coefficients(grid)
    nodes = grid.rule.nodes
    np.testing.assert_allclose(evaluate(s, nodes[:, 0], nodes[:, 1]), grid.values, rtol=1e-8, atol=1e-12)


def test_evaluate_outer_grid_matches_pointwise():
    s = _surrogate(DecayModel(), orders=(5, 4))
    z1, z2 = np.linspace(0, 1, 7), np.linspace(0, 1, 3)
    outer = evaluate(s, z1[:, None], z2[None, :])
    assert outer.shape == (7, 3)
    assert outer[4, 2] == pytest.approx(evaluate(s, z1[4], z2[2]), rel=1e-14)


def test_moment_examples():
    constant = _surrogate(ConstantModel(value=3.0), orders=(3, 3))
    assert mean(constant) == pytest.approx(3.0) and second_moment(constant) == pytest.approx(9.0)
    assert variance(constant) == pytest.approx(0.0, abs=1e-12)

    decay = _surrogate(DecayModel())
    assert mean(decay) == pytest.approx(DECAY_MEAN, abs=1e-7)
    assert second_moment(decay) == pytest.approx(0.1441082, abs=1e-7)
    squared = _surrogate(DecayModel(output=OutputFunctional(OutputKind.SQUARE)))
    assert mean(squared) == pytest.approx(DECAY_SECOND, abs=1e-7)

    family = PolynomialFamily.legendre(0.0, 1.0)
    linear = _surrogate(AnalyticModel(function=lambda z1, z2: evaluate_basis(family, 1, z1)), orders=(3, 3))
    assert second_moment(linear) == pytest.approx(1.0, abs=1e-12)


def test_polynomial_reproduction():
    laws = (Distribution.gaussian(0.5, 2.0), Distribution.beta_law(2.0, 3.0, -1.0, 1.0))
    model = AnalyticModel(function=lambda z1, z2: 1 + z1 - 2 * z1**2 * z2 + 0.5 * z1**3 * z2**2)
    s = _surrogate(model, orders=(4, 3), laws=laws)
    rng = np.random.default_rng(0)
    z1, z2 = rng.uniform(-3, 3, 100), rng.uniform(-1, 1, 100)
    np.testing.assert_allclose(evaluate(s, z1, z2), model(z1, z2), rtol=1e-10, atol=1e-10)


def test_parseval_and_mean_consistency():
    beta = Distribution.beta_law(5, 5)
    s = _surrogate(OscillatorModel(), orders=(6, 6), laws=(beta, beta))
    fine = tensor_rule(gauss_rule(s.families[0], 20), gauss_rule(s.families[1], 20))
    assert second_moment(s) == pytest.approx(fine.expectation(lambda z1, z2: evaluate(s, z1, z2) ** 2), abs=1e-8)
    assert mean(s) == pytest.approx(fine.expectation(lambda z1, z2: evaluate(s, z1, z2)), abs=1e-10)


def test_coefficient_decay():
    s = _surrogate(DecayModel(), orders=(9, 9))
    magnitudes = np.abs([s.coefficient(j1, 0) for j1 in range(1, 9)])
    assert np.all(np.diff(magnitudes) < 0)


# Output modes

def test_state_mode_applies_output_after_evaluation():
    model = DecayModel(output=OutputFunctional.indicator(0.8, 1.0))
    state = _surrogate(model, orders=(12, 12), mode='state')
    assert state.mode == 'state' and state.output == model.output
    z = np.linspace(0, 1, 41)
    values = surrogate_evaluator(state)(z[:, None], z[None, :])
    assert set(np.unique(values)) <= {0.0, 1.0}
    exact = model(z[:, None], z[None, :])
    assert np.mean(values != exact) < 0.05


def test_output_mode_interpolates_indicator():
    model = DecayModel(output=OutputFunctional.indicator(0.8, 1.0))
    grid = solve_at_nodes(model, collocation_rule(UNIT, UNIT, (12, 12)))
    s = compute_coefficients(grid)
    nodes = grid.rule.nodes
    np.testing.assert_allclose(surrogate_evaluator(s)(nodes[:, 0], nodes[:, 1]), grid.values, atol=1e-8)


def test_surrogate_dict_round_trip():
    s = _surrogate(DecayModel(output=OutputFunctional.indicator(0.8, 1.0)), orders=(4, 3), mode='state')
    loaded = Surrogate.from_dict(s.to_dict())
    np.testing.assert_array_equal(loaded.coefficients, s.coefficients)
    assert loaded.families == s.families and loaded.output == s.output and loaded.degrees == (3, 2)


# Convergence

def test_scalar_decay_convergence():
    model = DecayModel(g=AffineMap(0.0, 1.0))
    reference = (math.exp(0.5), math.exp(2.0))
    rows = convergence_study(model, list(range(2, 13)), reference, (Distribution.gaussian(), UNIT), second_order=1)
    mean_errors = {row.order: row.mean_error for row in rows}
    second_errors = [row.second_moment_error for row in rows]

    assert all(mean_errors[n + 1] <= mean_errors[n] / 10 for n in range(3, 10))
    assert mean_errors[12] <= 1e-10
    assert all(b < a for a, b in zip(second_errors, second_errors[1:]))
    assert second_errors[-1] <= 1e-7


def test_polynomial_model_converges_exactly():
    model = AnalyticModel(function=lambda z1, z2: z1**3 + z2)
    reference = (0.75, 1 / 7 + 1 / 4 + 1 / 3)
    rows = convergence_study(model, [4, 5], reference, (UNIT, UNIT))
    assert all(row.mean_error <= 1e-12 and row.second_moment_error <= 1e-12 for row in rows)


def test_decay_convergence_is_exponential():
    rows = convergence_study(DecayModel(), list(range(2, 9)), (DECAY_MEAN, DECAY_SECOND), (UNIT, UNIT))
    points = [(row.order, row.second_moment_error) for row in rows if row.second_moment_error > 1e-14]
    assert len(points) >= 3
    slope = np.polyfit([p[0] for p in points], np.log([p[1] for p in points]), 1)[0]
    assert slope < -1
