"""
Tests for the example systems and output functionals.
"""

import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from riskbound.errors import ParameterDomainError, PhysicalValidityError, SolverError
from riskbound.models import (
    AffineMap,
    ConstantModel,
    DecayModel,
    Heat1DModel,
    OscillatorModel,
    OutputFunctional,
    OutputKind,
    apply_output,
    build_model,
    decay_solution,
    heat1d_solution,
    integrate_heat,
    oscillator_solution,
)

Z1_HEAT, Z2_HEAT = 0.004, 0.355


def _trapezoid(x, u):
    dx = x[1] - x[0]
    return dx * (u.sum() - 0.5 * (u[0] + u[-1]))


# Output functionals

def test_apply_output():
    assert apply_output(OutputFunctional(OutputKind.SQUARE), 0.5) == 0.25
    band = OutputFunctional.indicator(0.8, 1.0)
    assert apply_output(band, 0.9) == 1.0
    assert apply_output(band, 0.79) == 0.0
    assert apply_output(band, 1.0) == 1.0
    assert apply_output(OutputFunctional.indicator(None, 2.0), 2.0) == 1.0
    assert apply_output(OutputFunctional(), -3.5) == -3.5


def test_indicator_is_exactly_zero_or_one():
    values = apply_output(OutputFunctional.indicator(0.8, 1.0), np.linspace(0, 2, 101))
    assert set(np.unique(values)) <= {0.0, 1.0}


def test_indicator_bounds_validated():
    with pytest.raises(ParameterDomainError):
        OutputFunctional.indicator(1.0, 0.5)
    with pytest.raises(ParameterDomainError):
        OutputFunctional.from_dict({'kind': 'cube'})


def test_output_dict_round_trip():
    h = OutputFunctional.indicator(980.0, None)
    assert h.to_dict() == {'kind': 'indicator', 'lower': 980.0, 'upper': None}
    assert OutputFunctional.from_dict(h.to_dict()) == h


# Decay

def test_decay_examples():
    assert decay_solution(0.0, 1.0, 1.0) == 1.0
    assert decay_solution(1.0, 1.0, 1.0) == pytest.approx(math.exp(-1))
    square = DecayModel(output=OutputFunctional(OutputKind.SQUARE))
    assert square(0.5, 0.5) == pytest.approx((0.5 * math.exp(-0.5)) ** 2, rel=1e-14)
    assert square(0.5, 0.5) == pytest.approx(0.0919699, abs=1e-7)


def test_decay_rejects_negative_time():
    with pytest.raises(ParameterDomainError):
        decay_solution(0.5, 0.5, -1.0)


def test_decay_monotone_in_rate():
    z1 = np.linspace(0, 1, 50)
    values = DecayModel()(z1, 0.7)
    assert np.all(np.diff(values) < 0)


def test_decay_maps_and_broadcasting():
    model = DecayModel(t=2.0, k=AffineMap(2.0, 0.5), g=AffineMap(3.0, 1.0))
    z1 = np.array([0.0, 0.25])[:, None]
    z2 = np.array([0.0, 1.0, 2.0])[None, :]
    values = model(z1, z2)
    assert values.shape == (2, 3)
    assert values[1, 2] == pytest.approx(7.0 * math.exp(-2.0))


# Oscillator

def test_undamped_oscillator_period():
    model = OscillatorModel(
        t_critical=2 * math.pi, gamma=AffineMap(0.0, 0.0), amplitude=0.0, offset=0.0, u0=1.0, v0=0.0,
    )
    assert oscillator_solution(0.25, 0.5, 2 * math.pi, model) == pytest.approx(1.0, abs=1e-6)


def test_oscillator_matches_dense_reference():
    model = OscillatorModel()
    value = oscillator_solution(0.5, 0.5, 4.0, model)

    def rhs(t, y):
        return [y[1], 10 * math.cos(10 * t) + 3 - 0.1 * y[1] - 2.0 * y[0]]

    reference = solve_ivp(rhs, (0.0, 4.0), [0.0, 0.0], method='DOP853', rtol=1e-12, atol=1e-12)
    assert value == pytest.approx(reference.y[0, -1], abs=1e-7)


def test_oscillator_fourth_order():
    rng = np.random.default_rng(5)
    z1, z2 = rng.uniform(0, 1, 10), rng.uniform(0, 1, 10)
    coarse, medium, fine = (OscillatorModel(step=h).state(z1, z2) for h in (0.02, 0.01, 0.005))
    ratios = np.abs(coarse - medium) / np.abs(medium - fine)
    assert np.all((ratios > 10.0) & (ratios < 25.0)), ratios


def test_oscillator_vectorized_matches_scalar():
    model = OscillatorModel(output=OutputFunctional.indicator(None, 2.0))
    z1, z2 = np.array([0.2, 0.6]), np.array([0.9, 0.4])
    np.testing.assert_array_equal(model(z1, z2), [model(a, b) for a, b in zip(z1, z2)])


def test_oscillator_is_deterministic():
    model = OscillatorModel()
    assert model.state(0.37, 0.61) == model.state(0.37, 0.61)


def test_oscillator_blow_up_reports_node():
    model = OscillatorModel(k=AffineMap(-1e6, 0.0), t_critical=1.0)
    with pytest.raises(SolverError) as excinfo:
        model.state(1.0, 0.5)
    assert excinfo.value.z1 == 1.0 and excinfo.value.z2 == 0.5


def test_oscillator_rejects_negative_damping():
    with pytest.raises(ParameterDomainError):
        OscillatorModel(gamma=AffineMap(-1.0, 0.0)).state(0.5, 0.5)


# Heat equation

def test_heat_insulated_equilibrium():
    params = Heat1DModel(q=0.0, t_final=0.01, time_steps=50)
    x, u = integrate_heat(params, Z1_HEAT, Z2_HEAT)
    np.testing.assert_allclose(u, 25.0, rtol=1e-13)


def test_heat_energy_balance():
    params = Heat1DModel(kappa=0.0, t_final=1e-4, time_steps=50)
    x, u = integrate_heat(params, Z1_HEAT, Z2_HEAT)
    expected = 25.0 * params.length + params.q * params.t_final / params.capacity(Z2_HEAT)
    assert _trapezoid(x, u) == pytest.approx(expected, rel=1e-10)


def test_heat_cosine_eigenmode_decay():
    params = Heat1DModel(kappa=0.0, q=0.0)
    rate = Z1_HEAT / params.capacity(Z2_HEAT) * (math.pi / params.length) ** 2
    params = replace(params, t_final=1.0 / rate, time_steps=200)
    x, u = integrate_heat(params, Z1_HEAT, Z2_HEAT, initial=lambda x: np.cos(math.pi * x / params.length))
    assert u[0] == pytest.approx(math.exp(-1.0), rel=0.01)
    np.testing.assert_allclose(u / u[0], np.cos(math.pi * x / params.length), atol=1e-8)


@pytest.mark.slow
def test_heat_spatial_order():
    values = []
    for cells in (96, 192, 384):
        params = Heat1DModel(t_final=1e-4, time_steps=20, cells=cells)
        values.append(heat1d_solution(Z1_HEAT, Z2_HEAT, (params.t_final, 0.0), params))
    order = math.log2(abs(values[0] - values[1]) / abs(values[1] - values[2]))
    assert order >= 1.9


def test_heat_flux_heats_left_boundary():
    params = Heat1DModel(t_final=1e-4, time_steps=20)
    x, u = integrate_heat(params, Z1_HEAT, Z2_HEAT)
    assert u[0] > u[-1] > 25.0
    assert np.all(np.diff(u) < 0)


def test_heat_step_count_policy():
    default = Heat1DModel()
    assert default.step_count(Z1_HEAT, Z2_HEAT) == default.max_steps
    short = Heat1DModel(t_final=1e-12)
    assert short.step_count(Z1_HEAT, Z2_HEAT) == short.min_steps
    assert Heat1DModel(time_steps=7).step_count(Z1_HEAT, Z2_HEAT) == 7


def test_heat_nonpositive_conductivity():
    params = Heat1DModel(t_final=1e-4, time_steps=5)
    with pytest.raises(PhysicalValidityError):
        integrate_heat(params, -0.1, Z2_HEAT)
    with pytest.raises(PhysicalValidityError):
        integrate_heat(params, Z1_HEAT, 0.0)


def test_heat_model_output():
    model = Heat1DModel(t_final=1e-4, time_steps=20, output=OutputFunctional.indicator(980.0, None))
    assert model(Z1_HEAT, Z2_HEAT) == 0.0
    hot = replace(model, output=OutputFunctional.indicator(25.0, None))
    np.testing.assert_array_equal(hot(np.array([Z1_HEAT, 0.005]), Z2_HEAT), [1.0, 1.0])


# Registry

def test_build_model():
    model = build_model('decay', {'t': 1.0, 'k': 1.0, 'g': {'scale': 1.0, 'shift': 0.0}}, OutputFunctional())
    assert isinstance(model, DecayModel)
    assert isinstance(build_model('constant', {'value': 2.0}, OutputFunctional()), ConstantModel)
    heat = build_model('heat1d', {'cells': 64, 'time_steps': 10}, OutputFunctional())
    assert heat.cells == 64 and not heat.vectorized


def test_build_model_rejects_unknown():
    with pytest.raises(ParameterDomainError):
        build_model('pendulum', {}, OutputFunctional())
    with pytest.raises(ParameterDomainError):
        build_model('oscillator', {'mass': 1.0}, OutputFunctional())


def test_constant_model_broadcasts():
    values = ConstantModel(value=3.0)(np.zeros((4, 1)), np.zeros((1, 5)))
    assert values.shape == (4, 5) and np.all(values == 3.0)
