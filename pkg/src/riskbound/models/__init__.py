"""
Example systems F(z1, z2) = h(u(z1, z2)) and the model contract.
"""

from riskbound.errors import ParameterDomainError
from riskbound.models.base import AffineMap, AnalyticModel, ConstantModel, Model
from riskbound.models.decay import DecayModel, decay_solution
from riskbound.models.heat import Heat1DModel, heat1d_solution, integrate_heat
from riskbound.models.oscillator import OscillatorModel, integrate_oscillator, oscillator_solution
from riskbound.models.output import OutputFunctional, OutputKind, apply_output

# JSON "kind" -> model class
MODEL_KINDS: dict[str, type[Model]] = {
    DecayModel.kind: DecayModel,
    OscillatorModel.kind: OscillatorModel,
    Heat1DModel.kind: Heat1DModel,
    ConstantModel.kind: ConstantModel,
}


def build_model(kind: str, params: dict, output: OutputFunctional) -> Model:
    """Instantiate a registered model kind from its JSON parameters."""
    cls = MODEL_KINDS.get(kind)
    if cls is None:
        raise ParameterDomainError(f"Unknown model kind {kind!r}; expected one of {sorted(MODEL_KINDS)}")
    return cls.from_params(params, output)


__all__ = [
    'AffineMap',
    'AnalyticModel',
    'ConstantModel',
    'DecayModel',
    'Heat1DModel',
    'MODEL_KINDS',
    'Model',
    'OscillatorModel',
    'OutputFunctional',
    'OutputKind',
    'apply_output',
    'build_model',
    'decay_solution',
    'heat1d_solution',
    'integrate_heat',
    'integrate_oscillator',
    'oscillator_solution',
]
