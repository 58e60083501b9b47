"""
Experiment configuration: JSON files validated into frozen dataclasses.

Unknown keys are rejected and every error names the JSON path and the line
of the offending key.
"""

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from riskbound.config import C_MAX, C_MIN, C_POINTS, COLLOCATION_ORDER_INDICATOR, COLLOCATION_ORDER_SMOOTH
from riskbound.distributions import Distribution
from riskbound.errors import ConfigurationError, RiskBoundError
from riskbound.models import MODEL_KINDS, Model, OutputFunctional, build_model
from riskbound.riskbounds import TRANSFORMS, ambiguity_radius, log_c_grid
from riskbound.surrogate.collocation import MODES

CONVERGENCE_REFERENCES = ('self', 'quadrature')


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    params: dict
    output: OutputFunctional

    def build(self) -> Model:
        return build_model(self.kind, self.params, self.output)


@dataclass(frozen=True)
class DependenceSpec:
    kind: str
    base: Distribution


@dataclass(frozen=True)
class CollocationSpec:
    orders: tuple[int, int] | None = None  # None: integrate the exact model
    mode: str = 'output'


def default_collocation_orders(output: OutputFunctional) -> tuple[int, int]:
    """Orders used when a config omits collocation.orders."""
    n = COLLOCATION_ORDER_SMOOTH if output.smooth else COLLOCATION_ORDER_INDICATOR
    return (n, n)


@dataclass(frozen=True)
class RiskSpec:
    orders: tuple[int, int] | None = None
    c_min: float = C_MIN
    c_max: float = C_MAX
    points: int = C_POINTS

    def c_grid(self):
        return log_c_grid(self.c_min, self.c_max, self.points)


@dataclass(frozen=True)
class BoundSpec:
    B: float | None = None
    alternative: Distribution | None = None

    def resolve(self, nominal: Distribution) -> float:
        """B itself, or R(alternative || nominal)."""
        if self.B is not None:
            return self.B
        return ambiguity_radius(self.alternative, nominal)


@dataclass(frozen=True)
class ConvergenceSpec:
    orders: tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8)
    second_order: int | None = None
    reference: tuple[float, float] | str = 'self'


@dataclass(frozen=True)
class OutputSpec:
    csv: Path | None = None
    report: Path | None = None
    surrogate: Path | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    source: Path
    config_hash: str
    model: ModelSpec
    aleatoric: Distribution
    epistemic: Distribution
    dependence: DependenceSpec | None
    collocation: CollocationSpec
    risk: RiskSpec
    bound: BoundSpec | None
    convergence: ConvergenceSpec
    output: OutputSpec


class _Reader:
    """Walks the parsed JSON, tracking paths and key lines for error messages."""

    def __init__(self, text: str):
        self.text = text

    def line_of(self, path: tuple[str, ...]) -> int | None:
        """Line of the last key in path, found by scanning the keys in order."""
        position = 0
        for key in path:
            if key.isdigit():
                continue
            match = re.compile(r'"' + re.escape(key) + r'"\s*:').search(self.text, position)
            if match is None:
                return None
            position = match.start()
        return self.text.count('\n', 0, position) + 1 if path else None

    def fail(self, path: tuple[str, ...], message: str):
        where = '.'.join(path) or '<root>'
        raise ConfigurationError(f"{where}: {message}", self.line_of(path))

    def object(self, value: Any, path: tuple[str, ...], required: set[str], optional: set[str]) -> dict:
        if not isinstance(value, dict):
            self.fail(path, f"expected an object, got {type(value).__name__}")
        for key in value:
            if key not in required | optional:
                self.fail(path + (key,), f"unknown key (allowed: {', '.join(sorted(required | optional))})")
        for key in sorted(required - set(value)):
            self.fail(path, f"missing required key {key!r}")
        return value

    def number(self, value: Any, path: tuple[str, ...], positive: bool = False) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, f"expected a number, got {value!r}")
        if positive and not value > 0:
            self.fail(path, f"must be positive, got {value!r}")
        return float(value)

    def integer(self, value: Any, path: tuple[str, ...], minimum: int = 1) -> int:
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            self.fail(path, f"expected an integer >= {minimum}, got {value!r}")
        return value

    def orders(self, value: Any, path: tuple[str, ...]) -> tuple[int, int] | None:
        if value is None:
            return None
        if not isinstance(value, list) or len(value) != 2:
            self.fail(path, f"expected [n1, n2] or null, got {value!r}")
        return tuple(self.integer(v, path) for v in value)

    def distribution(self, value: Any, path: tuple[str, ...]) -> Distribution:
        if not isinstance(value, dict):
            self.fail(path, "expected a distribution object")
        try:
            return Distribution.from_dict(value)
        except (RiskBoundError, TypeError, ValueError) as e:
            self.fail(path, str(e))

    def path(self, value: Any, path: tuple[str, ...]) -> Path | None:
        if value is None:
            return None
        if not isinstance(value, str) or not value:
            self.fail(path, f"expected a file path or null, got {value!r}")
        return Path(value)


def config_hash(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()[:12]


def parse_experiment(text: str, source: Path = Path('<string>'), digest: str | None = None) -> ExperimentConfig:
    """
    Validate an experiment JSON document.

    Raises:
        ConfigurationError: On malformed JSON, unknown or missing keys and out-of-range values
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{source}: invalid JSON: {e.msg} (column {e.colno})", e.lineno)

    r = _Reader(text)
    root = r.object(data, (), {'model', 'aleatoric', 'epistemic'},
                    {'dependence', 'collocation', 'risk', 'bound', 'convergence', 'output'})

    m = r.object(root['model'], ('model',), {'kind'}, {'output', 'params'})
    if m['kind'] not in MODEL_KINDS:
        r.fail(('model', 'kind'), f"unknown model kind {m['kind']!r} (known: {', '.join(sorted(MODEL_KINDS))})")
    out = r.object(m.get('output', {'kind': 'identity'}), ('model', 'output'), {'kind'}, {'lower', 'upper'})
    try:
        output = OutputFunctional.from_dict(out)
    except (RiskBoundError, ValueError) as e:
        r.fail(('model', 'output'), str(e))
    params = m.get('params', {})
    if not isinstance(params, dict):
        r.fail(('model', 'params'), "expected an object")
    model = ModelSpec(m['kind'], params, output)
    try:
        model.build()
    except (RiskBoundError, TypeError, ValueError) as e:
        r.fail(('model', 'params'), str(e))

    aleatoric = r.distribution(root['aleatoric'], ('aleatoric',))
    epistemic = r.distribution(root['epistemic'], ('epistemic',))

    dependence = None
    if root.get('dependence') is not None:
        d = r.object(root['dependence'], ('dependence',), {'kind', 'base'}, set())
        if d['kind'] not in TRANSFORMS:
            r.fail(('dependence', 'kind'), f"unknown dependence {d['kind']!r} (known: {', '.join(TRANSFORMS)})")
        dependence = DependenceSpec(d['kind'], r.distribution(d['base'], ('dependence', 'base')))

    c = r.object(root.get('collocation', {}), ('collocation',), set(), {'orders', 'mode'})
    mode = c.get('mode', 'output')
    if mode not in MODES:
        r.fail(('collocation', 'mode'), f"expected one of {', '.join(MODES)}, got {mode!r}")
    if 'orders' in c:
        collocation = CollocationSpec(r.orders(c['orders'], ('collocation', 'orders')), mode)
    else:
        collocation = CollocationSpec(default_collocation_orders(output), mode)
    if collocation.orders is None and not model.build().vectorized:
        r.fail(('collocation', 'orders'), f"{model.kind} models are solved node by node and need collocation orders")

    k = r.object(root.get('risk', {}), ('risk',), set(), {'orders', 'c_grid'})
    g = r.object(k.get('c_grid', {}), ('risk', 'c_grid'), set(), {'min', 'max', 'points'})
    risk = RiskSpec(
        r.orders(k.get('orders'), ('risk', 'orders')),
        r.number(g.get('min', C_MIN), ('risk', 'c_grid', 'min'), positive=True),
        r.number(g.get('max', C_MAX), ('risk', 'c_grid', 'max'), positive=True),
        r.integer(g.get('points', C_POINTS), ('risk', 'c_grid', 'points'), minimum=2),
    )
    if risk.c_max <= risk.c_min:
        r.fail(('risk', 'c_grid', 'max'), f"must exceed min ({risk.c_min:g})")

    bound = None
    if root.get('bound') is not None:
        b = r.object(root['bound'], ('bound',), set(), {'B', 'alternative'})
        if len(b) != 1:
            r.fail(('bound',), "give exactly one of 'B' or 'alternative'")
        if 'B' in b:
            value = r.number(b['B'], ('bound', 'B'))
            if value < 0:
                r.fail(('bound', 'B'), f"must be nonnegative, got {value:g}")
            bound = BoundSpec(B=value)
        else:
            bound = BoundSpec(alternative=r.distribution(b['alternative'], ('bound', 'alternative')))

    v = r.object(root.get('convergence', {}), ('convergence',), set(), {'orders', 'second_order', 'reference'})
    orders = v.get('orders', list(ConvergenceSpec.orders))
    if not isinstance(orders, list) or not orders:
        r.fail(('convergence', 'orders'), "expected a non-empty list of orders")
    second_order = v.get('second_order')
    reference = v.get('reference', 'self')
    if isinstance(reference, list):
        if len(reference) != 2:
            r.fail(('convergence', 'reference'), "expected [mean, second_moment]")
        reference = tuple(r.number(x, ('convergence', 'reference')) for x in reference)
    elif reference not in CONVERGENCE_REFERENCES:
        r.fail(('convergence', 'reference'), f"expected [mean, second_moment] or one of {', '.join(CONVERGENCE_REFERENCES)}")
    convergence = ConvergenceSpec(
        tuple(r.integer(n, ('convergence', 'orders')) for n in orders),
        None if second_order is None else r.integer(second_order, ('convergence', 'second_order')),
        reference,
    )

    o = r.object(root.get('output', {}), ('output',), set(), {'csv', 'report', 'surrogate'})
    output_spec = OutputSpec(*(r.path(o.get(key), ('output', key)) for key in ('csv', 'report', 'surrogate')))

    return ExperimentConfig(
        source=source,
        config_hash=digest or config_hash(text.encode()),
        model=model,
        aleatoric=aleatoric,
        epistemic=epistemic,
        dependence=dependence,
        collocation=collocation,
        risk=risk,
        bound=bound,
        convergence=convergence,
        output=output_spec,
    )


def load_experiment(path: Path) -> ExperimentConfig:
    """Read and validate an experiment file; the hash covers its exact bytes."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ConfigurationError(f"Cannot read config {path}: {e.strerror}")
    return parse_experiment(raw.decode('utf-8'), path, config_hash(raw))
