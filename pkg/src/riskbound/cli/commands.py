"""
Subcommand implementations. Each returns the process exit code.
"""

import json
import math
import time
from pathlib import Path

import numpy as np

from riskbound import __version__
from riskbound.artifacts import (
    format_value,
    save_surrogate,
    write_convergence,
    write_curve,
    write_json,
    write_relative_errors,
)
from riskbound.cli.experiment import ExperimentConfig
from riskbound.config import (
    MSG_CONVERGENCE_DONE,
    MSG_LIMIT_LINE,
    MSG_OPTIMIZE_LINE,
    MSG_RE_LINE,
    MSG_SWEEP_DONE,
    logger,
)
from riskbound.distributions import Distribution, compare_with_oracle
from riskbound.errors import ConfigurationError
from riskbound.riskbounds import (
    LAMBDA_FORMS,
    RiskConfig,
    conditional_config,
    finite_minimum_predicted,
    lambda1_c,
    lambda1_infinity,
    mc_estimate,
    optimal_c,
    relative_errors,
    risk_config,
    shift_dependence,
    sweep,
)
from riskbound.surrogate import (
    collocation_rule,
    compute_coefficients,
    convergence_study,
    mean,
    second_moment,
    solve_at_nodes,
    surrogate_evaluator,
)

REFERENCE_QUADRATURE_ORDER = 64


def build_risk_config(exp: ExperimentConfig, workers: int | None = None, exact: bool = False, c_grid=None) -> RiskConfig:
    """
    RiskConfig for an experiment: surrogate-backed when collocation orders are
    given (and exact is False), the exact model otherwise. A dependence block
    turns it into the (Z, Z2) configuration of the conditional forms.
    """
    model = exp.model.build()
    if exact or exp.collocation.orders is None:
        if not model.vectorized:
            raise ConfigurationError(f"{model.kind} models are solved node by node; the exact model cannot back a risk integral")
        evaluator = model
    else:
        started = time.perf_counter()
        rule = collocation_rule(exp.aleatoric, exp.epistemic, exp.collocation.orders)
        surrogate = compute_coefficients(solve_at_nodes(model, rule, exp.collocation.mode, workers))
        logger.info(f"[Surrogate] {model.kind}: degrees {surrogate.degrees}, mean {mean(surrogate):.12g} ({time.perf_counter() - started:.2f}s)")
        if exp.output.surrogate is not None:
            save_surrogate(exp.output.surrogate, surrogate, exp.config_hash)
        evaluator = surrogate_evaluator(surrogate, model.output)

    cfg = risk_config(evaluator, exp.aleatoric, exp.epistemic, exp.risk.orders, exp.risk.c_grid() if c_grid is None else c_grid)
    if exp.dependence is not None:
        dependence = shift_dependence(exp.dependence.base, cfg.aleatoric.order)
        cfg = conditional_config(cfg, dependence)
    return cfg


def resolve_budget(exp: ExperimentConfig) -> float:
    if exp.bound is None:
        raise ConfigurationError(f"{exp.source}: the 'bound' block (B or alternative) is required")
    B = exp.bound.resolve(exp.epistemic)
    logger.info(f"[Risk] B = {B:.12g}" + ('' if exp.bound.B is not None else f" = R({exp.bound.alternative} || {exp.epistemic})"))
    return B


def _require(path: Path | None, what: str, exp: ExperimentConfig) -> Path:
    if path is None:
        raise ConfigurationError(f"{exp.source}: no {what} path (set output.{what} or pass --out)")
    return Path(path)


def _print_summary(curve):
    for name, column in zip(curve.columns[1:], curve.rows().T[1:]):
        print(f"{name:>8}: min {format_value(float(column.min()))}, max {format_value(float(column.max()))}")


def cmd_sweep(exp: ExperimentConfig, out: Path | None = None, workers: int | None = None,
              c_grid=None, reference: bool = False, seed: int | None = None,
              mc_samples: tuple[int, int] | None = None) -> int:
    path = _require(out or exp.output.csv, 'csv', exp)
    cfg = build_risk_config(exp, workers, c_grid=c_grid)
    B = resolve_budget(exp) if exp.bound is not None else 0.0
    curve = sweep(cfg, B)
    rows = write_curve(path, curve, exp.config_hash)
    _print_summary(curve)
    logger.info(f"[CLI] {MSG_SWEEP_DONE.format(rows=rows, path=path)}")

    if reference:
        exact = sweep(build_risk_config(exp, workers, exact=True, c_grid=cfg.c_grid), B)
        relerr_path = path.with_name(path.name + '.relerr.csv')
        write_relative_errors(relerr_path, relative_errors(curve, exact), exp.config_hash)
        logger.info(f"[CLI] Relative errors against the exact model written to {relerr_path}")

    if seed is not None:
        n_outer, n_inner = mc_samples or (2000, 100)
        c = float(np.median(cfg.c_grid))
        for which, form in LAMBDA_FORMS.items():
            estimate = mc_estimate(cfg, which, c, n_outer, n_inner, seed)
            print(f"Monte Carlo form {which} at c={c:g}: {estimate.estimate:.9g} +- {estimate.stderr:.3g} (quadrature {form(cfg, c):.9g})")
    return 0


def cmd_optimize(exp: ExperimentConfig, which: str = 'all', out: Path | None = None,
                 workers: int | None = None, c_grid=None) -> int:
    path = out or exp.output.report
    cfg = build_risk_config(exp, workers, c_grid=c_grid)
    B = resolve_budget(exp)
    forms = list(LAMBDA_FORMS) if which == 'all' else [int(which)]

    report = {'config_hash': exp.config_hash, 'version': __version__, 'B': B, 'forms': []}
    for form in forms:
        result = optimal_c(cfg, form, B)
        predicted = finite_minimum_predicted(cfg, form, B)
        status = 'finite' if result.finite else 'infinite'
        print(MSG_OPTIMIZE_LINE.format(which=form, c_star=format_value(result.c_star), bound=result.bound_value, status=status))
        if result.finite != predicted:
            logger.warning(f"[Optimize] form {form}: search found a {status} c* but the criterion predicts otherwise")
        report['forms'].append({
            'which': form,
            'c_star': result.c_star if result.finite else 'inf',
            'bound': result.bound_value,
            'finite': result.finite,
            'iterations': result.iterations,
            'converged': result.converged,
            'finite_predicted': predicted,
        })
    if path is not None:
        write_json(Path(path), report)
    return 0


def _parse_distribution(spec: str) -> Distribution:
    """A distribution from inline JSON or from a JSON file."""
    candidate = Path(spec)
    text = candidate.read_text() if not spec.lstrip().startswith('{') and candidate.is_file() else spec
    try:
        return Distribution.from_dict(json.loads(text))
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Invalid distribution JSON {spec!r}: {e.msg}")


def cmd_re(p_spec: str, q_spec: str) -> int:
    p, q = _parse_distribution(p_spec), _parse_distribution(q_spec)
    closed, oracle, diff = compare_with_oracle(p, q)
    print(f"R({p} || {q})")
    print(MSG_RE_LINE.format(closed=format_value(closed), oracle=format_value(oracle), diff=format_value(diff)))
    return 0


def _reference_moments(exp: ExperimentConfig, workers: int | None = None) -> tuple[float, float]:
    spec = exp.convergence
    if isinstance(spec.reference, tuple):
        return spec.reference
    model = exp.model.build()
    if spec.reference == 'quadrature':
        if not model.vectorized:
            raise ConfigurationError(f"{model.kind} models cannot use a quadrature reference; use 'self'")
        grid = collocation_rule(exp.aleatoric, exp.epistemic, (REFERENCE_QUADRATURE_ORDER, spec.second_order or REFERENCE_QUADRATURE_ORDER))
        f = model if exp.collocation.mode == 'output' else model.state
        return grid.expectation(f), grid.expectation(lambda z1, z2: np.asarray(f(z1, z2)) ** 2)
    # self-convergence against the highest requested order
    top = max(spec.orders)
    rule = collocation_rule(exp.aleatoric, exp.epistemic, (top, spec.second_order or top))
    surrogate = compute_coefficients(solve_at_nodes(model, rule, exp.collocation.mode, workers))
    return mean(surrogate), second_moment(surrogate)


def cmd_surrogate_report(exp: ExperimentConfig, out: Path | None = None, workers: int | None = None) -> int:
    path = _require(out or exp.output.csv, 'csv', exp)
    reference = _reference_moments(exp, workers)
    rows = convergence_study(
        exp.model.build(),
        list(exp.convergence.orders),
        reference,
        (exp.aleatoric, exp.epistemic),
        exp.convergence.second_order,
        exp.collocation.mode,
        workers,
    )
    write_convergence(path, rows, exp.config_hash)
    for row in rows:
        print(f"order {row.order:>3}: mean error {format_value(row.mean_error)}, second moment error {format_value(row.second_moment_error)}")
    logger.info(f"[CLI] {MSG_CONVERGENCE_DONE.format(path=path)}")
    return 0


def cmd_limit(exp: ExperimentConfig, out: Path | None = None, workers: int | None = None, c_grid=None) -> int:
    path = out or exp.output.report
    cfg = build_risk_config(exp, workers, c_grid=c_grid)
    limit = lambda1_infinity(cfg)
    c_max = float(cfg.c_grid[-1])
    value = lambda1_c(cfg, c_max)
    gap = abs(limit - value)
    print(MSG_LIMIT_LINE.format(limit=limit, c_max=c_max, value=value, gap=gap))
    if path is not None:
        write_json(Path(path), {
            'config_hash': exp.config_hash,
            'version': __version__,
            'lambda1_infinity': limit,
            'c_max': c_max,
            'lambda1_at_c_max': value,
            'gap': gap if math.isfinite(gap) else None,
        })
    return 0
