"""
Tests for the experiment config reader and the riskbound subcommands.
"""

import json
import math
import re
import time
from pathlib import Path

import numpy as np
import pytest

from riskbound.artifacts import load_surrogate, read_json, read_table
import riskbound.cli.main as cli_main_module
from riskbound.cli import load_experiment, parse_experiment
from riskbound.cli.main import main
from riskbound.config import CSV_HEADER
from riskbound.errors import ConfigurationError, SolverError

UNIT = {"kind": "uniform", "lo": 0.0, "hi": 1.0}
BETA15 = {"kind": "beta", "alpha": 1.5, "beta": 1.5, "lo": 0.0, "hi": 1.0}
SQUARE_MEAN = (1 - math.exp(-2)) / 6
CONFIGS_DIR = Path(__file__).parent.parent / 'configs'
CONFIGS = sorted(CONFIGS_DIR.glob('*.json'))


def _constant(value=1.5, **extra):
    config = {
        "model": {"kind": "constant", "params": {"value": value}},
        "aleatoric": UNIT,
        "epistemic": UNIT,
        "collocation": {"orders": None},
        "risk": {"orders": [4, 4], "c_grid": {"min": 0.1, "max": 100, "points": 7}},
    }
    config.update(extra)
    return config


def _square(**extra):
    config = {
        "model": {"kind": "decay", "output": {"kind": "square"}, "params": {"t": 1.0}},
        "aleatoric": UNIT,
        "epistemic": UNIT,
        "collocation": {"orders": None},
        "risk": {"orders": [16, 16], "c_grid": {"min": 0.01, "max": 10, "points": 9}},
    }
    config.update(extra)
    return config


def _write(tmp_path, config, name='experiment.json'):
    path = tmp_path / name
    path.write_text(json.dumps(config, indent=2))
    return path


def _run(*argv):
    return main([str(a) for a in argv])


def _example1_indicator(command, tmp_path, *extra):
    report = tmp_path / f'{command}.json'
    assert _run(command, '--config', CONFIGS_DIR / 'example1_indicator.json', '--out', report, *extra) == 0
    return read_json(report)


# --- config reader ---


BAD_KEY = """{
  "model": {"kind": "constant", "params": {"value": 1.0}},
  "aleatoric": {"kind": "uniform", "lo": 0, "hi": 1},
  "epistemic": {"kind": "uniform", "lo": 0, "hi": 1},
  "risk": {"orders": [4, 4], "colour": 3}
}
"""


def test_unknown_key_reports_path_and_line():
    with pytest.raises(ConfigurationError, match=r"line 5: risk\.colour: unknown key") as info:
        parse_experiment(BAD_KEY)
    assert info.value.line == 5


def test_bad_distribution_reports_its_line():
    text = BAD_KEY.replace('"colour": 3', '"c_grid": {"points": 3}').replace(
        '"aleatoric": {"kind": "uniform", "lo": 0, "hi": 1}', '"aleatoric": {"kind": "uniform", "lo": 1, "hi": 0}')
    with pytest.raises(ConfigurationError, match=r"line 3: aleatoric"):
        parse_experiment(text)


def test_invalid_json_reports_line():
    with pytest.raises(ConfigurationError, match=r"line 2: .*invalid JSON"):
        parse_experiment('{\n  "model": ,\n}')


@pytest.mark.parametrize("patch,where", [
    ({"bound": {"B": 0.1, "alternative": UNIT}}, 'bound'),
    ({"bound": {"B": -1.0}}, r'bound\.B'),
    ({"risk": {"c_grid": {"min": 10, "max": 1}}}, r'risk\.c_grid\.max'),
    ({"collocation": {"mode": "fast"}}, r'collocation\.mode'),
    ({"dependence": {"kind": "rotate", "base": UNIT}}, r'dependence\.kind'),
    ({"model": {"kind": "pendulum"}}, r'model\.kind'),
])
def test_rejected_fields(patch, where):
    with pytest.raises(ConfigurationError, match=where):
        parse_experiment(json.dumps(_constant(**patch), indent=2))


def test_node_by_node_model_cannot_use_the_exact_model():
    config = _constant()
    config["model"] = {"kind": "heat1d", "output": {"kind": "identity"}}
    with pytest.raises(ConfigurationError, match='collocation orders'):
        parse_experiment(json.dumps(config))


@pytest.mark.parametrize("output,orders", [
    ({"kind": "square"}, (8, 8)),
    ({"kind": "identity"}, (8, 8)),
    ({"kind": "indicator", "lower": 0.8, "upper": 1.0}, (12, 12)),
])
def test_default_collocation_orders(output, orders):
    config = _square()
    config["model"]["output"] = output
    del config["collocation"]
    exp = parse_experiment(json.dumps(config))
    assert exp.collocation.orders == orders
    assert exp.collocation.mode == 'output'

    config["collocation"] = {"mode": "state"}
    assert parse_experiment(json.dumps(config)).collocation.orders == orders


def test_node_by_node_model_gets_default_orders():
    config = _constant()
    config["model"] = {"kind": "heat1d", "output": {"kind": "identity"}}
    del config["collocation"]
    assert parse_experiment(json.dumps(config)).collocation.orders == (8, 8)


@pytest.mark.parametrize("path", CONFIGS, ids=lambda p: p.stem)
def test_shipped_configs_parse(path):
    exp = load_experiment(path)
    assert exp.source == path
    assert exp.output.csv is not None
    assert exp.collocation.orders is not None or exp.model.build().vectorized


def test_parsed_experiment_fields():
    exp = parse_experiment(json.dumps(_square(bound={"alternative": BETA15})))
    assert exp.model.kind == 'decay'
    assert exp.collocation.orders is None
    assert exp.risk.orders == (16, 16)
    assert exp.bound.resolve(exp.epistemic) == pytest.approx(0.048417, abs=1e-5)
    assert len(exp.config_hash) == 12
    np.testing.assert_allclose(exp.risk.c_grid()[[0, -1]], [0.01, 10])


def test_missing_config_file_exits_2(tmp_path, capsys):
    assert _run('sweep', '--config', tmp_path / 'nope.json', '--out', tmp_path / 'x.csv') == 2
    assert capsys.readouterr().err.startswith('Error: ')


def test_config_error_exits_2_with_line(tmp_path, capsys):
    path = tmp_path / 'bad.json'
    path.write_text(BAD_KEY)
    assert _run('sweep', '--config', path, '--out', tmp_path / 'x.csv') == 2
    assert 'line 5' in capsys.readouterr().err


def test_numerical_failure_exits_3(tmp_path, capsys, monkeypatch):
    def failing(*args, **kwargs):
        raise SolverError("State became non-finite", 0.1, 0.2, 0.5)

    monkeypatch.setattr(cli_main_module, 'cmd_sweep', failing)
    assert _run('sweep', '--config', _write(tmp_path, _constant()), '--out', tmp_path / 'x.csv') == 3
    assert 'z1=0.1' in capsys.readouterr().err


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main(['plot'])
    assert info.value.code == 2


# --- sweep ---


def test_sweep_constant_model(tmp_path, capsys):
    out = tmp_path / 'constant.csv'
    assert _run('sweep', '--config', _write(tmp_path, _constant()), '--out', out) == 0
    comment, columns, values = read_table(out)
    assert re.fullmatch(r"# riskbound \S+ config=[0-9a-f]{12}", comment)
    assert ','.join(columns) == CSV_HEADER
    assert values.shape == (7, 7)
    np.testing.assert_allclose(values[:, 1:4], 1.5, rtol=1e-12)
    assert 'lambda' in capsys.readouterr().out


def test_sweep_square_ordering(tmp_path):
    out = tmp_path / 'square.csv'
    assert _run('sweep', '--config', _write(tmp_path, _square()), '--out', out) == 0
    _, columns, values = read_table(out)
    lam, lam1, lam2 = (values[:, columns.index(name)] for name in ('lambda', 'lambda1', 'lambda2'))
    assert np.all(lam1 <= lam2 + 1e-9)
    assert np.all(lam2 <= lam + 1e-9)
    assert lam[0] == pytest.approx(SQUARE_MEAN, abs=1e-3)
    # no bound block: bound columns equal the lambdas
    np.testing.assert_allclose(values[:, columns.index('bound')], lam)


def test_sweep_is_byte_identical(tmp_path):
    config = _write(tmp_path, _square(bound={"alternative": BETA15}))
    first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'
    assert _run('sweep', '--config', config, '--out', first) == 0
    assert _run('sweep', '--config', config, '--out', second) == 0
    assert first.read_bytes() == second.read_bytes()


def test_sweep_grid_flags(tmp_path):
    out = tmp_path / 'grid.csv'
    assert _run('sweep', '--config', _write(tmp_path, _constant()), '--out', out, '--c-points', 4) == 0
    _, _, values = read_table(out)
    np.testing.assert_allclose(values[:, 0], [0.1, 1.0, 10.0, 100.0], rtol=1e-9)


def test_sweep_reference_and_surrogate_artifact(tmp_path):
    artifact = tmp_path / 'surrogate.json'
    config = _square(collocation={"orders": [6, 4]}, output={"surrogate": str(artifact)})
    path = _write(tmp_path, config)
    out = tmp_path / 'surrogate.csv'
    assert _run('sweep', '--config', path, '--out', out, '--reference') == 0

    _, columns, errors = read_table(tmp_path / 'surrogate.csv.relerr.csv')
    assert columns == ['c', 'err_lambda', 'err_lambda1', 'err_lambda2']
    assert errors.shape == (9, 4)
    assert np.all(errors[:, 1:] < 1e-2)

    surrogate, config_hash = load_surrogate(artifact)
    assert surrogate.degrees == (5, 3)
    assert config_hash == parse_experiment(path.read_text()).config_hash


def test_sweep_monte_carlo_check(tmp_path, capsys):
    out = tmp_path / 'mc.csv'
    assert _run('sweep', '--config', _write(tmp_path, _square()), '--out', out,
                '--seed', 11, '--mc-samples', 200, 20) == 0
    lines = [line for line in capsys.readouterr().out.splitlines() if line.startswith('Monte Carlo')]
    assert len(lines) == 3


def test_sweep_without_output_path_exits_2(tmp_path, capsys):
    assert _run('sweep', '--config', _write(tmp_path, _constant())) == 2
    assert 'csv' in capsys.readouterr().err


# --- optimize ---


def test_optimize_constant_model_is_infinite(tmp_path, capsys):
    report = tmp_path / 'report.json'
    config = _write(tmp_path, _constant(bound={"B": 0.1}))
    assert _run('optimize', '--config', config, '--out', report, '--which', 1) == 0
    assert 'infinite' in capsys.readouterr().out
    data = read_json(report)
    assert data['B'] == 0.1
    [form] = data['forms']
    assert form['which'] == 1
    assert form['c_star'] == 'inf'
    assert form['finite'] is False
    assert form['bound'] == pytest.approx(1.5, abs=1e-6)


def test_optimize_zero_budget_is_nominal(tmp_path):
    report = tmp_path / 'report.json'
    assert _run('optimize', '--config', _write(tmp_path, _square(bound={"B": 0})), '--out', report) == 0
    forms = read_json(report)['forms']
    assert [f['which'] for f in forms] == [0, 1, 2]
    for form in forms:
        assert form['c_star'] == pytest.approx(0.01)
        assert form['bound'] == pytest.approx(SQUARE_MEAN, abs=1e-3)


def test_optimize_example1_indicator(tmp_path):
    started = time.perf_counter()
    data = _example1_indicator('optimize', tmp_path, '--which', '1')
    assert time.perf_counter() - started < 10
    assert data['B'] == pytest.approx(0.048417, abs=1e-5)
    (form,) = data['forms']
    assert form['which'] == 1 and form['finite'] and form['converged']
    assert 4.6 <= form['c_star'] <= 5.6
    assert 0.035 <= form['bound'] <= 0.045


def test_optimize_needs_bound(tmp_path, capsys):
    assert _run('optimize', '--config', _write(tmp_path, _constant())) == 2
    assert "'bound'" in capsys.readouterr().err


# --- re ---


def _re_values(capsys):
    out = capsys.readouterr().out
    closed = re.search(r"closed form = (\S+),", out).group(1)
    oracle = re.search(r"oracle = (\S+),", out).group(1)
    return closed, oracle


def test_re_beta_against_uniform(capsys):
    assert _run('re', json.dumps(BETA15), json.dumps(UNIT)) == 0
    closed, oracle = _re_values(capsys)
    assert float(closed) == pytest.approx(0.048417, abs=1e-5)
    assert float(oracle) == pytest.approx(float(closed), abs=1e-8)


def test_re_identical_laws(capsys):
    assert _run('re', json.dumps(UNIT), json.dumps(UNIT)) == 0
    closed, _ = _re_values(capsys)
    assert closed == '0'


def test_re_support_violation(capsys):
    assert _run('re', json.dumps({"kind": "uniform", "lo": 0, "hi": 2}), json.dumps(UNIT)) == 0
    closed, _ = _re_values(capsys)
    assert closed == 'inf'


def test_re_reads_files(tmp_path, capsys):
    p = _write(tmp_path, BETA15, 'p.json')
    assert _run('re', p, json.dumps(UNIT)) == 0
    closed, _ = _re_values(capsys)
    assert float(closed) == pytest.approx(0.048417, abs=1e-5)


def test_re_incompatible_pair_exits_2(capsys):
    p = {"kind": "binomial", "n": 3, "p": 0.5}
    q = {"kind": "binomial", "n": 5, "p": 0.5}
    assert _run('re', json.dumps(p), json.dumps(q)) == 2
    assert 'Error: ' in capsys.readouterr().err


# --- surrogate-report ---


def test_surrogate_report_decay_errors_decrease(tmp_path):
    config = {
        "model": {"kind": "decay", "params": {"g": {"scale": 0.0, "shift": 1.0}}},
        "aleatoric": {"kind": "gaussian", "mu": 0.0, "sigma": 1.0},
        "epistemic": UNIT,
        "convergence": {"orders": [2, 3, 4, 5], "second_order": 1,
                        "reference": [math.exp(0.5), math.exp(2.0)]},
    }
    out = tmp_path / 'convergence.csv'
    assert _run('surrogate-report', '--config', _write(tmp_path, config), '--out', out) == 0
    _, columns, values = read_table(out)
    assert columns[0] == 'order'
    np.testing.assert_array_equal(values[:, 0], [2, 3, 4, 5])
    for name in ('mean_error', 'second_moment_error'):
        errors = values[:, columns.index(name)]
        assert np.all(np.diff(errors) < 0)


def test_surrogate_report_order_one_has_error(tmp_path):
    config = _square(convergence={"orders": [1, 4], "reference": "quadrature"})
    out = tmp_path / 'convergence.csv'
    assert _run('surrogate-report', '--config', _write(tmp_path, config), '--out', out) == 0
    _, columns, values = read_table(out)
    errors = values[:, columns.index('mean_error')]
    assert errors[0] > 1e-2
    assert errors[1] < errors[0]


# --- limit ---


def test_limit_square(tmp_path, capsys):
    report = tmp_path / 'limit.json'
    config = _square(risk={"orders": [64, 64], "c_grid": {"min": 1, "max": 10000, "points": 5}})
    assert _run('limit', '--config', _write(tmp_path, config), '--out', report) == 0
    assert 'lambda1_infinity' in capsys.readouterr().out
    data = read_json(report)
    assert data['lambda1_infinity'] == pytest.approx((1 - math.exp(-2)) / 2, abs=1e-6)
    assert data['c_max'] == pytest.approx(1e4)
    assert data['gap'] <= 1e-2


def test_limit_example1_indicator(tmp_path):
    data = _example1_indicator('limit', tmp_path)
    assert data['lambda1_infinity'] < 1
    assert data['lambda1_infinity'] == pytest.approx(math.log(1.25), abs=1e-2)
    assert data['lambda1_at_c_max'] <= data['lambda1_infinity'] + 1e-9


def test_limit_constant_has_no_gap(tmp_path):
    report = tmp_path / 'limit.json'
    assert _run('limit', '--config', _write(tmp_path, _constant()), '--out', report) == 0
    data = read_json(report)
    assert data['lambda1_infinity'] == pytest.approx(1.5)
    assert data['gap'] == pytest.approx(0.0, abs=1e-12)


def test_limit_non_uniform_nominal_exits_2(tmp_path, capsys):
    config = _constant(epistemic={"kind": "beta", "alpha": 2, "beta": 2, "lo": 0.0, "hi": 1.0})
    assert _run('limit', '--config', _write(tmp_path, config)) == 2
    assert 'uniform' in capsys.readouterr().err
