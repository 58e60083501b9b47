"""
CSV tables: risk curves, relative errors and convergence studies.

Every file starts with a comment line `# riskbound <version> config=<hash>`,
followed by the column header and one row per record in the given order.
Values carry CSV_SIGNIFICANT_DIGITS significant digits.
"""

import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from riskbound import __version__
from riskbound.artifacts.storage import read_text, write_text
from riskbound.config import CSV_HEADER, CSV_SIGNIFICANT_DIGITS, logger
from riskbound.riskbounds import RiskCurve
from riskbound.surrogate import ConvergenceRow

RELATIVE_ERROR_HEADER = "c,err_lambda,err_lambda1,err_lambda2"
CONVERGENCE_HEADER = "order,mean,second_moment,mean_error,second_moment_error"


def format_value(value: float) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"


def provenance_line(config_hash: str) -> str:
    return f"# riskbound {__version__} config={config_hash}"


def render_table(header: str, rows: Iterable[Sequence[float]], config_hash: str) -> str:
    lines = [provenance_line(config_hash), header]
    lines.extend(','.join(format_value(v) for v in row) for row in rows)
    return '\n'.join(lines) + '\n'


def write_table(file_path: Path, header: str, rows: Iterable[Sequence[float]], config_hash: str) -> int:
    """Write a table; returns the number of data rows."""
    rows = list(rows)
    write_text(file_path, render_table(header, rows, config_hash))
    logger.debug(f"[Storage] {len(rows)} rows -> {file_path}")
    return len(rows)


def write_curve(file_path: Path, curve: RiskCurve, config_hash: str) -> int:
    return write_table(file_path, CSV_HEADER, curve.rows(), config_hash)


def write_relative_errors(file_path: Path, table: NDArray, config_hash: str) -> int:
    return write_table(file_path, RELATIVE_ERROR_HEADER, table, config_hash)


def write_convergence(file_path: Path, rows: list[ConvergenceRow], config_hash: str) -> int:
    records = [(r.order, r.mean, r.second_moment, r.mean_error, r.second_moment_error) for r in rows]
    return write_table(file_path, CONVERGENCE_HEADER, records, config_hash)


def read_table(file_path: Path) -> tuple[str, list[str], NDArray]:
    """
    Parse a table written by this module.

    Returns:
        (provenance comment, column names, values as a float array)
    """
    lines = read_text(file_path).splitlines()
    comment, header, body = lines[0], lines[1], lines[2:]
    values = np.array([[float(v) for v in line.split(',')] for line in body]) if body else np.empty((0, header.count(',') + 1))
    return comment, header.split(','), values
