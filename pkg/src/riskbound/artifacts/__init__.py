"""
Locked JSON artifacts and CSV tables.
"""

from riskbound.artifacts.csvio import (
    CONVERGENCE_HEADER,
    RELATIVE_ERROR_HEADER,
    format_value,
    provenance_line,
    read_table,
    render_table,
    write_convergence,
    write_curve,
    write_relative_errors,
    write_table,
)
from riskbound.artifacts.storage import (
    SURROGATE_FORMAT,
    load_surrogate,
    read_json,
    read_text,
    save_surrogate,
    write_json,
    write_text,
)

__all__ = [
    'CONVERGENCE_HEADER',
    'RELATIVE_ERROR_HEADER',
    'SURROGATE_FORMAT',
    'format_value',
    'load_surrogate',
    'provenance_line',
    'read_json',
    'read_table',
    'read_text',
    'render_table',
    'save_surrogate',
    'write_convergence',
    'write_curve',
    'write_json',
    'write_relative_errors',
    'write_table',
]
