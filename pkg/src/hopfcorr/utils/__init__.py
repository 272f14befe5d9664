"""Utility functions for configuration and tabular output."""

from .config import (
    get_data_dir,
    get_output_dir,
    get_tolerance_defaults,
    get_default_cutoff,
    set_log_level,
)
from .tables import (
    report_frame,
    reports_frame,
    rows_frame,
    summary_frame,
    write_table,
)

__all__ = [
    'get_data_dir',
    'get_output_dir',
    'get_tolerance_defaults',
    'get_default_cutoff',
    'set_log_level',
    'report_frame',
    'reports_frame',
    'rows_frame',
    'summary_frame',
    'write_table',
]
