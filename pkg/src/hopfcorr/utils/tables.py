"""Tabular views of reports (pandas)."""

from pathlib import Path
from typing import Iterable

import pandas as pd

from ..core.report import Report

CHECK_COLUMNS = ['Command', 'Check', 'Passed', 'Residual', 'Witness']


def _check_rows(report: Report) -> list[dict]:
    return [{
        'Command': report.command,
        'Check': c.name,
        'Passed': c.passed,
        'Residual': c.residual,
        'Witness': c.witness,
    } for c in report.checks]


def report_frame(report: Report) -> pd.DataFrame:
    """One row per check."""
    return pd.DataFrame(_check_rows(report), columns=CHECK_COLUMNS)


def reports_frame(reports: Iterable[Report]) -> pd.DataFrame:
    """One row per check of every report; reports without checks add no rows."""
    rows = [row for r in reports for row in _check_rows(r)]
    return pd.DataFrame(rows, columns=CHECK_COLUMNS)


def rows_frame(rows: list[dict]) -> pd.DataFrame:
    """Per-corep rows of a properness report, sorted by level then label."""
    df = pd.DataFrame(rows)
    if df.empty:
        return df
    return df.sort_values(['level', 'label'], kind='stable').reset_index(drop=True)


def summary_frame(reports: Iterable[Report]) -> pd.DataFrame:
    """One row per report: status, check counts and worst residual."""
    rows = [{
        'Command': r.command,
        'Status': r.status,
        'Checks': len(r.checks),
        'Failed': len(r.failures()),
        'Worst_Residual': r.worst_residual(),
    } for r in reports]
    return pd.DataFrame(rows, columns=['Command', 'Status', 'Checks', 'Failed', 'Worst_Residual'])


def write_table(df: pd.DataFrame, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False)
    return path
