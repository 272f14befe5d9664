"""Environment configuration and logging setup."""

import logging
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PACKAGE_DATA_DIR = Path(__file__).resolve().parent.parent / 'data'

# Defaults (overridable through .env or the environment)
DEFAULT_EPS_NUM = 1e-9
DEFAULT_EPS_PSD = 1e-8
DEFAULT_CUTOFF = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logging.basicConfig(
    level=os.getenv('HOPFCORR_LOG_LEVEL', 'INFO').upper(),
    format=LOG_FORMAT,
)


def get_data_dir() -> Path:
    """Directory holding preset presentations and artifacts.

    Returns:
        HOPFCORR_DATA_DIR if set, otherwise the packaged data directory
    """
    custom = os.getenv('HOPFCORR_DATA_DIR', '')
    return Path(custom) if custom else PACKAGE_DATA_DIR


def get_output_dir() -> Path:
    """Directory the acceptance workflow writes reports to."""
    return Path(os.getenv('HOPFCORR_OUTPUT_DIR', 'output'))


def get_tolerance_defaults() -> tuple[float, float]:
    """Return (eps_num, eps_psd) from the environment.

    Raises:
        ValueError: If a variable is not a float
    """
    eps_num = os.getenv('HOPFCORR_EPS_NUM', '')
    eps_psd = os.getenv('HOPFCORR_EPS_PSD', '')
    try:
        return (
            float(eps_num) if eps_num else DEFAULT_EPS_NUM,
            float(eps_psd) if eps_psd else DEFAULT_EPS_PSD,
        )
    except ValueError as e:
        raise ValueError(f"Invalid tolerance in environment: {e}") from e


def get_default_cutoff() -> int:
    """Default truncation degree (HOPFCORR_CUTOFF, else 3)."""
    value = os.getenv('HOPFCORR_CUTOFF', '')
    return int(value) if value else DEFAULT_CUTOFF


def set_log_level(level: str) -> None:
    """Change the root log level at runtime."""
    logging.getLogger().setLevel(level.upper())
