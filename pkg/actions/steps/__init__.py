"""Workflow steps for the acceptance pipeline."""

from .step1_verify_presets import verify_presets
from .step2_correspondence import run_correspondence
from .step3_decomposition import run_decomposition
from .step4_matrix_identities import run_matrix_identities
from .step5_properness import run_properness
from .step6_write_summary import write_summary

__all__ = [
    'verify_presets',
    'run_correspondence',
    'run_decomposition',
    'run_matrix_identities',
    'run_properness',
    'write_summary',
]
