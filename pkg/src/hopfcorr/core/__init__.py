"""Core algebra: scalars, rewriting, Hopf structure maps and reports."""

from .errors import HopfCorrError, ParseError, ValidationFailed
from .scalars import Backend, Scalar, Tolerance, get_tolerance, scalar_parse, set_tolerance, tolerance
from .ncalg import NCPoly, RewriteSystem, TensorPoly, check_local_confluence, enumerate_normal_words
from .hopf import Presentation, verify_admissible, verify_hopf_axioms
from .report import Report

__all__ = [
    'HopfCorrError',
    'ParseError',
    'ValidationFailed',
    'Backend',
    'Scalar',
    'Tolerance',
    'get_tolerance',
    'scalar_parse',
    'set_tolerance',
    'tolerance',
    'NCPoly',
    'RewriteSystem',
    'TensorPoly',
    'check_local_confluence',
    'enumerate_normal_words',
    'Presentation',
    'verify_admissible',
    'verify_hopf_axioms',
    'Report',
]
