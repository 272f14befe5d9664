"""hopfcorr - cocycles and generating functionals on Hopf *-algebras.

The package computes, verifies and round-trips the correspondence between
alpha-real cocycles and S_alpha-invariant generating functionals on presented
Hopf *-algebras, splits cocycles into Gaussian and non-Gaussian parts, and
reads both through corepresentation matrices.

Example:
    >>> from hopfcorr import load_presentation, load_cocycle, functional_from_cocycle
    >>>
    >>> P = load_presentation('c-z')
    >>> c = load_cocycle('gaussian-cocycle.json', P, preset='c-z')
    >>> L = functional_from_cocycle(c)
    >>> str(L.value((0, 0)))
    '-2'
"""

from .core import Backend, HopfCorrError, Presentation, Report, Scalar, ValidationFailed
from .analysis import (
    Cocycle,
    GeneratingFunctional,
    CorepFamily,
    cocycle_from_functional,
    decompose,
    functional_from_cocycle,
    properness_check,
    roundtrip_check,
)
from .utils.presets import load_cocycle, load_coreps, load_functional, load_presentation

__version__ = "0.1.0"

__all__ = [
    'Backend',
    'HopfCorrError',
    'Presentation',
    'Report',
    'Scalar',
    'ValidationFailed',
    'Cocycle',
    'GeneratingFunctional',
    'CorepFamily',
    'cocycle_from_functional',
    'decompose',
    'functional_from_cocycle',
    'properness_check',
    'roundtrip_check',
    'load_cocycle',
    'load_coreps',
    'load_functional',
    'load_presentation',
]
