"""Cocycle / functional correspondence, decomposition and corep matrices."""

from .gfcocycle import (
    Cocycle,
    GeneratingFunctional,
    attempt_functional,
    cocycle_from_functional,
    functional_from_cocycle,
    roundtrip_check,
    yields_coboundary,
)
from .levydecomp import Decomposition, decompose, is_gaussian_cocycle, is_gaussian_functional
from .coquant import (
    CorepFamily,
    conjugate_symmetrize,
    pinch_identity_check,
    properness_check,
    qbeta_identity_check,
)

__all__ = [
    'Cocycle',
    'GeneratingFunctional',
    'attempt_functional',
    'cocycle_from_functional',
    'functional_from_cocycle',
    'roundtrip_check',
    'yields_coboundary',
    'Decomposition',
    'decompose',
    'is_gaussian_cocycle',
    'is_gaussian_functional',
    'CorepFamily',
    'conjugate_symmetrize',
    'pinch_identity_check',
    'properness_check',
    'qbeta_identity_check',
]
