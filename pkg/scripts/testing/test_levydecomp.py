"""Tests for the Gaussian / non-Gaussian splitting."""

import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent.parent.resolve()
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from src.hopfcorr.analysis.gfcocycle import Cocycle, functional_from_cocycle
from src.hopfcorr.analysis.levydecomp import (check_parts_alpha_real, check_T_operators, decompose,
                                              gaussian_subspace, is_gaussian_cocycle, is_gaussian_functional)
from src.hopfcorr.core.linalg import SparseMatrix
from src.hopfcorr.core.scalars import Scalar
from src.hopfcorr.utils.presets import load_cocycle, load_functional, load_presentation
from src.hopfcorr.utils.storage import cocycle_from_dict


def test_gaussian_cocycle_is_all_gaussian():
    P = load_presentation('c-z')
    c = load_cocycle('gaussian-cocycle.json', P, preset='c-z')
    d = decompose(c)
    assert (len(d.G_basis), len(d.R_basis)) == (1, 0)
    assert d.P_G == SparseMatrix.identity(1, P.backend)
    assert not d.L_R.values, f"L_R should vanish, got {d.L_R.values}"
    assert is_gaussian_functional(d.L).passed
    assert is_gaussian_cocycle(c).passed


def test_sign_representation_is_purely_non_gaussian():
    """pi(u) = -1 fixes no vector, so the whole carrier is eta(K2)."""
    P = load_presentation('c-z')
    data = {'dim': 1, 'cutoff': 4, 'pi': {'u': [['-1']], 'u*': [['-1']]}, 'eta': {'u': ['1'], 'u*': ['1']}}
    c = cocycle_from_dict(data, P)
    assert gaussian_subspace(c) == []
    d = decompose(c)
    assert (len(d.G_basis), len(d.R_basis)) == (0, 1)
    assert not d.L_G.values
    assert d.report.passed


def test_word_length_is_not_gaussian():
    P = load_presentation('c-f2')
    L = load_functional('word-length.json', P, preset='c-f2')
    report = is_gaussian_functional(L, 2)
    assert not report.passed
    assert report.worst_residual() == 2.0


def test_u2_mixed_splitting():
    """diag(1, 1, -1) at det leaves e0, e1 Gaussian; eta(det) spans R."""
    P = load_presentation('u2-weighted')
    c = load_cocycle('mixed-cocycle.json', P, preset='u2-weighted')
    c = Cocycle(c.presentation, c.dim, c.pi_images, c.eta_images, 4, c.metric, c.name)
    d = decompose(c)
    assert (len(d.G_basis), len(d.R_basis)) == (2, 1)
    one = Scalar(1)
    assert d.P_G == SparseMatrix((3, 3), {0: {0: one}, 1: {1: one}}, P.backend)
    assert d.report.get('L = L_G + L_R').passed
    assert check_parts_alpha_real(d, 1).passed
    assert is_gaussian_cocycle(d.eta_G, 2).passed


@pytest.mark.slow
def test_gauss_tree_block_projection():
    """The Gaussian block of the F2 direct sum is exactly the first two coordinates."""
    P = load_presentation('c-f2')
    c = load_cocycle('gauss-tree.json', P, preset='c-f2')
    d = decompose(c)
    assert (len(d.G_basis), len(d.R_basis)) == (2, c.dim - 2)
    one = Scalar(1)
    assert d.P_G == SparseMatrix((c.dim, c.dim), {0: {0: one}, 1: {1: one}}, P.backend)
    assert d.report.passed, d.report.summary()
    assert is_gaussian_functional(d.L_G).passed
    assert check_T_operators(c).passed
