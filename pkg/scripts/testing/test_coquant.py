"""Tests for corepresentation matrices, properness and conjugate symmetrization."""

import sys
from fractions import Fraction
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent.parent.resolve()
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from src.hopfcorr.analysis.coquant import (NOT_PROPER, PROPER, Corep, CorepFamily, check_corep_family, pinch_average,
                                           cocycle_matrix, conjugate_symmetrize, functional_matrix,
                                           group_element_family, hermitian_check, pinch_identity_check,
                                           properness_check, qbeta_identity_check, symmetrization_gain_check)
from src.hopfcorr.analysis.gfcocycle import Cocycle, functional_from_cocycle, is_alpha_real
from src.hopfcorr.core.errors import ContextMismatch
from src.hopfcorr.core.scalars import Scalar
from src.hopfcorr.utils.presets import load_cocycle, load_coreps, load_functional, load_presentation, tree_cocycle


@pytest.fixture(scope="module")
def suq2_symmetrized():
    P = load_presentation('suq2')
    c = load_cocycle('cocycle.json', P, preset='suq2')
    c_sym = conjugate_symmetrize(c)
    F = load_coreps('coreps.json', c_sym.presentation, preset='suq2')
    return c, c_sym, F


def test_symmetrized_cocycle_shape(suq2_symmetrized):
    c, c_sym, _ = suq2_symmetrized
    assert c_sym.dim == 2 * c.dim
    assert c_sym.presentation.alpha_label == 'tau:1/2'
    assert is_alpha_real(c_sym, 1).passed


def test_fundamental_corep_is_unitary(suq2_symmetrized):
    _, _, F = suq2_symmetrized
    report = check_corep_family(F)
    assert report.passed, [(c.name, c.witness) for c in report.failures()]
    assert F.get('1/2').spectral_groups() == [[0], [1]]
    assert F.top_level == 1


def test_qbeta_and_pinch_on_suq2(suq2_symmetrized):
    c, c_sym, F = suq2_symmetrized
    L = functional_from_cocycle(c_sym)
    assert hermitian_check(functional_matrix(L, F)).passed
    report = qbeta_identity_check(c_sym, L, F)
    assert report.passed, [(x.name, x.witness) for x in report.failures()]
    report = pinch_identity_check(c_sym, L, F)
    assert report.passed, [(x.name, x.witness) for x in report.failures()]
    assert symmetrization_gain_check(c, c_sym, F).passed


def test_qbeta_on_u2_with_trivial_q():
    P = load_presentation('u2-weighted')
    c = load_cocycle('mixed-cocycle.json', P, preset='u2-weighted')
    F = load_coreps('coreps.json', P, preset='u2-weighted')
    assert check_corep_family(F).passed
    L = functional_from_cocycle(c)
    assert qbeta_identity_check(c, L, F).passed
    report = pinch_identity_check(c, L, F)
    assert report.get('pinching trivial for Q = I').passed
    X = cocycle_matrix(c, F).gram
    assert X['det'] == [[Scalar(4)]]


def test_invalid_corep_is_rejected():
    P = load_presentation('c-z')
    u, us = P.system.gen('u'), P.system.gen('u*')
    bad = CorepFamily(P, [Corep('u+u*', 1, [[u + us]], [Scalar(1)], 1)])
    report = check_corep_family(bad)
    assert not report.passed
    assert report.get('Delta(u_ij) = sum_k u_ik (x) u_kj').witness == 'u+u*[0,0]'


def test_family_must_share_the_algebra():
    cz, f2 = load_presentation('c-z'), load_presentation('c-f2')
    c = load_cocycle('gaussian-cocycle.json', cz, preset='c-z')
    with pytest.raises(ContextMismatch):
        cocycle_matrix(c, group_element_family(f2, 1))


def test_tree_cocycle_is_proper():
    """(eta^g)^* eta^g = |g| on the ball, so M = 3 leaves the ball of radius 2 exceptional."""
    P = load_presentation('c-f2')
    c = tree_cocycle(P, 4)
    F = group_element_family(P, 4)
    X = cocycle_matrix(c, F).gram
    for beta in F:
        assert X[beta.label] == [[Scalar(beta.level)]], f"{beta.label}: {X[beta.label]}"
    report = properness_check(c, F, 3)
    assert report.data['verdict'] == PROPER
    assert report.data['exceptional_count'] == 1 + 4 + 12
    assert all(row['level'] <= 2 for row in report.data['rows'] if row['exceptional'])


def test_word_length_functional_is_proper():
    """-L(g) = |g|/2, so M = 3/2 leaves the ball of radius 2 exceptional."""
    P = load_presentation('c-f2')
    L = load_functional('word-length.json', P, preset='c-f2')
    report = properness_check(L, group_element_family(P, 4), Fraction(3, 2))
    assert report.passed
    assert report.data['form'] == 'functional'
    assert report.data['exceptional_count'] == 17


def test_word_length_functional_at_level_one():
    """M = 1 on -L(g) = |g|/2 leaves exactly the ball of radius 1 exceptional."""
    P = load_presentation('c-f2')
    L = load_functional('word-length.json', P, preset='c-f2')
    F = group_element_family(P, 4)
    report = properness_check(L, F, 1)
    assert report.passed
    assert report.data['form'] == 'functional'
    assert report.data['exceptional_count'] == 5
    assert sorted(report.data['exceptional']) == sorted(beta.label for beta in F if beta.level <= 1)


def test_zero_cocycle_is_not_proper():
    P = load_presentation('c-z')
    report = properness_check(Cocycle.zero(P, 1, 3), group_element_family(P, 3), 1)
    assert report.data['verdict'] == NOT_PROPER
    assert not report.passed
    assert report.data['certified_count'] == 0


def test_tree_cocycle_rejects_short_cutoff():
    P = load_presentation('c-f2')
    with pytest.raises(ValueError):
        tree_cocycle(P, 3, 2)
    with pytest.raises(ValueError):
        tree_cocycle(P, 0)


def test_pinching_drops_off_diagonal_blocks(suq2_symmetrized):
    """Q = diag(q^-1, q) on the fundamental corep, so only the diagonal survives."""
    _, c_sym, F = suq2_symmetrized
    pinched = pinch_average(functional_matrix(functional_from_cocycle(c_sym), F))
    m = pinched['1/2']
    assert m[0][1] == Scalar(0) and m[1][0] == Scalar(0)
