"""Tests for the cocycle <-> generating functional correspondence."""

import sys
from fractions import Fraction
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent.parent.resolve()
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from src.hopfcorr.analysis.gfcocycle import (GeneratingFunctional, attempt_functional, check_cocycle_welldefined,
                                             check_generating, cocycle_from_functional, functional_from_cocycle,
                                             functional_reach, gram_matrix, is_alpha_real, is_salpha_invariant,
                                             eta_identities_check, restrict_to_span, roundtrip_check,
                                             same_gram, tau_reality_transfer, two_cocycle_check,
                                             two_form_agreement, yields_coboundary)
from src.hopfcorr.core.errors import DegreeExceeded, HypothesisViolated, NotConditionallyPositive
from src.hopfcorr.core.ncalg import enumerate_normal_words
from src.hopfcorr.core.scalars import Scalar
from src.hopfcorr.utils.presets import load_cocycle, load_functional, load_presentation
from src.hopfcorr.utils.storage import cocycle_from_dict


@pytest.fixture(scope="module")
def cz():
    return load_presentation('c-z')


@pytest.fixture(scope="module")
def gaussian(cz):
    return load_cocycle('gaussian-cocycle.json', cz, preset='c-z')


def test_gaussian_closed_form(cz, gaussian):
    """eta(u) = 1 gives L(u^n) = L(u*^n) = -n^2/2."""
    L = functional_from_cocycle(gaussian)
    assert functional_reach(gaussian) == 8
    assert (L.cutoff, L.degree) == (4, 8)
    for n in range(1, 9):
        expected = Scalar(Fraction(-n * n, 2))
        assert L.value((0,) * n) == expected, f"L(u^{n}) = {L.value((0,) * n)}"
        assert L.value((1,) * n) == expected, f"L(u*^{n}) = {L.value((1,) * n)}"
    assert L.value(()) == Scalar(0)


def test_gaussian_functional_is_generating(cz, gaussian):
    L = functional_from_cocycle(gaussian)
    assert check_generating(L).passed
    assert is_salpha_invariant(L).passed
    assert yields_coboundary(L, gaussian).passed


def test_gns_recovers_gram(cz, gaussian):
    """The GNS cocycle of L has <eta(u^m), eta(u^n)> = mn for signed exponents."""
    L = functional_from_cocycle(gaussian)
    eta = cocycle_from_functional(L)
    assert eta.dim == 1
    words = [(0,) * m for m in range(1, 5)] + [(1,) * m for m in range(1, 5)]
    powers = [1, 2, 3, 4, -1, -2, -3, -4]
    gram = gram_matrix(eta, words)
    for i, m in enumerate(powers):
        for j, n in enumerate(powers):
            assert gram[i][j] == Scalar(m * n), f"Gram({m}, {n}) = {gram[i][j]}"
    assert same_gram(gaussian, eta, words).passed


def test_roundtrip_shipped_functionals():
    cz = load_presentation('c-z')
    report = roundtrip_check(load_functional('gaussian.json', cz, preset='c-z'))
    assert report.passed, [(c.name, c.witness) for c in report.failures()]
    f2 = load_presentation('c-f2')
    report = roundtrip_check(load_functional('word-length.json', f2, preset='c-f2'))
    assert report.passed, [(c.name, c.witness) for c in report.failures()]


def test_identities_of_a_real_cocycle(gaussian):
    assert is_alpha_real(gaussian).passed
    assert two_form_agreement(gaussian).passed
    assert eta_identities_check(gaussian, 3).passed
    assert two_cocycle_check(gaussian, 3).passed


def test_u2_mixed_functional_values():
    """L(det) = -|eta(det)|^2 / 2 and L(U11) picks up the U12 leg of its coproduct."""
    P = load_presentation('u2-weighted')
    c = load_cocycle('mixed-cocycle.json', P, preset='u2-weighted')
    assert is_alpha_real(c, 2).passed
    L = functional_from_cocycle(c)
    det, u11 = P.system.index['det'], P.system.index['U11']
    assert L.value((det,)) == Scalar(-2)
    assert L.value((u11,)) == Scalar(Fraction(-1, 2))


def test_twisted_cocycle_is_not_real():
    """eta(a) = 1, eta(b) = i on F2 breaks alpha-reality and the functional diagnostics."""
    P = load_presentation('c-f2')
    c = load_cocycle('twisted.json', P, preset='c-f2')
    assert check_cocycle_welldefined(c).passed
    real = is_alpha_real(c, 1)
    assert not real.passed
    report = attempt_functional(c, 1)
    assert not report.passed
    assert report.worst_residual() > 1e-6


def test_broken_representation_is_reported(cz):
    data = {'dim': 1, 'cutoff': 2, 'pi': {'u': [['2']], 'u*': [['1']]}, 'eta': {'u': ['1'], 'u*': ['-1']}}
    report = check_cocycle_welldefined(cocycle_from_dict(data, cz))
    assert not report.passed
    assert report.get('pi respects relations').passed is False


def test_degenerate_cocycle_restricts_to_span(cz):
    data = {'dim': 2, 'cutoff': 3, 'eta': {'u': ['1', '1'], 'u*': ['-1', '-1']},
            'pi': {'u': [['1', '0'], ['0', '1']], 'u*': [['1', '0'], ['0', '1']]}}
    c = cocycle_from_dict(data, cz)
    report = check_cocycle_welldefined(c)
    assert report.passed and report.warnings, "Degenerate carrier should only warn"
    r = restrict_to_span(c)
    assert r.dim == 1
    assert r.metric == [Scalar(2)]
    assert same_gram(c, r, enumerate_normal_words(cz.system, 2, 1)).passed


def test_cutoff_is_enforced(gaussian):
    with pytest.raises(DegreeExceeded):
        gaussian.eta_word((0,) * 9)
    L = functional_from_cocycle(gaussian)
    with pytest.raises(DegreeExceeded):
        L.value((0,) * 9)


def test_positive_quadratic_is_not_conditionally_positive(cz):
    L = GeneratingFunctional.from_function(cz, lambda w: Fraction(len(w) ** 2, 2), 2)
    assert not check_generating(L).passed
    with pytest.raises(NotConditionallyPositive):
        cocycle_from_functional(L)


def test_tau_transfer_needs_t_not_half(gaussian):
    with pytest.raises(HypothesisViolated):
        tau_reality_transfer(gaussian, Fraction(1, 2), 1)


def test_tau_transfer_on_kac_algebra(gaussian):
    report = tau_reality_transfer(gaussian, 0, 1)
    assert report.passed, report.summary()
    assert report.data['kac'] is True
