"""Tests for presentations, the Hopf structure maps and admissibility of alpha."""

import sys
from fractions import Fraction
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent.parent.resolve()
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from src.hopfcorr.core.errors import IrrationalPower, ParseError, SingularGamma
from src.hopfcorr.core.hopf import (alpha_apply, antipode, antipode_degree, coproduct_degree, delta, delta2,
                                    epsilon, gamma, gamma_inverse, twisted_antipode, verify_admissible,
                                    verify_hopf_axioms, word_eigenvalue)
from src.hopfcorr.core.ncalg import TensorPoly, mul
from src.hopfcorr.core.scalars import Scalar
from src.hopfcorr.utils.presets import PRESETS, apply_alpha, load_presentation, validate_presentation


@pytest.mark.parametrize("name", PRESETS)
def test_presets_validate(name):
    """Every shipped preset is confluent, a Hopf *-algebra and has an admissible alpha."""
    P = load_presentation(name, validate=False)
    report = validate_presentation(P)
    assert report.passed, f"{name}: {[(c.name, c.witness) for c in report.failures()]}"


def test_suq2_structure_maps():
    P = load_presentation('suq2')
    a, c = P.system.gen('a'), P.system.gen('c')
    q = Fraction(1, 2)
    assert epsilon(P, a) == Scalar(1)
    assert epsilon(P, c) == Scalar(0)
    assert antipode(P, c) == c.scale(Scalar(-q))
    expected = TensorPoly.simple([a, a]) - TensorPoly.simple([P.system.gen('c*'), c], Scalar(q))
    assert delta(P, a) == expected
    assert antipode_degree(P) == 1
    assert coproduct_degree(P) == 1


def test_delta_is_multiplicative():
    P = load_presentation('suq2')
    a, cs = P.system.gen('a'), P.system.gen('c*')
    assert delta(P, mul(a, cs)) == delta(P, a) * delta(P, cs)


def test_twisted_antipode_is_antimultiplicative():
    P = load_presentation('suq2')
    x, y = P.system.gen('c'), P.system.gen('a*')
    assert twisted_antipode(P, mul(x, y)) == mul(twisted_antipode(P, y), twisted_antipode(P, x))


def test_alpha_is_tau_half_on_suq2():
    """The preset alpha scales c by 1/q, the square root of its modular weight."""
    P = load_presentation('suq2')
    c = P.system.index['c']
    assert word_eigenvalue(P, (c,)) == Scalar(2)
    assert P.with_tau(Fraction(1, 2)).alpha_scalings == P.alpha_scalings
    assert not P.is_kac()
    with pytest.raises(IrrationalPower):
        P.with_tau(Fraction(1, 4))


def test_gamma_inverse_undoes_gamma():
    P = load_presentation('u2-weighted')
    x = P.system.word('U12 U11*', Scalar(3)) + P.system.gen('det')
    assert gamma_inverse(P, gamma(P, x)) == x
    assert alpha_apply(P, P.system.gen('U12')) == P.system.gen('U12').scale(Scalar(2))


def test_parameter_overrides():
    P = load_presentation('suq2?q=1/3')
    assert P.parameters['q'] == Scalar(Fraction(1, 3))
    assert word_eigenvalue(P, (P.system.index['c'],)) == Scalar(3)
    with pytest.raises(ParseError):
        load_presentation('suq2?p=2')
    with pytest.raises(ParseError):
        load_presentation('no-such-preset')


def test_identity_alpha_choice():
    P = apply_alpha(load_presentation('suq2'), 'id')
    assert P.alpha_label == 'id'
    assert all(s == Scalar(1) for s in P.alpha_scalings.values())
    assert verify_admissible(P, 2).passed
    with pytest.raises(ParseError):
        apply_alpha(P, 'sideways')


def test_negative_alpha_is_not_admissible():
    """alpha(u) = -u makes id + alpha singular on u."""
    P = load_presentation('c-z')
    minus = Scalar(-1)
    flipped = P.with_alpha({0: minus, 1: minus}, 'flip')
    report = verify_admissible(flipped, 2)
    assert not report.passed
    check = report.get('(iv) id + alpha is bijective')
    assert check is not None and check.passed is False
    assert check.witness == 'u: 1+(-1)=0', f"Witness was {check.witness}"
    with pytest.raises(SingularGamma):
        gamma_inverse(flipped, P.system.gen('u'))


def test_hopf_axioms_on_group_algebra():
    P = load_presentation('c-f2')
    report = verify_hopf_axioms(P, 3)
    assert report.passed, report.summary()
    assert report.data['words'] == 53


def test_triple_coproduct():
    cz = load_presentation('c-z')
    u = cz.system.gen('u')
    assert delta2(cz, u) == TensorPoly.simple([u, u, u])
    P = load_presentation('suq2')
    a = P.system.gen('a')
    assert delta2(P, a).rank == 3
