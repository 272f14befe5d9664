"""Tests for the rewriting *-algebra and the exact linear algebra under it."""

import sys
from pathlib import Path
from unittest.mock import patch

PROJECT_ROOT = Path(__file__).parent.parent.parent.resolve()
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from src.hopfcorr.core.errors import ContextMismatch, ParseError, RuleOrderViolation
from src.hopfcorr.core.linalg import (EchelonBasis, SparseMatrix, SparseVector, fit_operator, ldl_factor, nullspace,
                                      orthogonal_basis, projector, rank)
from src.hopfcorr.core.ncalg import (Rule, RewriteSystem, TensorPoly, check_local_confluence,
                                     enumerate_normal_words, mul, normal_form, star)
from src.hopfcorr.core.scalars import Backend, Scalar

EXACT = Backend.EXACT
ONE = Scalar(1)


def group_system(pairs: int) -> RewriteSystem:
    """Free group on `pairs` letters: g g* -> 1 and g* g -> 1."""
    names, starred, rules = [], {}, []
    for k in range(pairs):
        g, gs = f"g{k}", f"g{k}*"
        names += [g, gs]
        starred[g], starred[gs] = gs, g
        i = 2 * k
        rules += [Rule((i, i + 1), (((), ONE),)), Rule((i + 1, i), (((), ONE),))]
    return RewriteSystem(names, starred, rules)


def vec(*values) -> SparseVector:
    return SparseVector.from_list([Scalar(v) for v in values], EXACT)


def dense(rows):
    return [[Scalar(x) for x in row] for row in rows]


def test_normal_form_cancels():
    S = group_system(1)
    w = S.parse_word("g0 g0* g0 g0")
    p = normal_form(S, {w: ONE})
    assert p == S.word("g0 g0"), f"Got {p}"
    assert mul(S.gen("g0"), S.gen("g0*")) == S.one()


def test_normal_form_is_idempotent():
    S = group_system(2)
    p = normal_form(S, {S.parse_word("g1 g0 g0* g1* g1"): Scalar(3), S.parse_word("g1"): Scalar(-1)})
    assert p == S.word("g1", Scalar(2))
    assert normal_form(S, p) == p


def test_star_is_antilinear_antimultiplicative():
    S = group_system(2)
    p = S.word("g0 g1", Scalar(0, 1))
    q = star(p)
    assert q == S.word("g1* g0*", Scalar(0, -1)), f"Got {q}"
    assert star(q) == p
    a, b = S.gen("g0"), S.gen("g1*")
    assert star(mul(a, b)) == mul(star(b), star(a))


def test_enumerate_reduced_words():
    """Reduced words of the free group on two letters: 1 + 4 + 12 + 36."""
    words = enumerate_normal_words(group_system(2), 3)
    assert len(words) == 53, f"Expected 53 words, got {len(words)}"
    assert words[0] == ()
    assert [len(w) for w in words] == sorted(len(w) for w in words)
    assert len(enumerate_normal_words(group_system(1), 3, 1)) == 6


def test_rule_must_decrease_order():
    with pytest.raises(RuleOrderViolation):
        RewriteSystem(["x", "x*"], {"x": "x*", "x*": "x"}, [Rule((0,), (((0, 0), ONE),))])


def test_star_pairing_must_be_involution():
    with pytest.raises(ParseError):
        RewriteSystem(["a", "b", "c"], {"a": "b", "b": "c", "c": "a"}, [])
    with pytest.raises(ParseError):
        group_system(1).parse_word("h")


def test_systems_do_not_mix():
    with pytest.raises(ContextMismatch):
        group_system(1).gen("g0") + group_system(1).gen("g0")


def test_tensor_product_multiplies_legs():
    S = group_system(1)
    u, us = S.gen("g0"), S.gen("g0*")
    t = TensorPoly.simple([u, u]) * TensorPoly.simple([us, us])
    assert t == TensorPoly.unit(S, 2)


def test_local_confluence():
    assert check_local_confluence(group_system(2), 4).passed


def test_local_confluence_finds_critical_pair():
    """b a -> a with b b -> a: the word b b a reduces to a a and to a."""
    S = RewriteSystem(["a", "b"], {"a": "a", "b": "b"},
                      [Rule((1, 0), (((0,), ONE),)), Rule((1, 1), (((0,), ONE),))])
    report = check_local_confluence(S, 3)
    assert not report.passed
    assert report.get("critical pair b b a") is not None, report.summary()
    with pytest.raises(ValueError):
        check_local_confluence(S, 1)


def test_ldl_factor_detects_psd():
    fac = ldl_factor(dense([[2, 1], [1, 2]]), EXACT)
    assert fac.psd and fac.rank == 2
    fac = ldl_factor(dense([[1, 1], [1, 1]]), EXACT)
    assert fac.psd and fac.rank == 1
    fac = ldl_factor(dense([[1, 2], [2, 1]]), EXACT)
    assert not fac.psd and fac.witness


def test_rank_and_nullspace():
    assert rank([vec(1, 0, 1), vec(0, 1, 1), vec(1, 1, 2)], 3, EXACT) == 2
    basis = nullspace(dense([[1, 1, 0]]), 3, EXACT)
    assert len(basis) == 2
    for v in basis:
        assert (v[0] + v[1]).is_zero(), f"{v} is not in the kernel"


def test_projector_is_orthogonal():
    basis = orthogonal_basis([vec(1, 1, 0), vec(1, 0, 0)])
    assert len(basis) == 2
    P = projector(basis, 3, EXACT)
    assert P @ P == P
    assert P.matvec(vec(0, 0, 1)).is_zero()
    assert P.matvec(vec(2, 5, 0)) == vec(2, 5, 0)


def test_fit_operator_reports_inconsistency():
    fit = fit_operator([vec(1, 0), vec(0, 1)], [vec(0, 1), vec(1, 0)], 2, 2, EXACT)
    assert fit.consistent
    assert fit.matrix == SparseMatrix.from_dense(dense([[0, 1], [1, 0]]), EXACT)
    fit = fit_operator([vec(1, 0), vec(2, 0)], [vec(1, 0), vec(0, 1)], 2, 2, EXACT)
    assert not fit.consistent and fit.witness == 1


def test_reduction_cache_is_bounded():
    S = group_system(2)
    with patch('src.hopfcorr.core.ncalg.REDUCTION_CACHE_SIZE', 3):
        for k in range(1, 10):
            w = S.parse_word(' '.join(['g0'] * k + ['g1'] + ['g1*'] + ['g0*'] * k))
            assert normal_form(S, {w: ONE}) == S.one()
            assert len(S._cache) <= 3
    assert normal_form(S, {S.parse_word("g0 g1 g1* g1"): ONE}) == S.word("g0 g1")


def test_echelon_basis_vectors():
    basis = EchelonBasis(3, EXACT)
    assert basis.add(vec(1, 1, 0))
    assert not basis.add(vec(2, 2, 0))
    assert basis.add(vec(0, 1, 1))
    assert basis.vectors == [vec(1, 1, 0), vec(0, 1, 1)]
    assert basis.contains(vec(1, 2, 1))
