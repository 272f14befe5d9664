"""Tests for scalar arithmetic, literal parsing and tolerances."""

import sys
from fractions import Fraction
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent.parent.resolve()
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from src.hopfcorr.core.errors import BackendMismatch, IrrationalPower, ParseError
from src.hopfcorr.core.scalars import Backend, Scalar, Tolerance, get_tolerance, scalar_parse, tolerance

EXACT = Backend.EXACT
FLOAT = Backend.FLOAT


def test_parse_literals():
    """Rational, imaginary and complex literals parse to the right pairs."""
    x = scalar_parse("-1/2+2i")
    assert x.re == Fraction(-1, 2) and x.im == 2, f"Got {x!r}"
    assert scalar_parse("i") == Scalar(0, 1)
    assert scalar_parse("-i") == Scalar(0, -1)
    assert scalar_parse("3/4") == Scalar(Fraction(3, 4))
    assert scalar_parse("2-3/5i") == Scalar(2, Fraction(-3, 5))


def test_str_reparses():
    """str() is a literal that parses back to the same scalar."""
    for text in ("0", "7", "-1/3", "i", "-i", "1/2+i", "-2-5/7i", "4/9i"):
        x = scalar_parse(text)
        assert scalar_parse(str(x)) == x, f"{text} -> {x} does not re-parse"


def test_parse_errors():
    with pytest.raises(ParseError):
        scalar_parse("abc")
    with pytest.raises(ParseError):
        scalar_parse("1/0")
    with pytest.raises(ParseError):
        scalar_parse(3)


def test_decimal_needs_float_backend():
    with pytest.raises(BackendMismatch):
        scalar_parse("0.25")
    assert scalar_parse("0.25", FLOAT) == Scalar(0.25, 0, FLOAT)


def test_field_operations():
    a = Scalar(1, 2)
    b = Scalar(3, -1)
    assert a * b == Scalar(5, 5), f"(1+2i)(3-i) gave {a * b}"
    assert (a * b) / b == a
    assert a - a == Scalar(0)
    assert a.conj() == Scalar(1, -2)
    assert a.abs2() == Scalar(5)
    assert a ** -1 * a == Scalar(1)
    with pytest.raises(ZeroDivisionError):
        a / Scalar(0)


def test_int_operands_coerce():
    x = Scalar(Fraction(1, 2))
    assert x + 1 == Scalar(Fraction(3, 2))
    assert 2 * x == Scalar(1)
    assert 1 - x == x


def test_backends_do_not_mix():
    with pytest.raises(BackendMismatch):
        Scalar(1) + Scalar(1.0, 0, FLOAT)
    with pytest.raises(BackendMismatch):
        Scalar(0.5)
    with pytest.raises(BackendMismatch):
        Scalar.of(1j, EXACT)
    with pytest.raises(BackendMismatch):
        Scalar(1.0, 0, FLOAT).to_backend(EXACT)
    assert Scalar(1).to_backend(FLOAT) == Scalar(1.0, 0, FLOAT)


def test_rational_powers():
    assert Scalar(4).sqrt() == Scalar(2)
    assert Scalar(Fraction(1, 4)).power(Fraction(1, 2)) == Scalar(Fraction(1, 2))
    assert Scalar(Fraction(1, 8)).power(Fraction(-2, 3)) == Scalar(4)
    with pytest.raises(IrrationalPower):
        Scalar(2).sqrt()
    with pytest.raises(ValueError):
        Scalar(-1).sqrt()
    assert abs(float(Scalar(2.0, 0, FLOAT).sqrt()) - 2 ** 0.5) < 1e-12


def test_ordering_only_on_reals():
    assert Scalar(1) < Scalar(2)
    assert Scalar(-1).is_negative() and Scalar(3).is_positive()
    with pytest.raises(ValueError):
        Scalar(0, 1) < Scalar(1)


def test_exact_hash_matches_equality():
    assert hash(Scalar(2)) == hash(Scalar(Fraction(4, 2)))
    assert len({Scalar(1, 1), Scalar(Fraction(2, 2), 1)}) == 1


def test_float_tolerance_context():
    """Float comparisons use the active tolerance, restored after the block."""
    x = Scalar(1.0, 0, FLOAT)
    y = Scalar(1.0 + 1e-12, 0, FLOAT)
    assert x == y
    before = get_tolerance()
    with tolerance(Tolerance(eps_num=0.0)):
        assert x != y
        assert not (x - y).is_zero()
    assert get_tolerance() == before
    assert (x - y).is_zero()


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(eps_num=-1.0)
