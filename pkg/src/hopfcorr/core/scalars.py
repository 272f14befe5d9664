"""Involutive-field arithmetic.

Scalars are complex numbers under one of two backends:

- Exact: pairs of Fractions, compared exactly
- Float: pairs of floats, compared with the active Tolerance

Both backends use the same pair arithmetic, so every formula below works
unchanged for Fractions and floats.
"""

from __future__ import annotations

import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator

from ..utils.config import get_tolerance_defaults
from .errors import BackendMismatch, IrrationalPower, ParseError


class Backend(str, Enum):
    """Arithmetic backend of a computation context."""

    EXACT = 'exact'
    FLOAT = 'float'

    @classmethod
    def parse(cls, text: str | Backend) -> Backend:
        if isinstance(text, Backend):
            return text
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise ParseError(f"Unknown backend: {text!r} (expected 'exact' or 'float')")


@dataclass(frozen=True)
class Tolerance:
    """Comparison slack for the Float backend (ignored by Exact)."""

    eps_num: float = 1e-9
    eps_psd: float = 1e-8

    def __post_init__(self):
        if self.eps_num < 0 or self.eps_psd < 0:
            raise ValueError(f"Tolerances must be nonnegative: {self}")


_active_tolerance = Tolerance(*get_tolerance_defaults())


def get_tolerance() -> Tolerance:
    return _active_tolerance


def set_tolerance(tol: Tolerance) -> None:
    global _active_tolerance
    _active_tolerance = tol


@contextmanager
def tolerance(tol: Tolerance) -> Iterator[Tolerance]:
    """Temporarily replace the active tolerance.

    Example:
        >>> with tolerance(Tolerance(eps_num=1e-6)):
        ...     pass
    """
    previous = get_tolerance()
    set_tolerance(tol)
    try:
        yield tol
    finally:
        set_tolerance(previous)


def _int_root(n: int, r: int) -> int:
    """Floor of the r-th root of a nonnegative integer."""
    if n < 2:
        return n
    if r == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + r - 1) // r)
    while True:
        y = ((r - 1) * x + n // x ** (r - 1)) // r
        if y >= x:
            return x
        x = y


def rational_root(x: Fraction, r: int) -> Fraction:
    """Exact r-th root of a positive rational.

    Raises:
        IrrationalPower: If the root is not rational
    """
    if r == 1:
        return x
    n, d = x.numerator, x.denominator
    rn, rd = _int_root(n, r), _int_root(d, r)
    if rn ** r != n or rd ** r != d:
        raise IrrationalPower(f"{x}^(1/{r}) is not rational")
    return Fraction(rn, rd)


def _fmt_real(value: Fraction | float) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


class Scalar:
    """Immutable complex scalar tagged with its backend."""

    __slots__ = ('backend', 're', 'im')

    def __init__(self, re: int | Fraction | float = 0, im: int | Fraction | float = 0,
                 backend: Backend = Backend.EXACT):
        if backend is Backend.EXACT:
            if isinstance(re, float) or isinstance(im, float):
                raise BackendMismatch(f"Float value {re!r}+{im!r}i under Exact backend")
            self.re = Fraction(re)
            self.im = Fraction(im)
        else:
            self.re = float(re)
            self.im = float(im)
        self.backend = backend

    # Constructors

    @classmethod
    def of(cls, value: int | Fraction | float | complex | Scalar, backend: Backend) -> Scalar:
        if isinstance(value, Scalar):
            if value.backend is not backend:
                raise BackendMismatch(f"{value!r} used in a {backend.value} context")
            return value
        if isinstance(value, complex):
            if backend is Backend.EXACT:
                raise BackendMismatch(f"Complex float {value!r} under Exact backend")
            return cls(value.real, value.imag, backend)
        return cls(value, 0, backend)

    @classmethod
    def zero(cls, backend: Backend) -> Scalar:
        return cls(0, 0, backend)

    @classmethod
    def one(cls, backend: Backend) -> Scalar:
        return cls(1, 0, backend)

    @classmethod
    def imag_unit(cls, backend: Backend) -> Scalar:
        return cls(0, 1, backend)

    def to_backend(self, backend: Backend) -> Scalar:
        if backend is self.backend:
            return self
        if backend is Backend.EXACT:
            raise BackendMismatch("Float scalars cannot be promoted to Exact")
        return Scalar(self.re, self.im, Backend.FLOAT)

    # Arithmetic

    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            if other.backend is not self.backend:
                raise BackendMismatch(
                    f"Cannot combine {self.backend.value} and {other.backend.value} scalars")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other, 0, self.backend)
        if isinstance(other, (float, complex)):
            if self.backend is Backend.EXACT:
                raise BackendMismatch(f"Float operand {other!r} in an Exact computation")
            c = complex(other)
            return Scalar(c.real, c.imag, self.backend)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.re + o.re, self.im + o.im, self.backend)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.re - o.re, self.im - o.im, self.backend)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.re, self.im, o.re, o.im
        return Scalar(a * c - b * d, a * d + b * c, self.backend)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.re, self.im, o.re, o.im
        denom = c * c + d * d
        if denom == 0:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar((a * c + b * d) / denom, (b * c - a * d) / denom, self.backend)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self) -> Scalar:
        return Scalar(-self.re, -self.im, self.backend)

    def __pos__(self) -> Scalar:
        return self

    def __pow__(self, n: int) -> Scalar:
        if not isinstance(n, int):
            return self.power(n)
        result = Scalar.one(self.backend)
        base = self if n >= 0 else Scalar.one(self.backend) / self
        for _ in range(abs(n)):
            result = result * base
        return result

    def conj(self) -> Scalar:
        return Scalar(self.re, -self.im, self.backend)

    def abs2(self) -> Scalar:
        return Scalar(self.re * self.re + self.im * self.im, 0, self.backend)

    def power(self, exponent: int | Fraction | float) -> Scalar:
        """Real power of a positive real scalar.

        Args:
            exponent: Rational exponent (any real under Float)

        Returns:
            self ** exponent

        Raises:
            ValueError: If the scalar is not positive real
            IrrationalPower: If the Exact result is irrational
        """
        if not self.is_real() or not float(self.re) > 0:
            raise ValueError(f"power() needs a positive real scalar, got {self}")
        if self.backend is Backend.FLOAT:
            return Scalar(float(self.re) ** float(exponent), 0, self.backend)
        e = Fraction(exponent) if not isinstance(exponent, float) else Fraction(str(exponent))
        base = self.re ** e.numerator
        return Scalar(rational_root(Fraction(base), e.denominator), 0, self.backend)

    def sqrt(self) -> Scalar:
        return self.power(Fraction(1, 2))

    # Predicates

    def is_zero(self) -> bool:
        if self.backend is Backend.EXACT:
            return self.re == 0 and self.im == 0
        return abs(self.to_complex()) <= get_tolerance().eps_num

    def is_real(self) -> bool:
        if self.backend is Backend.EXACT:
            return self.im == 0
        return abs(self.im) <= get_tolerance().eps_num * max(1.0, abs(self.re))

    def is_positive(self) -> bool:
        return self.is_real() and self.re > 0 and not self.is_zero()

    def is_negative(self) -> bool:
        return self.is_real() and self.re < 0 and not self.is_zero()

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __float__(self) -> float:
        if not self.is_real():
            raise ValueError(f"{self} is not real")
        return float(self.re)

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _real_pair(self, other) -> tuple:
        o = self._coerce(other)
        if o is NotImplemented or not (self.is_real() and o.is_real()):
            raise ValueError(f"Ordering is only defined for real scalars: {self}, {other}")
        return self.re, o.re

    def __lt__(self, other) -> bool:
        a, b = self._real_pair(other)
        return a < b

    def __le__(self, other) -> bool:
        a, b = self._real_pair(other)
        return a <= b

    def __gt__(self, other) -> bool:
        a, b = self._real_pair(other)
        return a > b

    def __ge__(self, other) -> bool:
        a, b = self._real_pair(other)
        return a >= b

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except BackendMismatch:
            return False
        if o is NotImplemented:
            return NotImplemented
        if self.backend is Backend.EXACT:
            return self.re == o.re and self.im == o.im
        x, y = self.to_complex(), o.to_complex()
        return abs(x - y) <= get_tolerance().eps_num * max(1.0, abs(x), abs(y))

    def __hash__(self) -> int:
        if self.backend is Backend.FLOAT:
            # tolerant equality admits no finer hash
            return hash(Backend.FLOAT)
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __str__(self) -> str:
        re_, im_ = self.re, self.im
        if im_ == 0:
            return _fmt_real(re_)
        magnitude = abs(im_)
        imag = '' if magnitude == 1 else _fmt_real(magnitude)
        if re_ == 0:
            return f"{'-' if im_ < 0 else ''}{imag}i"
        return f"{_fmt_real(re_)}{'-' if im_ < 0 else '+'}{imag}i"

    def __repr__(self) -> str:
        return f"Scalar('{self}', {self.backend.value})"


# Literal grammar: "3/4", "-1/2+2i", "i", "0.25" (Float only)
_NUM = r'(?:\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+(?:/\d+)?)'
_REAL_RE = re.compile(rf'^(?P<sign>[+-]?)(?P<num>{_NUM})$')
_IMAG_RE = re.compile(rf'^(?P<sign>[+-]?)(?P<num>{_NUM})?i$')
_COMPLEX_RE = re.compile(
    rf'^(?P<rsign>[+-]?)(?P<re>{_NUM})(?P<isign>[+-])(?P<im>{_NUM})?i$')


def _parse_num(text: str | None, sign: str, backend: Backend) -> Fraction | float:
    if text is None:
        value: Fraction | float = Fraction(1)
    elif '.' in text or 'e' in text.lower():
        if backend is Backend.EXACT:
            raise BackendMismatch(f"Non-rational literal {text!r} under Exact backend")
        value = float(text)
    else:
        try:
            value = Fraction(text)
        except ZeroDivisionError:
            raise ParseError(f"Zero denominator in literal {text!r}")
    return -value if sign == '-' else value


def scalar_parse(text: str, backend: Backend = Backend.EXACT) -> Scalar:
    """Parse a rational-complex literal.

    Args:
        text: Literal such as "3/4", "-1/2+2i", "i" or "0.25"
        backend: Target backend

    Returns:
        The denoted Scalar

    Raises:
        ParseError: Malformed literal
        BackendMismatch: Decimal literal under the Exact backend

    Example:
        >>> str(scalar_parse("-1/2+2i"))
        '-1/2+2i'
    """
    if not isinstance(text, str):
        raise ParseError(f"Scalar literal must be a string, got {type(text).__name__}")
    s = text.replace(' ', '')
    if (m := _REAL_RE.match(s)):
        return Scalar(_parse_num(m['num'], m['sign'], backend), 0, backend)
    if (m := _IMAG_RE.match(s)):
        return Scalar(0, _parse_num(m['num'], m['sign'], backend), backend)
    if (m := _COMPLEX_RE.match(s)):
        return Scalar(_parse_num(m['re'], m['rsign'], backend),
                      _parse_num(m['im'], m['isign'], backend), backend)
    raise ParseError(f"Malformed scalar literal: {text!r}")


def scalar_conj(x: Scalar) -> Scalar:
    """Complex conjugate (an involution)."""
    return x.conj()
