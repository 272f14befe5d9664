"""Exception hierarchy for hopfcorr.

Every error raised on purpose by the library derives from HopfCorrError. Each
subclass also inherits the closest builtin so callers catching ValueError or
TypeError keep working.
"""

from __future__ import annotations

from typing import Any


class HopfCorrError(Exception):
    """Base class for all library errors."""


class ParseError(HopfCorrError, ValueError):
    """Malformed literal, word-string or artifact file."""


class BackendMismatch(HopfCorrError, TypeError):
    """Exact and Float scalars met in one computation."""


class RuleOrderViolation(HopfCorrError, ValueError):
    """A rewrite rule does not strictly decrease the term order."""


class ContextMismatch(HopfCorrError, ValueError):
    """Operands belong to different rewrite systems."""


class RankMismatch(HopfCorrError, ValueError):
    """Tensor operands of different rank."""


class CoassociativityViolation(HopfCorrError, ArithmeticError):
    """The two bracketings of the triple coproduct disagree."""


class IrrationalPower(HopfCorrError, ArithmeticError):
    """A rational power has no rational value under the Exact backend."""


class SingularGamma(HopfCorrError, ArithmeticError):
    """Some monomial eigenvalue satisfies 1 + lambda = 0."""


class DegreeExceeded(HopfCorrError, ValueError):
    """A word lies outside the stored or certified degree range."""


class FormulaMismatch(HopfCorrError, ArithmeticError):
    """The two forms of the functional formula disagree."""


class NotConditionallyPositive(HopfCorrError, ValueError):
    """The K1 Gram matrix of a functional is not positive semidefinite."""


class TruncationInconsistent(HopfCorrError, ArithmeticError):
    """The representation cannot be recovered consistently inside the window."""


class HypothesisViolated(HopfCorrError, ValueError):
    """An operation was called outside its mathematical hypothesis."""


class NotComplementary(HopfCorrError, ArithmeticError):
    """The Gaussian and non-Gaussian subspaces do not span the carrier."""


class IllDefined(HopfCorrError, ArithmeticError):
    """A map on the eta-span is inconsistent across linear dependencies."""


class ValidationFailed(HopfCorrError):
    """A validation report did not pass.

    Attributes:
        report: The failing Report.
    """

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report
