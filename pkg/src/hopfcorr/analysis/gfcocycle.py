"""Cocycles, generating functionals and the correspondence between them.

A Cocycle is stored by its generator data (pi(g), eta(g)) and extended by
eta(g w) = pi(g) eta(w) + eta(g) epsilon(w) up to its cutoff degree. A
GeneratingFunctional is stored as values on normal words up to a degree.
Going from a cocycle to a functional uses the defining formula
L(gamma(a)) = -<eta(S_alpha(a_1)^*), eta(alpha(a_2))>; the way back is the
GNS construction on the K_1 Gram matrix.
"""

from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from ..core.errors import (ContextMismatch, DegreeExceeded, FormulaMismatch, HypothesisViolated,
                           NotConditionallyPositive, TruncationInconsistent)
from ..core.hopf import (Presentation, alpha_apply, antipode_degree, coproduct_degree, epsilon,
                         gamma_inverse, tau_apply, twisted_antipode)
from ..core.linalg import (Dense, SparseMatrix, SparseVector, extreme_eigenvalues, fit_operator,
                           ldl_factor, orthogonal_basis, rank)
from ..core.ncalg import NCPoly, Word, enumerate_normal_words, mul, normal_form, star
from ..core.report import Report, Tally
from ..core.scalars import Backend, Scalar, get_tolerance
from ..utils.config import get_default_cutoff

logger = logging.getLogger(__name__)


class Cocycle:
    """Cocycle eta for a *-representation pi on a finite carrier space.

    Args:
        presentation: Hopf algebra the cocycle lives on
        dim: Carrier dimension
        pi_images: Generator index -> dim x dim matrix
        eta_images: Generator index -> vector of length dim
        cutoff: Largest word degree eta may be evaluated on
        metric: Positive diagonal of the inner product (None means identity)
        name: Display name
    """

    def __init__(self, presentation: Presentation, dim: int,
                 pi_images: Mapping[int, SparseMatrix], eta_images: Mapping[int, SparseVector],
                 cutoff: int, metric: Sequence[Scalar] | None = None, name: str = 'cocycle'):
        if dim < 0 or cutoff < 0:
            raise ValueError(f"dim and cutoff must be nonnegative (dim={dim}, cutoff={cutoff})")
        n = len(presentation.generators)
        for g in range(n):
            if pi_images[g].shape != (dim, dim) or eta_images[g].dim != dim:
                raise ValueError(f"Generator {presentation.generators[g]} data does not match dim {dim}")
        self.presentation = presentation
        self.system = presentation.system
        self.backend = presentation.backend
        self.dim = dim
        self.pi_images = {g: pi_images[g] for g in range(n)}
        self.eta_images = {g: eta_images[g] for g in range(n)}
        self.cutoff = cutoff
        self.metric = list(metric) if metric is not None else None
        self.name = name
        self._eta: dict[Word, SparseVector] = {}
        self._pi: dict[Word, SparseMatrix] = {}

    @classmethod
    def zero(cls, presentation: Presentation, dim: int = 1, cutoff: int | None = None) -> Cocycle:
        """Zero cocycle for the counit representation on C^dim (cutoff defaults to HOPFCORR_CUTOFF)."""
        cutoff = get_default_cutoff() if cutoff is None else cutoff
        b = presentation.backend
        n = len(presentation.generators)
        return cls(presentation, dim,
                   {g: SparseMatrix.identity(dim, b).scale(presentation.epsilon_images[g]) for g in range(n)},
                   {g: SparseVector.zero(dim, b) for g in range(n)}, cutoff, name='zero')

    def rebase(self, presentation: Presentation) -> Cocycle:
        """Same data over another alpha of the same algebra."""
        if presentation.system is not self.system:
            raise ContextMismatch("Cocycle can only be moved between presentations of one algebra")
        out = Cocycle(presentation, self.dim, self.pi_images, self.eta_images, self.cutoff,
                      self.metric, self.name)
        out._eta, out._pi = self._eta, self._pi
        return out

    def inner(self, x: SparseVector, y: SparseVector) -> Scalar:
        return x.dot(y, self.metric)

    def pi_word(self, word: Word) -> SparseMatrix:
        cached = self._pi.get(word)
        if cached is None:
            if not word:
                cached = SparseMatrix.identity(self.dim, self.backend)
            else:
                cached = self.pi_images[word[0]] @ self.pi_word(word[1:])
            self._pi[word] = cached
        return cached

    def eta_word(self, word: Word) -> SparseVector:
        """eta on a (possibly non-normal) word.

        Raises:
            DegreeExceeded: If the word is longer than the cutoff
        """
        if len(word) > self.cutoff:
            raise DegreeExceeded(
                f"eta({self.system.format_word(word)}) needs degree {len(word)} > cutoff {self.cutoff}")
        return self._eta_raw(word)

    def _eta_raw(self, word: Word) -> SparseVector:
        cached = self._eta.get(word)
        if cached is None:
            if not word:
                cached = SparseVector.zero(self.dim, self.backend)
            else:
                g, rest = word[0], word[1:]
                cached = (self.pi_images[g].matvec(self._eta_raw(rest))
                          + self.eta_images[g].scale(self.presentation.epsilon_word(rest)))
            self._eta[word] = cached
        return cached

    def __repr__(self) -> str:
        return f"Cocycle({self.name!r}, dim={self.dim}, cutoff={self.cutoff}, on {self.presentation.name})"


class GeneratingFunctional:
    """Functional stored by its values on normal words up to a degree.

    Words inside the stored degree without an entry have value 0.

    Args:
        presentation: Hopf algebra the functional lives on
        values: Normal word -> value
        cutoff: Degree of the K_1 window used for conditional positivity
        degree: Largest stored word degree (defaults to 2 * cutoff)
        name: Display name
    """

    def __init__(self, presentation: Presentation, values: Mapping[Word, Scalar], cutoff: int,
                 degree: int | None = None, name: str = 'functional'):
        if cutoff < 0:
            raise ValueError(f"cutoff must be nonnegative, got {cutoff}")
        self.presentation = presentation
        self.system = presentation.system
        self.backend = presentation.backend
        self.cutoff = cutoff
        self.degree = 2 * cutoff if degree is None else degree
        for w in values:
            if len(w) > self.degree:
                raise DegreeExceeded(f"Stored word of degree {len(w)} exceeds degree {self.degree}")
        self.values = {w: v for w, v in values.items() if not v.is_zero()}
        self.name = name
        self.meta: dict[str, object] = {}

    @classmethod
    def from_function(cls, presentation: Presentation, fn: Callable[[Word], Scalar | int],
                      cutoff: int, degree: int | None = None, name: str = 'functional') -> GeneratingFunctional:
        degree = 2 * cutoff if degree is None else degree
        b = presentation.backend
        values = {w: Scalar.of(fn(w), b) for w in enumerate_normal_words(presentation.system, degree)}
        return cls(presentation, values, cutoff, degree, name)

    @classmethod
    def zero(cls, presentation: Presentation, cutoff: int | None = None) -> GeneratingFunctional:
        cutoff = get_default_cutoff() if cutoff is None else cutoff
        return cls(presentation, {}, cutoff, name='zero')

    def rebase(self, presentation: Presentation) -> GeneratingFunctional:
        if presentation.system is not self.system:
            raise ContextMismatch("Functional can only be moved between presentations of one algebra")
        return GeneratingFunctional(presentation, self.values, self.cutoff, self.degree, self.name)

    def value(self, word: Word) -> Scalar:
        if len(word) > self.degree:
            raise DegreeExceeded(
                f"L({self.system.format_word(word)}) needs degree {len(word)} > stored {self.degree}")
        return self.values.get(word, Scalar.zero(self.backend))

    def __call__(self, a: NCPoly) -> Scalar:
        total = Scalar.zero(self.backend)
        for w, c in a.terms.items():
            total = total + c * self.value(w)
        return total

    def words(self) -> list[Word]:
        return enumerate_normal_words(self.system, self.degree)

    def __repr__(self) -> str:
        return (f"GeneratingFunctional({self.name!r}, cutoff={self.cutoff}, degree={self.degree}, "
                f"{len(self.values)} values)")


# Evaluation

def eta_eval(c: Cocycle, a: NCPoly) -> SparseVector:
    """eta on a polynomial.

    Raises:
        DegreeExceeded: If a monomial is longer than the cutoff
    """
    out = SparseVector.zero(c.dim, c.backend)
    for w, coef in a.terms.items():
        out = out + c.eta_word(w).scale(coef)
    return out


def pi_eval(c: Cocycle, a: NCPoly) -> SparseMatrix:
    out = SparseMatrix.zero(c.dim, c.dim, c.backend)
    for w, coef in a.terms.items():
        out = out + c.pi_word(w).scale(coef)
    return out


def _vec_residual(v: SparseVector) -> float:
    return max((abs(x) for x in v.entries.values()), default=0.0)


def _mat_residual(m: SparseMatrix) -> float:
    return max((abs(x) for row in m.rows.values() for x in row.values()), default=0.0)


def _fmt(system, w: Word) -> str:
    return system.format_word(w) or '1'


def check_cocycle_welldefined(c: Cocycle) -> Report:
    """Rule respect of pi and eta, and pi(g^*) = pi(g)^dagger on generators.

    A carrier not spanned by the eta-values within the cutoff is reported as a
    warning (the cocycle is degenerate, see restrict_to_span).
    """
    report = Report('check-cocycle')
    system = c.system
    pi_rules = Tally('pi respects relations')
    eta_rules = Tally('eta respects relations')
    for rule in system.rules:
        label = _fmt(system, rule.lhs)
        lhs = c.pi_word(rule.lhs)
        rhs = SparseMatrix.zero(c.dim, c.dim, c.backend)
        for mono, coef in rule.rhs:
            rhs = rhs + c.pi_word(mono).scale(coef)
        d = lhs - rhs
        pi_rules.record(d.is_zero(), _mat_residual(d), label)
        if len(rule.lhs) <= c.cutoff:
            v = c._eta_raw(rule.lhs)
            for mono, coef in rule.rhs:
                v = v - c._eta_raw(mono).scale(coef)
            eta_rules.record(v.is_zero(), _vec_residual(v), label)
    pi_rules.emit(report)
    eta_rules.emit(report)
    adjoint = Tally('pi is a *-representation')
    for g in range(len(system.generators)):
        d = c.pi_images[system.star_index[g]] - c.pi_images[g].adjoint(c.metric)
        adjoint.record(d.is_zero(), _mat_residual(d), system.generators[g])
    adjoint.emit(report)
    if c.metric is not None:
        report.add('metric positive', all(m.is_positive() for m in c.metric))
    rank = eta_span_rank(c)
    report.data.update({'dim': c.dim, 'cutoff': c.cutoff, 'eta_rank': rank})
    if rank < c.dim:
        report.warn(f"eta spans {rank} of {c.dim} carrier dimensions within the cutoff (degenerate)")
    return report


def _eta_span_vectors(c: Cocycle) -> list[SparseVector]:
    return [c.eta_word(w) for w in enumerate_normal_words(c.system, c.cutoff, 1)]


def eta_span_rank(c: Cocycle) -> int:
    return rank(_eta_span_vectors(c), c.dim, c.backend)


def restrict_to_span(c: Cocycle) -> Cocycle:
    """Restrict a degenerate cocycle to the span of its eta-values.

    The new coordinates are taken along a metric-orthogonal basis of the span,
    the new metric holds the squared norms of that basis.

    Raises:
        TruncationInconsistent: If pi does not leave the span invariant
    """
    basis = orthogonal_basis(_eta_span_vectors(c), c.metric)
    if len(basis) == c.dim:
        return c
    norms = [b.dot(b, c.metric) for b in basis]
    b = c.backend

    def coords(v: SparseVector) -> SparseVector:
        out = {j: basis[j].dot(v, c.metric) / norms[j] for j in range(len(basis))}
        back = SparseVector.zero(c.dim, b)
        for j, x in out.items():
            back = back + basis[j].scale(x)
        if not (back - v).is_zero():
            raise TruncationInconsistent(f"Vector leaves the eta-span of {c.name}")
        return SparseVector(len(basis), out, b)

    n = len(c.system.generators)
    pi = {g: SparseMatrix.from_columns([coords(c.pi_images[g].matvec(v)) for v in basis], len(basis), b)
          for g in range(n)}
    eta = {g: coords(c.eta_images[g]) for g in range(n)}
    logger.warning(f"Restricting {c.name} from dimension {c.dim} to its eta-span of dimension {len(basis)}")
    return Cocycle(c.presentation, len(basis), pi, eta, c.cutoff, norms, f"{c.name}|span")


def direct_sum(c1: Cocycle, c2: Cocycle, name: str | None = None) -> Cocycle:
    """Block direct sum on one presentation (cutoff is the smaller one)."""
    if c1.system is not c2.system:
        raise ContextMismatch("Direct sum needs cocycles on the same algebra")
    n = len(c1.system.generators)
    metric = None
    if c1.metric is not None or c2.metric is not None:
        one = Scalar.one(c1.backend)
        metric = (c1.metric or [one] * c1.dim) + (c2.metric or [one] * c2.dim)
    return Cocycle(c1.presentation, c1.dim + c2.dim,
                   {g: c1.pi_images[g].block_diag(c2.pi_images[g]) for g in range(n)},
                   {g: c1.eta_images[g].direct_sum(c2.eta_images[g]) for g in range(n)},
                   min(c1.cutoff, c2.cutoff), metric, name or f"{c1.name}+{c2.name}")


# Reality and the defining formula

def _default_pair_degree(c: Cocycle, max_deg: int | None, limit: int = 3) -> int:
    if max_deg is not None:
        return max_deg
    return min(limit, c.cutoff // antipode_degree(c.presentation))


def is_alpha_real(c: Cocycle, max_deg: int | None = None) -> Report:
    """<eta(a), eta(b)> = <eta(S_alpha(b)^*), eta(S_alpha(a^*))> on word pairs.

    Raises:
        DegreeExceeded: If S_alpha images leave the cutoff
    """
    P = c.presentation
    max_deg = _default_pair_degree(c, max_deg)
    words = enumerate_normal_words(c.system, max_deg, 1)
    s_star = {w: eta_eval(c, star(twisted_antipode(P, P.monomial(w)))) for w in words}
    s_of_star = {w: eta_eval(c, twisted_antipode(P, star(P.monomial(w)))) for w in words}
    eta = {w: c.eta_word(w) for w in words}
    report = Report('alpha-real')
    tally = Tally('alpha-reality')
    for a, b in itertools.product(words, repeat=2):
        left = c.inner(eta[a], eta[b])
        right = c.inner(s_star[b], s_of_star[a])
        d = left - right
        tally.record(d.is_zero(), abs(d), f"({_fmt(c.system, a)} | {_fmt(c.system, b)})")
    tally.emit(report, alpha=P.alpha_label, max_deg=max_deg)
    return report


class _FormulaTerms:
    """Memoized eta-values of the legs entering the defining formula."""

    def __init__(self, c: Cocycle):
        self.c = c
        self.P = c.presentation
        self._memo: dict[tuple[str, Word], SparseVector] = {}

    def get(self, kind: str, word: Word) -> SparseVector:
        key = (kind, word)
        cached = self._memo.get(key)
        if cached is None:
            P, x = self.P, self.P.monomial(word)
            if kind == 'S*':
                poly = star(twisted_antipode(P, x))
            elif kind == 'a':
                poly = alpha_apply(P, x)
            elif kind == 'a*':
                poly = star(alpha_apply(P, x))
            else:
                poly = twisted_antipode(P, x)
            cached = eta_eval(self.c, poly)
            self._memo[key] = cached
        return cached

    def forms(self, word: Word) -> tuple[Scalar, Scalar]:
        """Both right-hand sides of the defining formula at L(word)."""
        c, P = self.c, self.P
        scale = gamma_inverse(P, P.monomial(word)).coefficient(word)
        first = Scalar.zero(c.backend)
        second = Scalar.zero(c.backend)
        for (k0, k1), coef in P.delta_word(word).terms.items():
            first = first + coef * c.inner(self.get('S*', k0), self.get('a', k1))
            second = second + coef * c.inner(self.get('a*', k0), self.get('S', k1))
        return -first * scale, -second * scale


def functional_reach(c: Cocycle) -> int:
    """Largest word degree whose defining formula stays within the cutoff."""
    P = c.presentation
    return c.cutoff // (antipode_degree(P) * coproduct_degree(P))


def functional_from_cocycle(c: Cocycle, strict: bool = True) -> GeneratingFunctional:
    """Functional defined by L(gamma(a)) = -<eta(S_alpha(a_1)^*), eta(alpha(a_2))>.

    Values are filled on every normal word up to functional_reach(c); the
    functional's cutoff is half of that so its K_1 Gram matrix is covered.

    Args:
        c: Well-defined cocycle
        strict: Raise when the two forms of the formula disagree

    Raises:
        FormulaMismatch: If strict and the two forms disagree
    """
    P = c.presentation
    reach = functional_reach(c)
    terms = _FormulaTerms(c)
    values: dict[Word, Scalar] = {}
    worst, witness = 0.0, None
    for w in enumerate_normal_words(c.system, reach, 1):
        first, second = terms.forms(w)
        d = first - second
        if not d.is_zero():
            if strict:
                raise FormulaMismatch(f"Defining formula forms differ at {_fmt(c.system, w)}: "
                                      f"{first} vs {second}")
            if abs(d) > worst:
                worst, witness = abs(d), _fmt(c.system, w)
        values[w] = first
    L = GeneratingFunctional(P, values, reach // 2, reach, f"L[{c.name}]")
    L.meta.update({'formula_mismatch': worst, 'formula_witness': witness, 'alpha': P.alpha_label})
    logger.debug(f"functional_from_cocycle({c.name}): {len(L.values)} values up to degree {reach}")
    return L


def two_form_agreement(c: Cocycle, max_deg: int | None = None) -> Report:
    """Both forms of the defining formula agree on words up to max_deg."""
    terms = _FormulaTerms(c)
    max_deg = min(3, functional_reach(c)) if max_deg is None else max_deg
    report = Report('two-form-agreement')
    tally = Tally('defining formula forms agree')
    for w in enumerate_normal_words(c.system, max_deg, 1):
        first, second = terms.forms(w)
        d = first - second
        tally.record(d.is_zero(), abs(d), _fmt(c.system, w))
    tally.emit(report, max_deg=max_deg)
    return report


def eta_identities_check(c: Cocycle, max_deg: int | None = None) -> Report:
    """The four identities expressing eta o S_alpha and eta o alpha through pi.

    eta(S_alpha(a)) = -pi(S_alpha(a_1)) eta(alpha(a_2)), its alpha companion
    eta(alpha(a)) = -pi(alpha(a_1)) eta(S_alpha(a_2)), and the two starred
    forms with pi(.)^* = pi(.^*).
    """
    P = c.presentation
    max_deg = min(3, functional_reach(c)) if max_deg is None else max_deg
    report = Report('eta-identities')
    names = ['eta o S_alpha', 'eta o alpha', 'eta o * o S_alpha', 'eta o * o alpha']
    tallies = [Tally(n) for n in names]
    ev = lambda p: eta_eval(c, p)
    pe = lambda p: pi_eval(c, p)
    s_of = lambda p: twisted_antipode(P, p)
    a_of = lambda p: alpha_apply(P, p)
    for w in enumerate_normal_words(c.system, max_deg, 1):
        x = P.monomial(w)
        lhs = [ev(s_of(x)), ev(a_of(x)), ev(star(s_of(x))), ev(star(a_of(x)))]
        rhs = [SparseVector.zero(c.dim, c.backend) for _ in range(4)]
        for (k0, k1), coef in P.delta_word(w).terms.items():
            x0, x1 = P.monomial(k0), P.monomial(k1)
            rhs[0] = rhs[0] - pe(s_of(x0)).matvec(ev(a_of(x1))).scale(coef)
            rhs[1] = rhs[1] - pe(a_of(x0)).matvec(ev(s_of(x1))).scale(coef)
            rhs[2] = rhs[2] - pe(star(s_of(x1))).matvec(ev(star(a_of(x0)))).scale(coef.conj())
            rhs[3] = rhs[3] - pe(star(a_of(x1))).matvec(ev(star(s_of(x0)))).scale(coef.conj())
        for tally, left, right in zip(tallies, lhs, rhs):
            d = left - right
            tally.record(d.is_zero(), _vec_residual(d), _fmt(c.system, w))
    for tally in tallies:
        tally.emit(report, max_deg=max_deg)
    return report


# Functional-side checks

def _hermitian_tally(L: GeneratingFunctional, words: Sequence[Word]) -> Tally:
    P = L.presentation
    tally = Tally('hermitian')
    for w in words:
        d = L(star(P.monomial(w))) - L.value(w).conj()
        tally.record(d.is_zero(), abs(d), _fmt(L.system, w))
    return tally


def _k1_gram(L: GeneratingFunctional, basis: Sequence[Word]) -> Dense:
    P = L.presentation
    eps = [P.epsilon_word(w) for w in basis]
    star_vals = [L(star(P.monomial(w))) for w in basis]
    vals = [L.value(w) for w in basis]
    gram: Dense = []
    for i, wi in enumerate(basis):
        wi_star = star(P.monomial(wi))
        row = []
        for j, wj in enumerate(basis):
            row.append(L(mul(wi_star, P.monomial(wj))) - eps[j] * star_vals[i] - eps[i].conj() * vals[j])
        gram.append(row)
    return gram


def check_generating(L: GeneratingFunctional) -> Report:
    """L(1) = 0, hermitianity on stored words, PSD of the K_1 Gram matrix at cutoff."""
    report = Report('check-generating')
    unit = L.value(())
    report.add('vanishes at 1', unit.is_zero(), abs(unit))
    _hermitian_tally(L, L.words()).emit(report)
    basis = enumerate_normal_words(L.system, L.cutoff, 1)
    gram = _k1_gram(L, basis)
    fac = ldl_factor(gram, L.backend)
    low, high = extreme_eigenvalues(gram)
    if L.backend is Backend.EXACT:
        ok = fac.psd
    else:
        ok = low >= -get_tolerance().eps_psd
    report.add('conditionally positive', ok, max(0.0, -low), None if ok else fac.witness or f"eigenvalue {low}",
               {'min_eigenvalue': low, 'max_eigenvalue': high, 'rank': fac.rank, 'size': len(basis)})
    report.data.update({'cutoff': L.cutoff, 'degree': L.degree, 'min_eigenvalue': low})
    return report


def is_salpha_invariant(L: GeneratingFunctional, max_deg: int | None = None) -> Report:
    """L(S_alpha(w)) = L(w) on stored words whose image stays stored."""
    P = L.presentation
    max_deg = L.degree // antipode_degree(P) if max_deg is None else max_deg
    report = Report('salpha-invariant')
    tally = Tally('S_alpha-invariance')
    for w in enumerate_normal_words(L.system, max_deg, 1):
        d = L(twisted_antipode(P, P.monomial(w))) - L.value(w)
        tally.record(d.is_zero(), abs(d), _fmt(L.system, w))
    tally.emit(report, alpha=P.alpha_label, max_deg=max_deg)
    return report


def yields_coboundary(L: GeneratingFunctional, c: Cocycle, max_deg: int | None = None) -> Report:
    """L(ab) = epsilon(a)L(b) + L(a)epsilon(b) + <eta(a^*), eta(b)> on word pairs."""
    P = L.presentation
    if P.system is not c.system:
        raise ContextMismatch("Functional and cocycle live on different algebras")
    max_deg = min(L.cutoff, c.cutoff) if max_deg is None else max_deg
    words = enumerate_normal_words(L.system, max_deg, 1)
    eta = {w: c.eta_word(w) for w in words}
    eta_star = {w: eta_eval(c, star(P.monomial(w))) for w in words}
    report = Report('yields-coboundary')
    tally = Tally('coboundary identity')
    for a, b in itertools.product(words, repeat=2):
        ab = L(mul(P.monomial(a), P.monomial(b)))
        rhs = (P.epsilon_word(a) * L.value(b) + L.value(a) * P.epsilon_word(b)
               + c.inner(eta_star[a], eta[b]))
        d = ab - rhs
        tally.record(d.is_zero(), abs(d), f"({_fmt(L.system, a)}, {_fmt(L.system, b)})")
    tally.emit(report, max_deg=max_deg)
    return report


# GNS

def cocycle_from_functional(L: GeneratingFunctional) -> Cocycle:
    """GNS construction of a cocycle yielding the coboundary of L.

    The K_1 Gram matrix over words of degree <= cutoff is factored as
    B^dagger D B; eta(w) is the column of B at w and D is the carrier metric.
    pi(g) is fitted from pi(g) eta(w) = eta(g w) - eta(g) epsilon(w) on the
    words one degree shorter. When the rank has stopped growing at the last
    degree the eta-span is closed under pi and the cocycle extends to any
    degree; otherwise its cutoff stays at the window.

    Raises:
        NotConditionallyPositive: If the Gram matrix is not hermitian PSD
        TruncationInconsistent: If pi cannot be fitted consistently
    """
    P = L.presentation
    b = L.backend
    system = L.system
    k = L.cutoff
    basis = enumerate_normal_words(system, k, 1)
    gram = _k1_gram(L, basis)
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            if gram[i][j] != gram[j][i].conj():
                raise NotConditionallyPositive(
                    f"K1 Gram matrix is not hermitian at ({_fmt(system, basis[i])}, {_fmt(system, basis[j])})")
    fac = ldl_factor(gram, b)
    if not fac.psd:
        raise NotConditionallyPositive(f"K1 Gram matrix of {L.name} is not PSD: {fac.witness}")
    r = fac.rank
    columns = {w: fac.column(j, b) for j, w in enumerate(basis)}
    shorter = [w for w in basis if len(w) < k]
    r_prev = ldl_factor([row[:len(shorter)] for row in gram[:len(shorter)]], b).rank if shorter else 0
    stable = k >= 2 and r == r_prev

    def eta_poly(p: NCPoly) -> SparseVector:
        out = SparseVector.zero(r, b)
        for w, coef in p.terms.items():
            if w:
                out = out + columns[w].scale(coef)
        return out

    n = len(system.generators)
    eta_images = {g: eta_poly(normal_form(system, {(g,): Scalar.one(b)})) for g in range(n)}
    pi_images: dict[int, SparseMatrix] = {}
    for g in range(n):
        sources = [columns[w] for w in shorter]
        targets = [eta_poly(normal_form(system, {(g,) + w: Scalar.one(b)}))
                   - eta_images[g].scale(P.epsilon_word(w)) for w in shorter]
        fit = fit_operator(sources, targets, r, r, b, fac.diag)
        if not fit.consistent:
            raise TruncationInconsistent(
                f"pi({system.generators[g]}) is inconsistent on eta({_fmt(system, shorter[fit.witness])}) "
                f"(residual {fit.residual})")
        pi_images[g] = fit.matrix
    if stable:
        cutoff = 2 * k * antipode_degree(P) * coproduct_degree(P)
        logger.info(f"GNS for {L.name}: rank {r} stable from degree {k - 1}, cutoff {cutoff}")
    else:
        cutoff = k
        logger.warning(f"GNS for {L.name}: rank {r_prev} -> {r} still growing at degree {k}; "
                       f"cutoff kept at {k}")
    c = Cocycle(P, r, pi_images, eta_images, cutoff, fac.diag, f"GNS[{L.name}]")
    check = yields_coboundary(L, c, k)
    if not check.passed:
        raise TruncationInconsistent(f"GNS cocycle does not yield the coboundary of {L.name}: "
                                     f"{check.failures()[0].witness}")
    return c


def gram_matrix(c: Cocycle, words: Sequence[Word]) -> Dense:
    eta = [c.eta_word(w) for w in words]
    return [[c.inner(x, y) for y in eta] for x in eta]


def same_gram(c1: Cocycle, c2: Cocycle, words: Sequence[Word]) -> Report:
    """Equal Gram matrices on a word list (unitary equivalence on their span)."""
    report = Report('same-gram')
    tally = Tally('gram matrices agree')
    g1, g2 = gram_matrix(c1, words), gram_matrix(c2, words)
    for i, j in itertools.product(range(len(words)), repeat=2):
        d = g1[i][j] - g2[i][j]
        tally.record(d.is_zero(), abs(d), f"({_fmt(c1.system, words[i])}, {_fmt(c1.system, words[j])})")
    tally.emit(report)
    return report


def _compare_functionals(report: Report, L: GeneratingFunctional, L2: GeneratingFunctional,
                         name: str) -> None:
    degree = min(L.degree, L2.degree)
    tally = Tally(name)
    for w in enumerate_normal_words(L.system, degree, 1):
        d = L.value(w) - L2.value(w)
        tally.record(d.is_zero(), abs(d), _fmt(L.system, w))
    tally.emit(report, degree=degree)


def roundtrip_check(L: GeneratingFunctional, max_deg: int | None = None) -> Report:
    """L -> GNS cocycle -> defining formula reproduces L on the common stored words."""
    report = Report('roundtrip')
    report.extend(check_generating(L))
    report.extend(is_salpha_invariant(L))
    eta = cocycle_from_functional(L)
    real_deg = min(L.cutoff, eta.cutoff // antipode_degree(L.presentation)) if max_deg is None else max_deg
    report.extend(is_alpha_real(eta, real_deg))
    L2 = functional_from_cocycle(eta)
    _compare_functionals(report, L, L2, 'functional reproduced')
    report.data.update({'gns_dim': eta.dim, 'gns_cutoff': eta.cutoff, 'reproduced_degree': L2.degree})
    return report


def attempt_functional(c: Cocycle, max_deg: int | None = None) -> Report:
    """Run the defining formula on any cocycle and report what goes wrong.

    Never raises on check failures: the formula mismatch, hermitianity,
    coboundary and S_alpha-invariance residuals are all reported.
    """
    report = Report('attempt')
    L = functional_from_cocycle(c, strict=False)
    report.add('defining formula forms agree', L.meta['formula_witness'] is None,
               L.meta['formula_mismatch'], L.meta['formula_witness'])
    _hermitian_tally(L, L.words()).emit(report)
    report.extend(yields_coboundary(L, c, max_deg))
    report.extend(is_salpha_invariant(L))
    report.data.update({'values': len(L.values), 'degree': L.degree})
    return report


def two_cocycle_check(c: Cocycle, max_deg: int = 3) -> Report:
    """Boundary of phi(a, b) = <eta(a^*), eta(b)> vanishes on K_1 triples.

    Triples run over shifted words x - epsilon(x)1 with total degree at most
    max_deg.
    """
    P = c.presentation
    system = c.system
    words = enumerate_normal_words(system, max_deg, 1)
    shifted = {w: P.monomial(w) - P.epsilon_word(w) for w in words}

    def phi(a: NCPoly, b: NCPoly) -> Scalar:
        return c.inner(eta_eval(c, star(a)), eta_eval(c, b))

    report = Report('two-cocycle')
    tally = Tally('boundary of phi vanishes')
    for x, y, z in itertools.product(words, repeat=3):
        if len(x) + len(y) + len(z) > max_deg:
            continue
        a, b_, cc = shifted[x], shifted[y], shifted[z]
        total = (epsilon(P, a) * phi(b_, cc) - phi(mul(a, b_), cc)
                 + phi(a, mul(b_, cc)) - phi(a, b_) * epsilon(P, cc))
        tally.record(total.is_zero(), abs(total),
                     f"({_fmt(system, x)}, {_fmt(system, y)}, {_fmt(system, z)})")
    tally.emit(report, max_deg=max_deg)
    return report


def tau_reality_transfer(c: Cocycle, t: Fraction | int | float, s: Fraction | int | float) -> Report:
    """A tau_{it}-real cocycle (t != 1/2) is tau_{is}-real.

    Checks the hypothesis, the conclusion, and the intermediate identity
    L = L o tau_{i(2t-1)} for the functional of the tau_{it} structure.

    Raises:
        HypothesisViolated: If t = 1/2
    """
    if Fraction(t) == Fraction(1, 2):
        raise HypothesisViolated("Reality transfer needs t != 1/2")
    P = c.presentation
    report = Report('tau-transfer')
    c_t = c.rebase(P.with_tau(t))
    report.extend(is_alpha_real(c_t), 'hypothesis tau_it-real')
    c_s = c.rebase(P.with_tau(s))
    report.extend(is_alpha_real(c_s), 'conclusion tau_is-real')
    L = functional_from_cocycle(c_t, strict=False)
    exponent = 2 * Fraction(t) - 1
    power = int(exponent) if exponent.denominator == 1 else exponent
    tally = Tally('L = L o tau_{i(2t-1)}')
    for w in enumerate_normal_words(c.system, L.degree, 1):
        d = L(tau_apply(L.presentation, P.monomial(w), power)) - L.value(w)
        tally.record(d.is_zero(), abs(d), _fmt(c.system, w))
    tally.emit(report)
    report.data.update({'t': str(t), 's': str(s), 'kac': P.is_kac()})
    return report

