"""Gaussian / non-Gaussian splitting of an alpha-real cocycle.

G is the joint eigenspace {xi : pi(g) xi = epsilon(g) xi for every generator g}
and R is the span of eta(K_2), computed from the vectors
(pi(g) - epsilon(g)) eta(w) = eta((g - epsilon(g))(w - epsilon(w))).
For an alpha-real nondegenerate cocycle the carrier is the orthogonal sum of
R and G, both invariant under pi.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from ..core.errors import IllDefined, NotComplementary
from ..core.hopf import antipode_degree, twisted_antipode
from ..core.linalg import (EchelonBasis, SparseMatrix, SparseVector, fit_operator, nullspace,
                           orthogonal_basis, projector)
from ..core.ncalg import Word, enumerate_normal_words, mul, star
from ..core.report import Report, Tally
from ..core.scalars import Scalar
from .gfcocycle import (Cocycle, GeneratingFunctional, check_cocycle_welldefined, eta_eval,
                        eta_span_rank, functional_from_cocycle, is_alpha_real, restrict_to_span)

logger = logging.getLogger(__name__)


@dataclass
class Decomposition:
    """Projections onto G and R with the component cocycles and functionals."""

    cocycle: Cocycle
    P_G: SparseMatrix
    P_R: SparseMatrix
    eta_G: Cocycle
    eta_R: Cocycle
    L: GeneratingFunctional
    L_G: GeneratingFunctional
    L_R: GeneratingFunctional
    G_basis: list[SparseVector] = field(default_factory=list)
    R_basis: list[SparseVector] = field(default_factory=list)
    window_stable: bool = True
    report: Report = field(default_factory=lambda: Report('decompose'))


def _shifted_pi(c: Cocycle, g: int) -> SparseMatrix:
    return c.pi_images[g] - SparseMatrix.identity(c.dim, c.backend).scale(c.presentation.epsilon_images[g])


def gaussian_subspace(c: Cocycle) -> list[SparseVector]:
    """Basis of the joint kernel of pi(g) - epsilon(g) over generators."""
    rows = EchelonBasis(c.dim, c.backend)
    for g in range(len(c.system.generators)):
        shifted = _shifted_pi(c, g)
        for row in shifted.rows.values():
            rows.add(SparseVector(c.dim, row, c.backend))
    dense = [v.to_list() for v in rows.vectors]
    return nullspace(dense, c.dim, c.backend)


def k2_vectors(c: Cocycle, max_word: int) -> list[SparseVector]:
    """eta((g - epsilon(g))(w - epsilon(w))) for generators g and 1 <= |w| <= max_word."""
    shifted = [_shifted_pi(c, g) for g in range(len(c.system.generators))]
    out = []
    for w in enumerate_normal_words(c.system, max_word, 1):
        v = c.eta_word(w)
        out.extend(m.matvec(v) for m in shifted)
    return [v for v in out if not v.is_zero()]


def _span(vectors, dim, backend) -> EchelonBasis:
    basis = EchelonBasis(dim, backend)
    for v in vectors:
        basis.add(v)
    return basis


def _component(c: Cocycle, proj: SparseMatrix, name: str) -> Cocycle:
    n = len(c.system.generators)
    return Cocycle(c.presentation, c.dim, c.pi_images,
                   {g: proj.matvec(c.eta_images[g]) for g in range(n)}, c.cutoff, c.metric, name)


def decompose(c: Cocycle) -> Decomposition:
    """Split c into its maximal Gaussian part and purely non-Gaussian part.

    Raises:
        ValidationFailed: If c is not well defined or L != L_G + L_R
        NotComplementary: If R and G do not span the carrier
    """
    check_cocycle_welldefined(c).require(f"Cocycle {c.name} is not well defined")
    if eta_span_rank(c) < c.dim:
        c = restrict_to_span(c)
    report = Report('decompose')
    b = c.backend
    G = orthogonal_basis(gaussian_subspace(c), c.metric)
    r_vectors = k2_vectors(c, c.cutoff)
    R_span = _span(r_vectors, c.dim, b)
    R_inner = len(_span(k2_vectors(c, c.cutoff - 1), c.dim, b)) if c.cutoff > 1 else 0
    stable = R_inner == len(R_span)
    if not stable:
        logger.warning(f"eta(K2) grows from {R_inner} to {len(R_span)} at degree {c.cutoff}; "
                       f"R is only certified on the window")
        report.warn(f"R window not stable: rank {R_inner} -> {len(R_span)}")
    R = orthogonal_basis(r_vectors, c.metric)
    report.add('G and R complementary', len(G) + len(R) == c.dim, None, None,
               {'dim_G': len(G), 'dim_R': len(R), 'dim': c.dim})
    if len(G) + len(R) != c.dim:
        raise NotComplementary(f"dim G + dim R = {len(G)} + {len(R)} != {c.dim}; enlarge the cutoff")
    P_G = projector(G, c.dim, b, c.metric)
    P_R = projector(R, c.dim, b, c.metric)
    ident = SparseMatrix.identity(c.dim, b)
    report.add('P_G + P_R = I', P_G + P_R == ident)
    report.add('P_G P_R = 0', (P_G @ P_R).is_zero())

    eta_G = _component(c, P_G, f"{c.name}_G")
    eta_R = _component(c, P_R, f"{c.name}_R")
    L = functional_from_cocycle(c)
    L_G = functional_from_cocycle(eta_G)
    L_R = functional_from_cocycle(eta_R)
    tally = Tally('L = L_G + L_R')
    for w in enumerate_normal_words(c.system, L.degree, 1):
        d = L.value(w) - L_G.value(w) - L_R.value(w)
        tally.record(d.is_zero(), abs(d), c.system.format_word(w))
    tally.emit(report, degree=L.degree)
    report.data.update({'dim_G': len(G), 'dim_R': len(R), 'window_stable': stable})
    d = Decomposition(c, P_G, P_R, eta_G, eta_R, L, L_G, L_R, G, R, stable, report)
    report.extend(check_invariance(d))
    report.require(f"Decomposition of {c.name} failed")
    logger.info(f"Decomposed {c.name}: dim G = {len(G)}, dim R = {len(R)}")
    return d


def check_invariance(d: Decomposition) -> Report:
    """P_G and P_R commute with every pi(g)."""
    report = Report('invariance')
    c = d.cocycle
    for label, proj in (('G', d.P_G), ('R', d.P_R)):
        tally = Tally(f"{label} invariant under pi")
        for g in range(len(c.system.generators)):
            diff = proj @ c.pi_images[g] - c.pi_images[g] @ proj
            tally.record(diff.is_zero(), float(diff.nnz()), c.system.generators[g])
        tally.emit(report)
    return report


def check_parts_alpha_real(d: Decomposition, max_deg: int | None = None) -> Report:
    report = Report('parts-alpha-real')
    report.extend(is_alpha_real(d.eta_G, max_deg), 'eta_G')
    report.extend(is_alpha_real(d.eta_R, max_deg), 'eta_R')
    rest = [d.P_G.matvec(d.eta_R.eta_images[g]) for g in range(len(d.cocycle.system.generators))]
    report.add('eta_R has trivial Gaussian part', all(v.is_zero() for v in rest))
    return report


def is_gaussian_functional(L: GeneratingFunctional, max_deg: int | None = None) -> Report:
    """L(x^* x) = 0 for x = (u - epsilon(u))(v - epsilon(v)), |u| + |v| <= max_deg."""
    P = L.presentation
    max_deg = L.degree // 2 if max_deg is None else max_deg
    words = enumerate_normal_words(L.system, max_deg - 1, 1) if max_deg >= 2 else []
    shifted = {w: P.monomial(w) - P.epsilon_word(w) for w in words}
    report = Report('gaussian-functional')
    tally = Tally('L vanishes on K2 squares')
    for u, v in itertools.product(words, repeat=2):
        if len(u) + len(v) > max_deg:
            continue
        x = mul(shifted[u], shifted[v])
        value = L(mul(star(x), x))
        tally.record(value.is_zero(), abs(value),
                     f"({L.system.format_word(u)} - e)({L.system.format_word(v)} - e)")
    tally.emit(report, max_deg=max_deg)
    return report


def is_gaussian_cocycle(c: Cocycle, max_deg: int | None = None) -> Report:
    """eta(ab) = epsilon(a) eta(b) + eta(a) epsilon(b) on word pairs."""
    P = c.presentation
    max_deg = c.cutoff // 2 if max_deg is None else max_deg
    words = enumerate_normal_words(c.system, max_deg, 1)
    report = Report('gaussian-cocycle')
    tally = Tally('Gaussian cocycle identity')
    for a, b in itertools.product(words, repeat=2):
        lhs = eta_eval(c, mul(P.monomial(a), P.monomial(b)))
        rhs = c.eta_word(b).scale(P.epsilon_word(a)) + c.eta_word(a).scale(P.epsilon_word(b))
        diff = lhs - rhs
        tally.record(diff.is_zero(), max((abs(x) for x in diff.entries.values()), default=0.0),
                     f"({c.system.format_word(a)}, {c.system.format_word(b)})")
    tally.emit(report, max_deg=max_deg)
    return report


def _fit_antilinear(c: Cocycle, sources: list[SparseVector], targets: list[SparseVector],
                    words: list[Word], label: str):
    """Matrix X with X conj(s) = t, so that T = X o conj."""
    fit = fit_operator([s.conj() for s in sources], targets, c.dim, c.dim, c.backend, c.metric)
    if not fit.consistent:
        raise IllDefined(f"{label} is not well defined on the eta-span: dependency broken at "
                         f"eta({c.system.format_word(words[fit.witness])})")
    return fit


def check_T_operators(c: Cocycle, max_deg: int | None = None) -> Report:
    """The conjugate-linear maps T: eta(a) -> eta(S_alpha(a)^*) and T': eta(a) -> eta(S_alpha(a^*)).

    Both are fitted on the eta-span of words up to max_deg, then checked for
    involutivity, the adjointness relation <T eta(a), T' eta(b)> = <eta(b), eta(a)>
    and invariance of eta(K_2).

    Raises:
        IllDefined: If T or T' is inconsistent across linear dependencies
        DegreeExceeded: If the images leave the cutoff
    """
    P = c.presentation
    ad = antipode_degree(P)
    max_deg = min(3, c.cutoff // (ad * ad)) if max_deg is None else max_deg
    words = enumerate_normal_words(c.system, max_deg, 1)
    s_alpha = lambda p: twisted_antipode(P, p)
    report = Report('T-operators')
    sources = [c.eta_word(w) for w in words]
    t_targets = [eta_eval(c, star(s_alpha(P.monomial(w)))) for w in words]
    td_targets = [eta_eval(c, s_alpha(star(P.monomial(w)))) for w in words]
    fit_t = _fit_antilinear(c, sources, t_targets, words, 'T')
    fit_td = _fit_antilinear(c, sources, td_targets, words, "T'")
    report.add('T well defined', True, fit_t.residual)
    report.add("T' well defined", True, fit_td.residual)

    inv_t = Tally('T involutive')
    inv_td = Tally("T' involutive")
    for w, src in zip(words, sources):
        x = P.monomial(w)
        twice = eta_eval(c, star(s_alpha(star(s_alpha(x)))))
        d = twice - src
        inv_t.record(d.is_zero(), max((abs(v) for v in d.entries.values()), default=0.0), c.system.format_word(w))
        twice = eta_eval(c, s_alpha(star(s_alpha(star(x)))))
        d = twice - src
        inv_td.record(d.is_zero(), max((abs(v) for v in d.entries.values()), default=0.0), c.system.format_word(w))
    inv_t.emit(report)
    inv_td.emit(report)

    adjoint = Tally("T and T' adjoint")
    for (i, a), (j, b) in itertools.product(enumerate(words), repeat=2):
        d = c.inner(t_targets[i], td_targets[j]) - c.inner(sources[j], sources[i])
        adjoint.record(d.is_zero(), abs(d), f"({c.system.format_word(a)}, {c.system.format_word(b)})")
    adjoint.emit(report)

    R = _span(k2_vectors(c, c.cutoff), c.dim, c.backend)
    inv_R = Tally('T leaves eta(K2) invariant')
    inv_Rd = Tally("T' leaves eta(K2) invariant")
    gens = [P.monomial((g,)) - P.epsilon_images[g] for g in range(len(c.system.generators))]
    for w in enumerate_normal_words(c.system, max_deg - 1, 1) if max_deg >= 2 else []:
        shifted_w = P.monomial(w) - P.epsilon_word(w)
        for g, x_g in enumerate(gens):
            x = mul(x_g, shifted_w)
            label = f"({c.system.generators[g]} - e)({c.system.format_word(w)} - e)"
            inv_R.record(R.contains(eta_eval(c, star(s_alpha(x)))), 0.0, label)
            inv_Rd.record(R.contains(eta_eval(c, s_alpha(star(x)))), 0.0, label)
    inv_R.emit(report)
    inv_Rd.emit(report)
    report.data.update({'max_deg': max_deg, 'span_rank': len(fit_t.pivots)})
    return report
