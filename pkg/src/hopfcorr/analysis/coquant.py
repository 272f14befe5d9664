"""Matrix-coefficient toolkit over corepresentation families.

A functional L becomes the family of matrices L^b = (id x L)(U^b), a cocycle
the family of Gram matrices X^b_ij = sum_k <eta(u_ki), eta(u_kj)>. On these
families we check the Q^b identity, the spectral pinching along the
eigenprojections of Q^b, properness up to a horizon, and the gain from the
conjugate symmetrization eta + eta-bar.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from ..core.errors import ContextMismatch
from ..core.hopf import Presentation, antipode_degree, delta, unitary_antipode
from ..core.linalg import Dense, SparseMatrix, SparseVector, dense_zero, extreme_eigenvalues, ldl_factor
from ..core.ncalg import NCPoly, TensorPoly, enumerate_normal_words, mul, star
from ..core.report import Report, Tally
from ..core.scalars import Backend, Scalar
from .gfcocycle import Cocycle, GeneratingFunctional, direct_sum, eta_eval, is_alpha_real, pi_eval

logger = logging.getLogger(__name__)

PROPER = 'proper up to horizon'
NOT_PROPER = 'not proper at horizon'


@dataclass
class Corep:
    """Finite-dimensional corepresentation with its diagonal Q matrix.

    Args:
        label: Display label (group word, spin index, ...)
        dim: Size n of the matrix
        U: n x n matrix of coefficients
        Q: Positive diagonal of Q
        level: Word length or spin index, used for horizon verdicts
    """

    label: str
    dim: int
    U: list[list[NCPoly]]
    Q: list[Scalar]
    level: int = 0

    def spectral_groups(self) -> list[list[int]]:
        """Index groups of equal Q entries (the spectral projections of Q)."""
        groups: list[list[int]] = []
        for i, q in enumerate(self.Q):
            for g in groups:
                if self.Q[g[0]] == q:
                    g.append(i)
                    break
            else:
                groups.append([i])
        return groups


@dataclass
class CorepFamily:
    presentation: Presentation
    coreps: list[Corep]
    name: str = 'coreps'
    horizon: int | None = None
    # Raw U and Q entries per corep, as read from a file
    source: list[dict] | None = field(default=None, repr=False, compare=False)

    def __iter__(self) -> Iterator[Corep]:
        return iter(self.coreps)

    def __len__(self) -> int:
        return len(self.coreps)

    def get(self, label: str) -> Corep:
        for beta in self.coreps:
            if beta.label == label:
                return beta
        raise KeyError(f"No corep labelled {label!r} in {self.name}")

    @property
    def top_level(self) -> int:
        if self.horizon is not None:
            return self.horizon
        return max((beta.level for beta in self.coreps), default=0)


def group_element_family(P: Presentation, horizon: int) -> CorepFamily:
    """One-dimensional coreps given by the normal words up to the horizon.

    Valid for group algebras, where every normal word is a group-like element.
    """
    one = Scalar.one(P.backend)
    coreps = [Corep(P.system.format_word(w) or '1', 1, [[P.monomial(w)]], [one], len(w))
              for w in enumerate_normal_words(P.system, horizon)]
    logger.debug(f"group_element_family({P.name}, {horizon}): {len(coreps)} coreps")
    return CorepFamily(P, coreps, f"{P.name}-words-{horizon}", horizon)


def check_corep_family(F: CorepFamily) -> Report:
    """Corep property of Delta, two-sided unitarity and positivity of Q."""
    P = F.presentation
    system = P.system
    report = Report('check-coreps')
    corep = Tally('Delta(u_ij) = sum_k u_ik (x) u_kj')
    unitary = Tally('U U^* = I = U^* U')
    positive = Tally('Q positive')
    for beta in F:
        n = beta.dim
        for i in range(n):
            for j in range(n):
                expected = TensorPoly(system, 2, {})
                for k in range(n):
                    expected = expected + TensorPoly.simple([beta.U[i][k], beta.U[k][j]])
                d = delta(P, beta.U[i][j]) - expected
                corep.record(d.is_zero(), 0.0 if d.is_zero() else 1.0, f"{beta.label}[{i},{j}]")
                target = system.scalar(1 if i == j else 0)
                left = system.zero()
                right = system.zero()
                for k in range(n):
                    left = left + mul(beta.U[i][k], star(beta.U[j][k]))
                    right = right + mul(star(beta.U[k][i]), beta.U[k][j])
                ok = left == target and right == target
                unitary.record(ok, 0.0 if ok else 1.0, f"{beta.label}[{i},{j}]")
        positive.record(len(beta.Q) == n and all(q.is_positive() for q in beta.Q), 0.0, beta.label)
    corep.emit(report)
    unitary.emit(report)
    positive.emit(report)
    report.data.update({'family': F.name, 'coreps': len(F)})
    return report


# Matrix families

@dataclass
class MatrixFunctional:
    """L^b = (id x L)(U^b) for each corep label."""

    family: CorepFamily
    matrices: dict[str, Dense] = field(default_factory=dict)

    def __getitem__(self, label: str) -> Dense:
        return self.matrices[label]


@dataclass
class MatrixCocycle:
    """Stacked columns (eta(u_1j), ..., eta(u_nj)) and the Gram matrices (eta^b)^* eta^b."""

    family: CorepFamily
    stacked: dict[str, SparseMatrix] = field(default_factory=dict)
    gram: dict[str, Dense] = field(default_factory=dict)


def _check_family(F: CorepFamily, P: Presentation) -> None:
    if F.presentation.system is not P.system:
        raise ContextMismatch(f"Corep family {F.name} belongs to another algebra")


def functional_matrix(L: GeneratingFunctional, F: CorepFamily) -> MatrixFunctional:
    """Apply L entrywise to every U^b.

    Raises:
        DegreeExceeded: If a coefficient lies outside the stored range of L
    """
    _check_family(F, L.presentation)
    out = MatrixFunctional(F)
    for beta in F:
        out.matrices[beta.label] = [[L(beta.U[i][j]) for j in range(beta.dim)] for i in range(beta.dim)]
    return out


def cocycle_matrix(c: Cocycle, F: CorepFamily) -> MatrixCocycle:
    """Stack eta of the corep coefficients and form their Gram matrices.

    Raises:
        DegreeExceeded: If a coefficient lies outside the cutoff
    """
    _check_family(F, c.presentation)
    out = MatrixCocycle(F)
    for beta in F:
        n = beta.dim
        blocks = [[eta_eval(c, beta.U[k][j]) for k in range(n)] for j in range(n)]
        columns = []
        for j in range(n):
            col = SparseVector.zero(0, c.backend)
            for v in blocks[j]:
                col = col.direct_sum(v)
            columns.append(col)
        out.stacked[beta.label] = SparseMatrix.from_columns(columns, n * c.dim, c.backend)
        gram = dense_zero(n, n, c.backend)
        for i in range(n):
            for j in range(n):
                total = Scalar.zero(c.backend)
                for k in range(n):
                    total = total + c.inner(blocks[i][k], blocks[j][k])
                gram[i][j] = total
        out.gram[beta.label] = gram
    return out


def hermitian_check(M: MatrixFunctional) -> Report:
    """Every L^b is hermitian (the matrix form of S-invariance)."""
    report = Report('matrix-hermitian')
    tally = Tally('L^b hermitian')
    for label, m in M.matrices.items():
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                d = x - m[j][i].conj()
                tally.record(d.is_zero(), abs(d), f"{label}[{i},{j}]")
    tally.emit(report)
    return report


def _sqrt_ratio(num: Scalar, den: Scalar) -> Scalar:
    """sqrt(num / den) for positive reals; exact under Exact when rational."""
    return (num / den).power(Fraction(1, 2))


def qbeta_identity_check(c: Cocycle, L: GeneratingFunctional, F: CorepFamily) -> Report:
    """L^b + Q^-1/2 L^b Q^1/2 = -Q^-1/2 (eta^b)^* eta^b Q^1/2 entrywise.

    Entry (i, j) reads L_ij + r_ij L_ij + r_ij X_ij with r_ij = sqrt(q_j / q_i).

    Raises:
        DegreeExceeded: If a coefficient leaves the stored range
        IrrationalPower: If some q_j / q_i has no rational square root under Exact
    """
    Lm = functional_matrix(L, F)
    Xm = cocycle_matrix(c, F)
    report = Report('qbeta')
    tally = Tally('Q^b identity')
    for beta in F:
        lb, xb = Lm[beta.label], Xm.gram[beta.label]
        for i in range(beta.dim):
            for j in range(beta.dim):
                r = _sqrt_ratio(beta.Q[j], beta.Q[i])
                d = lb[i][j] + r * lb[i][j] + r * xb[i][j]
                tally.record(d.is_zero(), abs(d), f"{beta.label}[{i},{j}]")
    tally.emit(report, coreps=len(F))
    report.data['alpha'] = c.presentation.alpha_label
    return report


def _pinch(m: Dense, beta: Corep, backend: Backend) -> Dense:
    out = dense_zero(beta.dim, beta.dim, backend)
    for group in beta.spectral_groups():
        for i in group:
            for j in group:
                out[i][j] = m[i][j]
    return out


def pinch_average(M: MatrixFunctional) -> MatrixFunctional:
    """Sum over spectral projections P_m of Q^b of P_m L^b P_m.

    This is the finite action of averaging over the scaling group: blocks
    coupling distinct eigenvalues of Q^b are removed.
    """
    backend = M.family.presentation.backend
    out = MatrixFunctional(M.family)
    for beta in M.family:
        out.matrices[beta.label] = _pinch(M.matrices[beta.label], beta, backend)
    return out


def pinch_identity_check(c: Cocycle, L: GeneratingFunctional, F: CorepFamily) -> Report:
    """2 L~^b = -sum_m P_m (eta^b)^* eta^b P_m, plus idempotence of the pinching."""
    backend = c.backend
    Lm = functional_matrix(L, F)
    pinched = pinch_average(Lm)
    twice = pinch_average(pinched)
    Xm = cocycle_matrix(c, F)
    report = Report('pinch')
    identity = Tally('2 L~ = -pinched Gram')
    idempotent = Tally('pinching idempotent')
    trivial = Tally('pinching trivial for Q = I')
    for beta in F:
        lb = pinched[beta.label]
        xb = _pinch(Xm.gram[beta.label], beta, backend)
        single = len(beta.spectral_groups()) == 1
        for i in range(beta.dim):
            for j in range(beta.dim):
                where = f"{beta.label}[{i},{j}]"
                d = lb[i][j] * 2 + xb[i][j]
                identity.record(d.is_zero(), abs(d), where)
                d = twice[beta.label][i][j] - lb[i][j]
                idempotent.record(d.is_zero(), abs(d), where)
                if single:
                    d = lb[i][j] - Lm[beta.label][i][j]
                    trivial.record(d.is_zero(), abs(d), where)
    identity.emit(report)
    idempotent.emit(report)
    trivial.emit(report)
    report.data['pinched'] = {label: [[str(x) for x in row] for row in m]
                              for label, m in pinched.matrices.items()}
    return report


# Properness

def _dominates(m: Dense, level: Scalar, backend: Backend) -> tuple[bool, float, float]:
    """Whether m - level I is positive semidefinite, with the extreme eigenvalues of m."""
    shifted = [[x - level if i == j else x for j, x in enumerate(row)] for i, row in enumerate(m)]
    ok = ldl_factor(shifted, backend).psd
    low, high = extreme_eigenvalues(m)
    return ok, low, high


def properness_check(target: Cocycle | GeneratingFunctional, F: CorepFamily,
                     M: Scalar | Fraction | int | float) -> Report:
    """Certify (eta^b)^* eta^b >= M I, resp. L^b <= -M I, off an exceptional set.

    The verdict is "proper up to horizon" when no corep at the outermost
    enumerated level is exceptional; coreps beyond the horizon are not
    examined.

    Args:
        target: Cocycle or generating functional
        F: Corep family enumerated up to a horizon
        M: Level of the condition (non-strict inequalities)

    Returns:
        Report with data keys exceptional, verdict and rows (one per corep)
    """
    backend = F.presentation.backend
    level = M if isinstance(M, Scalar) else Scalar.of(M, backend)
    if isinstance(target, Cocycle):
        mats = cocycle_matrix(target, F).gram
        form = 'cocycle'
    else:
        lm = functional_matrix(target, F)
        mats = {label: [[-x for x in row] for row in m] for label, m in lm.matrices.items()}
        form = 'functional'
    report = Report('proper')
    rows = []
    exceptional = []
    for beta in F:
        ok, low, high = _dominates(mats[beta.label], level, backend)
        if form == 'functional':
            low, high = -high, -low
        rows.append({'label': beta.label, 'level': beta.level, 'min_eigenvalue': low,
                     'max_eigenvalue': high, 'exceptional': not ok})
        if not ok:
            exceptional.append(beta)
    top = F.top_level
    at_top = [beta.label for beta in exceptional if beta.level >= top]
    verdict = PROPER if not at_top else NOT_PROPER
    report.add(verdict, not at_top, None, at_top[0] if at_top else None,
               {'form': form, 'M': str(level), 'horizon': top})
    report.data.update({
        'form': form,
        'M': str(level),
        'horizon': top,
        'verdict': verdict,
        'exceptional': [beta.label for beta in exceptional],
        'exceptional_count': len(exceptional),
        'certified_count': len(F) - len(exceptional),
        'rows': rows,
    })
    logger.info(f"properness ({form}, M={level}): {len(exceptional)} exceptional of {len(F)}, {verdict}")
    return report


# Conjugate symmetrization

def conjugate_cocycle(c: Cocycle) -> Cocycle:
    """eta-bar(g) = iota eta(R(g^*)) with pi-bar(g) = iota pi(R(g^*)) iota on the conjugate space.

    Raises:
        IrrationalPower: If the square roots of the modular weights are irrational under Exact
    """
    P = c.presentation
    n = len(P.generators)
    images = {g: unitary_antipode(P, star(P.monomial((g,)))) for g in range(n)}
    pi = {g: pi_eval(c, images[g]).conj() for g in range(n)}
    eta = {g: eta_eval(c, images[g]).conj() for g in range(n)}
    return Cocycle(P, c.dim, pi, eta, c.cutoff // antipode_degree(P), c.metric, f"{c.name}-bar")


def conjugate_symmetrize(c: Cocycle) -> Cocycle:
    """eta + eta-bar on the doubled carrier, over alpha = tau_{i/2}.

    Raises:
        IrrationalPower: If tau_{i/2} is not rational under Exact
        ValidationFailed: If the sum is not tau_{i/2}-real
    """
    P = c.presentation.with_tau(Fraction(1, 2))
    base = c.rebase(P)
    out = direct_sum(base, conjugate_cocycle(base), f"{c.name}+bar")
    is_alpha_real(out).require(f"Symmetrized {c.name} is not tau_(i/2)-real")
    logger.info(f"Symmetrized {c.name}: dim {out.dim}, cutoff {out.cutoff}")
    return out


def symmetrization_gain_check(c: Cocycle, c_sym: Cocycle, F: CorepFamily) -> Report:
    """(eta + eta-bar)^b Gram = eta^b Gram + eta-bar^b Gram >= eta^b Gram."""
    backend = c.backend
    X = cocycle_matrix(c, F).gram
    Xs = cocycle_matrix(c_sym, F).gram
    bar = conjugate_cocycle(c.rebase(c_sym.presentation))
    Xb = cocycle_matrix(bar, F).gram
    report = Report('symmetrization-gain')
    additive = Tally('Gram of the sum is the sum of Grams')
    gain = Tally('symmetrization never decreases the Gram')
    zero = Scalar.zero(backend)
    for beta in F:
        label = beta.label
        diff = [[Xs[label][i][j] - X[label][i][j] for j in range(beta.dim)] for i in range(beta.dim)]
        for i in range(beta.dim):
            for j in range(beta.dim):
                d = diff[i][j] - Xb[label][i][j]
                additive.record(d.is_zero(), abs(d), f"{label}[{i},{j}]")
        ok, low, _ = _dominates(diff, zero, backend)
        gain.record(ok, max(0.0, -low), label)
    additive.emit(report)
    gain.emit(report)
    return report
