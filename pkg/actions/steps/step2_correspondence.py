"""Step 2: Cocycle <-> functional correspondence on every preset."""

from src.hopfcorr.analysis.coquant import conjugate_symmetrize
from src.hopfcorr.analysis.gfcocycle import (attempt_functional, check_generating, cocycle_from_functional,
                                             functional_from_cocycle, gram_matrix, is_salpha_invariant,
                                             eta_identities_check, roundtrip_check, two_cocycle_check,
                                             two_form_agreement, yields_coboundary)
from src.hopfcorr.core.report import Report, Tally
from src.hopfcorr.core.scalars import Scalar
from src.hopfcorr.utils.presets import load_cocycle, load_functional, load_presentation

CLOSED_FORM_DEGREE = 8
IDENTITY_DEGREE = 3


def run_correspondence() -> list[Report]:
    """
    Closed forms on C[Z], the SUq(2) symmetrized cocycle, round trips,
    the identity suite and the attempt diagnostics.

    Returns:
        Reports of every sub-check
    """
    print("-" * 80)
    print(" 🔁 Step 2: Cocycle <-> functional correspondence...")

    reports = [closed_form_cz(), symmetrized_suq2()]
    reports.extend(roundtrips())
    reports.extend(identity_suite())
    reports.extend(attempts())
    for r in reports:
        print(f"{'✅' if r.passed else '❌'} {r.summary()}")
    return reports


def closed_form_cz() -> Report:
    """eta(u^n) = n gives L(u^n) = -n^2/2 and the Gram <eta(u^m), eta(u^n)> = mn."""
    P = load_presentation('c-z')
    c = load_cocycle('gaussian-cocycle.json', P, preset='c-z')
    L = functional_from_cocycle(c)
    u, u_star = 0, 1

    report = Report('closed-form:c-z')
    closed = Tally('L(u^n) = -n^2/2')
    for n in range(1, CLOSED_FORM_DEGREE + 1):
        expected = Scalar.of(-n * n, P.backend) / 2
        for word in ((u,) * n, (u_star,) * n):
            d = L.value(word) - expected
            closed.record(d.is_zero(), abs(d), P.system.format_word(word))
    closed.emit(report)
    report.extend(yields_coboundary(L, c))

    eta = cocycle_from_functional(L)
    words = [(u,) * m for m in range(1, L.cutoff + 1)] + [(u_star,) * m for m in range(1, L.cutoff + 1)]
    powers = [m for m in range(1, L.cutoff + 1)] + [-m for m in range(1, L.cutoff + 1)]
    gram = gram_matrix(eta, words)
    recovered = Tally('GNS Gram = mn')
    for i, m in enumerate(powers):
        for j, n in enumerate(powers):
            d = gram[i][j] - Scalar.of(m * n, P.backend)
            recovered.record(d.is_zero(), abs(d), f"({m}, {n})")
    recovered.emit(report)
    return report


def symmetrized_suq2() -> Report:
    """The symmetrized SUq(2) cocycle yields a generating functional."""
    P = load_presentation('suq2')
    c_sym = conjugate_symmetrize(load_cocycle('cocycle.json', P, preset='suq2'))
    L = functional_from_cocycle(c_sym)

    report = Report('symmetrized:suq2')
    report.extend(check_generating(L))
    report.extend(is_salpha_invariant(L))
    report.extend(yields_coboundary(L, c_sym, IDENTITY_DEGREE))
    report.data.update({'dim': c_sym.dim, 'cutoff': c_sym.cutoff, 'degree': L.degree})
    return report


def roundtrips() -> list[Report]:
    """L -> GNS -> L on each preset's S_alpha-invariant functional."""
    reports = []
    P = load_presentation('c-z')
    reports.append(roundtrip_check(load_functional('gaussian.json', P, preset='c-z')))
    P = load_presentation('c-f2')
    reports.append(roundtrip_check(load_functional('word-length.json', P, preset='c-f2')))
    P = load_presentation('u2-weighted')
    reports.append(roundtrip_check(functional_from_cocycle(
        load_cocycle('mixed-cocycle.json', P, preset='u2-weighted'))))
    P = load_presentation('suq2')
    reports.append(roundtrip_check(functional_from_cocycle(
        conjugate_symmetrize(load_cocycle('cocycle.json', P, preset='suq2')))))
    for name, r in zip(('c-z', 'c-f2', 'u2-weighted', 'suq2'), reports):
        r.command = f"roundtrip:{name}"
    return reports


def identity_suite() -> list[Report]:
    """Twisted-antipode identities, two-form agreement and the 2-cocycle boundary."""
    cases = [('c-z', 'gaussian-cocycle.json'), ('c-f2', 'gauss-tree.json'),
             ('u2-weighted', 'mixed-cocycle.json'), ('suq2', 'cocycle.json')]
    reports = []
    for preset, artifact in cases:
        c = load_cocycle(artifact, load_presentation(preset), preset=preset)
        report = Report(f"identities:{preset}")
        report.extend(eta_identities_check(c, IDENTITY_DEGREE))
        report.extend(two_form_agreement(c, IDENTITY_DEGREE))
        report.extend(two_cocycle_check(c, IDENTITY_DEGREE))
        reports.append(report)
    return reports


def attempts() -> list[Report]:
    """The non-alpha-real control must show a residual, the alpha-real cocycles none."""
    P = load_presentation('c-f2')
    twisted = attempt_functional(load_cocycle('twisted.json', P, preset='c-f2'))
    control = Report('attempt:twisted')
    worst = twisted.worst_residual()
    control.add('non-alpha-real cocycle shows a residual', worst > 1e-6, worst)

    reports = [control]
    P = load_presentation('c-z')
    reports.append(attempt_functional(load_cocycle('gaussian-cocycle.json', P, preset='c-z')))
    P = load_presentation('suq2')
    reports.append(attempt_functional(conjugate_symmetrize(load_cocycle('cocycle.json', P, preset='suq2'))))
    reports[1].command = 'attempt:c-z'
    reports[2].command = 'attempt:suq2'
    return reports
