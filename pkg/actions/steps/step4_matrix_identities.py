"""Step 4: Corep matrix identities (Q^b identity, pinching, symmetrization gain)."""

from src.hopfcorr.analysis.coquant import (check_corep_family, conjugate_symmetrize, functional_matrix,
                                           hermitian_check, pinch_identity_check, qbeta_identity_check,
                                           symmetrization_gain_check)
from src.hopfcorr.analysis.gfcocycle import functional_from_cocycle
from src.hopfcorr.core.report import Report
from src.hopfcorr.utils.presets import load_cocycle, load_coreps, load_presentation


def run_matrix_identities() -> list[Report]:
    """
    Matrix identities on SUq(2) (fundamental corep, symmetrized cocycle)
    and on weighted U(2), where Q = I makes pinching trivial.

    Returns:
        One report per preset
    """
    print("-" * 80)
    print(" 📊 Step 4: Corep matrix identities...")

    P = load_presentation('suq2')
    base = load_cocycle('cocycle.json', P, preset='suq2')
    c_sym = conjugate_symmetrize(base)
    F = load_coreps('coreps.json', c_sym.presentation, preset='suq2')
    suq2 = _identities(c_sym, F, 'suq2')
    suq2.extend(symmetrization_gain_check(base, c_sym, F))

    P = load_presentation('u2-weighted')
    mixed = load_cocycle('mixed-cocycle.json', P, preset='u2-weighted')
    u2 = _identities(mixed, load_coreps('coreps.json', P, preset='u2-weighted'), 'u2-weighted')

    reports = [suq2, u2]
    for r in reports:
        print(f"{'✅' if r.passed else '❌'} {r.summary()}")
    return reports


def _identities(c, F, preset: str) -> Report:
    L = functional_from_cocycle(c)
    report = Report(f"matrix:{preset}")
    report.extend(check_corep_family(F))
    report.extend(hermitian_check(functional_matrix(L, F)))
    report.extend(qbeta_identity_check(c, L, F))
    pinch = pinch_identity_check(c, L, F)
    pinch.data.pop('pinched', None)
    report.extend(pinch)
    return report
