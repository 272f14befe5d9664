"""Step 3: Gaussian / non-Gaussian decomposition."""

from src.hopfcorr.analysis.gfcocycle import Cocycle
from src.hopfcorr.analysis.levydecomp import (check_parts_alpha_real, check_T_operators, decompose,
                                              is_gaussian_cocycle, is_gaussian_functional)
from src.hopfcorr.core.linalg import SparseMatrix
from src.hopfcorr.core.report import Report
from src.hopfcorr.core.scalars import Scalar
from src.hopfcorr.utils.presets import load_cocycle, load_presentation

GAUSSIAN_COORDINATES = 2
U2_CUTOFF = 4


def run_decomposition() -> list[Report]:
    """
    Split the Gaussian + tree cocycle on C[F2] and the mixed U(2) cocycle.

    Returns:
        One report per decomposed cocycle
    """
    print("-" * 80)
    print(" ✂️  Step 3: Decomposing cocycles...")

    P = load_presentation('c-f2')
    c = load_cocycle('gauss-tree.json', P, preset='c-f2')
    reports = [_decompose(c, 'c-f2')]

    P = load_presentation('u2-weighted')
    mixed = load_cocycle('mixed-cocycle.json', P, preset='u2-weighted')
    mixed = Cocycle(P, mixed.dim, mixed.pi_images, mixed.eta_images, U2_CUTOFF, mixed.metric, mixed.name)
    reports.append(_decompose(mixed, 'u2-weighted'))
    for r in reports:
        print(f"{'✅' if r.passed else '❌'} {r.summary()} "
              f"(dim G = {r.data.get('dim_G')}, dim R = {r.data.get('dim_R')})")
    return reports


def _decompose(c: Cocycle, preset: str) -> Report:
    d = decompose(c)
    report = Report(f"decompose:{preset}")
    report.extend(d.report)
    report.extend(is_gaussian_functional(d.L_G))
    report.extend(is_gaussian_cocycle(d.eta_G), 'eta_G')
    report.extend(check_parts_alpha_real(d))
    report.extend(check_T_operators(c))

    b = c.backend
    one = Scalar.one(b)
    block = SparseMatrix((c.dim, c.dim), {i: {i: one} for i in range(GAUSSIAN_COORDINATES)}, b)
    report.add('P_G is the Gaussian block projection', d.P_G == block)
    report.data.update(d.report.data)
    return report
