"""Step 1: Validate every preset and run the negative admissibility control."""

from src.hopfcorr.core.hopf import verify_admissible
from src.hopfcorr.core.report import Report
from src.hopfcorr.core.scalars import Scalar
from src.hopfcorr.utils.presets import PRESETS, load_presentation, validate_presentation

STRUCTURE_DEGREE = 4


def verify_presets(max_deg: int = STRUCTURE_DEGREE) -> list[Report]:
    """
    Confluence, Hopf axioms and admissibility for all shipped presets.

    Args:
        max_deg: Word degree of the structure checks

    Returns:
        One report per preset
    """
    print("-" * 80)
    print(" 🔍 Step 1: Verifying presets...")

    reports = []
    for name in PRESETS:
        P = load_presentation(name, validate=False)
        report = validate_presentation(P, max_deg)
        report.command = f"verify:{name}"
        mark = '✅' if report.passed else '❌'
        print(f"{mark} {name}: {len(report.checks)} checks, alpha={P.alpha_label}")
        reports.append(report)
    reports.append(negative_admissibility_control())
    return reports


def negative_admissibility_control() -> Report:
    """alpha(u) = -u on C[Z] must fail bijectivity of id + alpha."""
    P = load_presentation('c-z', validate=False)
    minus = Scalar.of(-1, P.backend)
    flipped = P.with_alpha({g: minus for g in range(len(P.generators))}, 'flip')
    admissible = verify_admissible(flipped, 2)
    check = admissible.get('(iv) id + alpha is bijective')

    report = Report('negative-control')
    report.add('flip rejected by (iv)', check is not None and check.passed is False,
               witness=None if check is None else check.witness)
    mark = '✅' if report.passed else '❌'
    print(f"{mark} negative control: {check.witness if check else 'no (iv) check'}")
    return report
