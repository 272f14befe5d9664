"""Step 5: Properness of the tree cocycle and the word-length functional on F2."""

from fractions import Fraction

from src.hopfcorr.analysis.coquant import cocycle_matrix, group_element_family, properness_check
from src.hopfcorr.core.report import Report, Tally
from src.hopfcorr.core.scalars import Scalar
from src.hopfcorr.utils.presets import load_cocycle, load_functional, load_presentation

HORIZON = 6
COCYCLE_LEVEL = 3
FUNCTIONAL_LEVEL = Fraction(3, 2)
EXCEPTIONAL_RADIUS = 2


def run_properness() -> list[Report]:
    """
    Gram of the tree cocycle on the ball of radius 6 is (|g|); the
    exceptional sets for M = 3 (cocycle) and M = 3/2 (functional -|g|/2)
    are exactly the ball of radius 2.

    Returns:
        Reports for the Gram closed form and both properness checks
    """
    print("-" * 80)
    print(" 🎯 Step 5: Properness on the free group...")

    P = load_presentation('c-f2')
    tree = load_cocycle('tree.json', P, preset='c-f2')
    F = group_element_family(P, HORIZON)

    gram = Report('tree-gram')
    tally = Tally('(eta^g)^* eta^g = |g|')
    X = cocycle_matrix(tree, F).gram
    for beta in F:
        d = X[beta.label][0][0] - Scalar.of(beta.level, P.backend)
        tally.record(d.is_zero(), abs(d), beta.label)
    tally.emit(gram, coreps=len(F))

    ball = sorted(beta.label for beta in F if beta.level <= EXCEPTIONAL_RADIUS)
    cocycle_form = properness_check(tree, F, COCYCLE_LEVEL)
    _expect_exceptional(cocycle_form, ball)
    word_length = load_functional('word-length.json', P, preset='c-f2')
    functional_form = properness_check(word_length, F, FUNCTIONAL_LEVEL)
    _expect_exceptional(functional_form, ball)
    cocycle_form.command = 'proper:tree'
    functional_form.command = 'proper:word-length'

    reports = [gram, cocycle_form, functional_form]
    for r in reports:
        extra = f", {r.data['exceptional_count']} exceptional" if 'exceptional_count' in r.data else ''
        print(f"{'✅' if r.passed else '❌'} {r.summary()}{extra}")
    return reports


def _expect_exceptional(report: Report, expected: list[str]) -> None:
    found = sorted(report.data['exceptional'])
    report.add(f"exceptional set is the ball of radius {EXCEPTIONAL_RADIUS}", found == expected,
               witness=None if found == expected else f"{len(found)} found, {len(expected)} expected")
