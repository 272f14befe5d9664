"""Command-line front end.

Usage:
    hopfcorr verify-hopf --preset suq2
    hopfcorr from-cocycle --preset c-z --cocycle gaussian-cocycle.json --out report.json
    hopfcorr roundtrip --preset c-z --functional gaussian.json --cutoff 4
    hopfcorr proper --preset c-f2 --cocycle tree.json --horizon 6 --M 3

The Report is printed as JSON on stdout (and written to --out); progress goes
to stderr. Exit code 0 iff the report passes, 1 on a failed report or
validation, 2 on any other library error.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from .analysis.coquant import (CorepFamily, check_corep_family, conjugate_symmetrize, functional_matrix,
                               group_element_family, hermitian_check, pinch_identity_check,
                               properness_check, qbeta_identity_check, symmetrization_gain_check)
from .analysis.gfcocycle import (Cocycle, GeneratingFunctional, attempt_functional, check_cocycle_welldefined,
                                 check_generating, cocycle_from_functional, functional_from_cocycle,
                                 is_alpha_real, is_salpha_invariant, eta_identities_check,
                                 roundtrip_check, tau_reality_transfer, two_cocycle_check,
                                 two_form_agreement, yields_coboundary)
from .analysis.levydecomp import check_parts_alpha_real, decompose, is_gaussian_functional
from .core.errors import DegreeExceeded, HopfCorrError, ParseError, ValidationFailed
from .core.hopf import Presentation, verify_admissible, verify_hopf_axioms
from .core.ncalg import check_local_confluence
from .core.report import Report, hash_payload
from .core.scalars import Backend, Tolerance, tolerance
from .utils.config import get_tolerance_defaults, set_log_level
from .utils.presets import (apply_alpha, load_cocycle, load_coreps, load_functional, load_presentation,
                            parse_ref, preset_path, resolve_artifact)
from .utils.storage import cocycle_to_dict, functional_to_dict, parse_coefficient, write_json
from .utils.tables import report_frame, rows_frame, write_table

logger = logging.getLogger(__name__)

COMMANDS = (
    'verify-hopf', 'check-admissible', 'from-cocycle', 'from-functional', 'roundtrip', 'attempt',
    'decompose', 'qbeta', 'pinch', 'proper', 'symmetrize', 'two-cocycle', 'tau-transfer',
)
STRUCTURE_DEGREE = 4


@dataclass
class RunConfig:
    """Effective configuration of one command.

    cutoff None keeps each artifact's own cutoff; tol / psd_tol None fall back
    to HOPFCORR_EPS_NUM / HOPFCORR_EPS_PSD.
    """

    command: str
    preset: str | None = None
    presentation: str | None = None
    cocycle: str | None = None
    functional: str | None = None
    coreps: str | None = None
    cutoff: int | None = None
    tol: float | None = None
    psd_tol: float | None = None
    backend: str | None = None
    horizon: int | None = None
    M: str = '1'
    alpha: str | None = None
    out: str | None = None
    artifact: str | None = None
    table: str | None = None
    max_deg: int | None = None
    t: str = '0'
    s: str = '1'
    symmetrized: bool = False
    log_level: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        if self.cutoff is not None and self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        if self.max_deg is not None and self.max_deg < 1:
            raise ValueError(f"max-deg must be >= 1, got {self.max_deg}")
        if (self.preset is None) == (self.presentation is None):
            raise ValueError("Give exactly one of --preset and --presentation")
        if self.presentation is not None and not Path(self.presentation).exists():
            raise ValueError(f"Presentation file not found: {self.presentation}")

    @property
    def source(self) -> str:
        return self.preset if self.preset is not None else self.presentation

    def tolerance(self) -> Tolerance:
        eps_num, eps_psd = get_tolerance_defaults()
        return Tolerance(eps_num if self.tol is None else self.tol,
                         eps_psd if self.psd_tol is None else self.psd_tol)


def _say(message: str) -> None:
    print(message, file=sys.stderr)


class _Session:
    """Inputs of one command, loaded lazily on the selected presentation."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.inputs: dict[str, Path] = {}
        self.artifact: dict[str, Any] | None = None
        self._presentation: Presentation | None = None

    def presentation(self, validate: bool = True) -> Presentation:
        if self._presentation is None:
            cfg = self.cfg
            backend = Backend.parse(cfg.backend) if cfg.backend else None
            P = load_presentation(cfg.source, backend, validate=validate)
            self.inputs['presentation'] = (preset_path(parse_ref(cfg.preset)[0]) if cfg.preset
                                           else Path(cfg.presentation))
            self._presentation = apply_alpha(P, cfg.alpha)
        return self._presentation

    def _resolve(self, kind: str, ref: str | None) -> Path:
        if ref is None:
            raise ParseError(f"{self.cfg.command} needs --{kind}")
        path = resolve_artifact(ref, self.cfg.preset)
        self.inputs[kind] = path
        return path

    def cocycle(self) -> Cocycle:
        c = load_cocycle(self._resolve('cocycle', self.cfg.cocycle), self.presentation(), self.cfg.preset)
        if self.cfg.cutoff is not None and self.cfg.cutoff != c.cutoff:
            c = Cocycle(c.presentation, c.dim, c.pi_images, c.eta_images, self.cfg.cutoff, c.metric, c.name)
        if self.cfg.symmetrized:
            c = conjugate_symmetrize(c)
        _say(f"📊 Cocycle {c.name}: dim {c.dim}, cutoff {c.cutoff}")
        return c

    def functional(self) -> GeneratingFunctional:
        L = load_functional(self._resolve('functional', self.cfg.functional), self.presentation(),
                            self.cfg.preset)
        cutoff = self.cfg.cutoff
        if cutoff is not None and cutoff != L.cutoff:
            if 2 * cutoff > L.degree:
                raise DegreeExceeded(f"cutoff {cutoff} needs values up to degree {2 * cutoff}, "
                                     f"{L.name} stores {L.degree}")
            L = GeneratingFunctional(L.presentation, L.values, cutoff, L.degree, L.name)
        _say(f"📊 Functional {L.name}: cutoff {L.cutoff}, degree {L.degree}")
        return L

    def coreps(self) -> CorepFamily:
        cfg = self.cfg
        P = self.presentation()
        if cfg.coreps is None:
            F = group_element_family(P, cfg.horizon if cfg.horizon is not None else 3)
        else:
            F = load_coreps(self._resolve('coreps', cfg.coreps), P, cfg.preset)
            if cfg.horizon is not None:
                kept = [beta for beta in F if beta.level <= cfg.horizon]
                F = CorepFamily(P, kept, F.name, cfg.horizon)
        check_corep_family(F).require(f"Corep family {F.name} is invalid")
        _say(f"📊 Coreps {F.name}: {len(F)} up to level {F.top_level}")
        return F


# Commands

def _verify_hopf(s: _Session) -> Report:
    P = s.presentation(validate=False)
    report = Report('verify-hopf')
    report.extend(check_local_confluence(P.system, 2 * max(P.system.max_lhs, 1)), 'confluence')
    report.extend(verify_hopf_axioms(P, s.cfg.max_deg or STRUCTURE_DEGREE))
    return report


def _check_admissible(s: _Session) -> Report:
    P = s.presentation(validate=False)
    report = Report('check-admissible')
    report.extend(verify_admissible(P, s.cfg.max_deg or STRUCTURE_DEGREE))
    return report


def _from_cocycle(s: _Session) -> Report:
    c = s.cocycle()
    report = Report('from-cocycle')
    report.extend(check_cocycle_welldefined(c).require(f"Cocycle {c.name} is not well defined"))
    report.extend(is_alpha_real(c, s.cfg.max_deg))
    L = functional_from_cocycle(c)
    report.extend(check_generating(L))
    report.extend(is_salpha_invariant(L))
    report.extend(yields_coboundary(L, c, s.cfg.max_deg))
    report.data.update({'functional': L.name, 'cutoff': L.cutoff, 'degree': L.degree})
    s.artifact = functional_to_dict(L)
    return report


def _from_functional(s: _Session) -> Report:
    L = s.functional()
    report = Report('from-functional')
    report.extend(check_generating(L).require(f"{L.name} is not a generating functional"))
    report.extend(is_salpha_invariant(L))
    c = cocycle_from_functional(L)
    report.extend(is_alpha_real(c, s.cfg.max_deg))
    report.extend(yields_coboundary(L, c, s.cfg.max_deg))
    report.data.update({'gns_dim': c.dim, 'gns_cutoff': c.cutoff})
    s.artifact = cocycle_to_dict(c)
    return report


def _roundtrip(s: _Session) -> Report:
    return roundtrip_check(s.functional(), s.cfg.max_deg)


def _attempt(s: _Session) -> Report:
    return attempt_functional(s.cocycle(), s.cfg.max_deg)


def _decompose(s: _Session) -> Report:
    d = decompose(s.cocycle())
    report = Report('decompose')
    report.extend(d.report)
    report.extend(is_gaussian_functional(d.L_G, s.cfg.max_deg))
    report.extend(check_parts_alpha_real(d, s.cfg.max_deg))
    report.data.update(d.report.data)
    s.artifact = {
        'kind': 'decomposition',
        'name': d.cocycle.name,
        'gaussian': functional_to_dict(d.L_G),
        'non_gaussian': functional_to_dict(d.L_R),
    }
    return report


def _qbeta(s: _Session) -> Report:
    c = s.cocycle()
    F = s.coreps()
    L = functional_from_cocycle(c)
    report = Report('qbeta')
    report.extend(hermitian_check(functional_matrix(L, F)))
    report.extend(qbeta_identity_check(c, L, F))
    return report


def _pinch(s: _Session) -> Report:
    c = s.cocycle()
    F = s.coreps()
    report = pinch_identity_check(c, functional_from_cocycle(c), F)
    report.data.pop('pinched', None)
    return report


def _proper(s: _Session) -> Report:
    P = s.presentation()
    target = s.cocycle() if s.cfg.cocycle is not None else s.functional()
    F = s.coreps()
    return properness_check(target, F, parse_coefficient(s.cfg.M, P.parameters, P.backend))


def _symmetrize(s: _Session) -> Report:
    cfg = s.cfg
    if cfg.symmetrized:
        raise ParseError("symmetrize already symmetrizes; drop --symmetrized")
    c = s.cocycle()
    c_sym = conjugate_symmetrize(c)
    report = Report('symmetrize')
    report.extend(is_alpha_real(c_sym, cfg.max_deg))
    if cfg.coreps is not None:
        report.extend(symmetrization_gain_check(c, c_sym, s.coreps()))
    report.data.update({'dim': c_sym.dim, 'cutoff': c_sym.cutoff})
    s.artifact = cocycle_to_dict(c_sym)
    return report


def _two_cocycle(s: _Session) -> Report:
    c = s.cocycle()
    max_deg = s.cfg.max_deg or 3
    report = Report('two-cocycle')
    report.extend(two_cocycle_check(c, max_deg))
    report.extend(eta_identities_check(c, max_deg))
    report.extend(two_form_agreement(c, max_deg))
    return report


def _fraction(text: str, flag: str) -> Fraction | int:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"Invalid {flag} value {text!r}")
    return int(value) if value.denominator == 1 else value


def _tau_transfer(s: _Session) -> Report:
    return tau_reality_transfer(s.cocycle(), _fraction(s.cfg.t, '--t'), _fraction(s.cfg.s, '--s'))


DISPATCH: dict[str, Callable[[_Session], Report]] = {
    'verify-hopf': _verify_hopf,
    'check-admissible': _check_admissible,
    'from-cocycle': _from_cocycle,
    'from-functional': _from_functional,
    'roundtrip': _roundtrip,
    'attempt': _attempt,
    'decompose': _decompose,
    'qbeta': _qbeta,
    'pinch': _pinch,
    'proper': _proper,
    'symmetrize': _symmetrize,
    'two-cocycle': _two_cocycle,
    'tau-transfer': _tau_transfer,
}


# Provenance and output

def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _provenance(cfg: RunConfig, inputs: dict[str, Path]) -> dict[str, Any]:
    config = asdict(cfg)
    return {
        'inputs': {kind: {'path': str(path), 'sha256': _sha256(path)}
                   for kind, path in sorted(inputs.items()) if path.exists()},
        'config': config,
        'config_sha256': hash_payload(config),
    }


def _artifact_path(cfg: RunConfig) -> Path | None:
    if cfg.artifact:
        return Path(cfg.artifact)
    if cfg.out:
        out = Path(cfg.out)
        return out.with_name(f"{out.stem}.artifact.json")
    return None


def _write_outputs(cfg: RunConfig, report: Report, artifact: dict[str, Any] | None) -> None:
    if artifact is not None and (path := _artifact_path(cfg)) is not None:
        write_json(artifact, path)
        report.data['artifact'] = str(path)
        _say(f"💾 Artifact written to {path}")
    if cfg.table:
        rows = report.data.get('rows')
        df = rows_frame(rows) if rows else report_frame(report)
        write_table(df, cfg.table)
        _say(f"💾 Table written to {cfg.table}")
    if cfg.out:
        out = Path(cfg.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(report.to_json() + '\n', encoding='utf-8')
        _say(f"💾 Report written to {out}")


def run_command(cfg: RunConfig) -> Report:
    """Run one command and write its report and artifact.

    Raises:
        ValidationFailed: If an input fails validation
        HopfCorrError: On any other library error
    """
    if cfg.log_level:
        set_log_level(cfg.log_level)
    session = _Session(cfg)
    _say(f"🔍 {cfg.command} on {cfg.source}")
    try:
        with tolerance(cfg.tolerance()):
            report = DISPATCH[cfg.command](session)
    except ValidationFailed as e:
        if e.report is not None:
            e.report.provenance = _provenance(cfg, session.inputs)
        raise
    report.provenance = _provenance(cfg, session.inputs)
    _write_outputs(cfg, report, session.artifact)
    mark = '✅' if report.passed else '❌'
    _say(f"{mark} {report.summary()}")
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='hopfcorr',
        description='Cocycles and generating functionals on Hopf *-algebras',
    )
    parser.add_argument('command', choices=COMMANDS)
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--preset', help='Preset name, optionally with overrides (suq2?q=1/3)')
    source.add_argument('--presentation', help='Presentation JSON file')
    parser.add_argument('--cocycle', help='Cocycle file (path or preset artifact name)')
    parser.add_argument('--functional', help='Functional file (path or preset artifact name)')
    parser.add_argument('--coreps', help='Corep family file (path or preset artifact name)')
    parser.add_argument('--cutoff', type=int, default=None, help="Override the artifact's cutoff")
    parser.add_argument('--tol', type=float, default=None, help='Float comparison tolerance')
    parser.add_argument('--psd-tol', type=float, default=None, help='PSD eigenvalue slack')
    parser.add_argument('--backend', choices=[b.value for b in Backend], default=None)
    parser.add_argument('--horizon', type=int, default=None, help='Corep level horizon')
    parser.add_argument('--M', default='1', help='Properness level')
    parser.add_argument('--alpha', default=None, help='preset, id or tau:t')
    parser.add_argument('--out', help='Write the report JSON here')
    parser.add_argument('--artifact', help='Write the constructed artifact here')
    parser.add_argument('--table', help='Write a CSV table here')
    parser.add_argument('--max-deg', type=int, default=None, help='Degree of pair/triple checks')
    parser.add_argument('--t', default='0', help='tau-transfer hypothesis exponent')
    parser.add_argument('--s', default='1', help='tau-transfer conclusion exponent')
    parser.add_argument('--symmetrized', action='store_true',
                        help='Replace the cocycle by its conjugate symmetrization first')
    parser.add_argument('--log-level', default=None)
    return parser


def _error_report(command: str, error: Exception) -> Report:
    report = Report(command)
    report.add(type(error).__name__, False, None, str(error))
    return report


def main(argv: list[str] | None = None) -> int:
    """Entry point of the hopfcorr console script; returns the exit code."""
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
    except ValueError as e:
        _say(f"❌ {e}")
        return 2
    try:
        report = run_command(cfg)
    except ValidationFailed as e:
        report = e.report if e.report is not None else _error_report(cfg.command, e)
        _say(f"❌ Validation failed: {e}")
        print(report.to_json())
        return 1
    except (HopfCorrError, ValueError) as e:
        report = _error_report(cfg.command, e)
        report.provenance = {'config': asdict(cfg)}
        _say(f"❌ {type(e).__name__}: {e}")
        print(report.to_json())
        return 2
    print(report.to_json())
    return 0 if report.passed else 1


if __name__ == '__main__':
    sys.exit(main())
