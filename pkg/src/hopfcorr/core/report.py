"""Machine-readable verification reports."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Any

from .errors import ValidationFailed

PASS = 'pass'
FAIL = 'fail'
INDETERMINATE = 'indeterminate'


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def hash_payload(payload: Any) -> str:
    """sha256 of the canonical JSON of a payload."""
    text = json.dumps(_jsonable(payload), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


@dataclass
class Check:
    """One named assertion; passed is None when it could not be decided."""

    name: str
    passed: bool | None
    residual: float | None = None
    witness: str | None = None
    detail: dict[str, Any] = field(default_factory=dict)


@dataclass
class Report:
    """Outcome of a command: status is pass iff every check passes."""

    command: str
    checks: list[Check] = field(default_factory=list)
    provenance: dict[str, Any] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def add(self, name: str, passed: bool | None, residual: Any = None,
            witness: Any = None, detail: dict[str, Any] | None = None) -> Check:
        if residual is not None and not isinstance(residual, (int, float)):
            residual = abs(residual)
        if passed is False and witness is None:
            witness = name
        check = Check(name, passed, None if residual is None else float(residual),
                      None if witness is None else str(witness), dict(detail or {}))
        self.checks.append(check)
        return check

    def add_residual(self, name: str, residual: float, limit: float,
                     witness: Any = None, detail: dict[str, Any] | None = None) -> Check:
        """Pass when residual <= limit (limit 0 means exact agreement)."""
        ok = residual <= limit
        return self.add(name, ok, residual, witness if not ok else None, detail)

    def extend(self, other: Report, prefix: str | None = None) -> Report:
        for c in other.checks:
            name = f"{prefix}: {c.name}" if prefix else c.name
            self.checks.append(Check(name, c.passed, c.residual, c.witness, dict(c.detail)))
        self.warnings.extend(other.warnings)
        return self

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    @property
    def status(self) -> str:
        if any(c.passed is False for c in self.checks):
            return FAIL
        if any(c.passed is None for c in self.checks):
            return INDETERMINATE
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.passed is False]

    def get(self, name: str) -> Check | None:
        return next((c for c in self.checks if c.name == name), None)

    def worst_residual(self) -> float:
        return max((c.residual for c in self.checks if c.residual is not None), default=0.0)

    def require(self, message: str | None = None) -> Report:
        """Return self when passing, otherwise raise ValidationFailed."""
        if not self.passed:
            failed = ', '.join(c.name for c in self.failures()) or self.status
            raise ValidationFailed(message or f"{self.command} failed: {failed}", self)
        return self

    def to_dict(self) -> dict[str, Any]:
        return {
            'command': self.command,
            'status': self.status,
            'checks': [_jsonable(asdict(c)) for c in self.checks],
            'data': _jsonable(self.data),
            'warnings': list(self.warnings),
            'provenance': _jsonable(self.provenance),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary(self) -> str:
        failed = len(self.failures())
        return f"{self.command}: {self.status} ({len(self.checks)} checks, {failed} failed)"


class Tally:
    """Aggregate many comparisons into one Check (worst residual, first witness)."""

    def __init__(self, name: str):
        self.name = name
        self.worst = 0.0
        self.witness: str | None = None
        self.cases = 0

    def record(self, ok: bool, residual: float = 0.0, witness: Any = None) -> None:
        self.cases += 1
        self.worst = max(self.worst, float(residual))
        if not ok and self.witness is None:
            self.witness = str(witness)

    def emit(self, report: Report, **detail: Any) -> Check:
        return report.add(self.name, self.witness is None, self.worst, self.witness,
                          {'cases': self.cases, **detail})
