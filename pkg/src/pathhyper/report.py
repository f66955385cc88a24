"""Check reports shared by every verification routine."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class CheckReport:
    identity: str
    mode: str
    passed: bool
    max_discrepancy: object = 0
    truncation: object = None
    tolerance: float = None
    worst: object = None
    seed: int = None
    notes: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self):
        d = {
            "identity": self.identity,
            "mode": self.mode,
            "pass": bool(self.passed),
            "maxDiscrepancy": _jsonable(self.max_discrepancy),
            "truncation": self.truncation,
            "tolerance": self.tolerance,
            "worst": _jsonable(self.worst),
            "seed": self.seed,
            "notes": self.notes,
        }
        if self.details:
            d["details"] = _jsonable(self.details)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def __bool__(self):
        return bool(self.passed)


def combine(identity, reports, mode=None, notes=""):
    """Fold sub-reports into one: pass iff all pass, worst discrepancy kept."""
    reports = list(reports)
    worst = max(reports, key=lambda r: float(abs(r.max_discrepancy)), default=None)
    return CheckReport(
        identity=identity,
        mode=mode or (reports[0].mode if reports else "exact"),
        passed=all(r.passed for r in reports),
        max_discrepancy=worst.max_discrepancy if worst else 0,
        truncation=worst.truncation if worst else None,
        tolerance=worst.tolerance if worst else None,
        worst=f"{worst.identity}: {worst.worst}" if worst else None,
        seed=reports[0].seed if reports else None,
        notes=notes,
        details={r.identity: r.to_dict() for r in reports},
    )
