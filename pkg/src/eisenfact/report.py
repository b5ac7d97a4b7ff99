"""Verification outcome shared by the exact and numeric checkers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional


@dataclass
class Report:
    id: str
    status: str  # pass | fail | error
    mode: str
    depth_used: Optional[Fraction] = None
    witness_exponent: Optional[Fraction] = None
    witness_value: Optional[str] = None
    ms: float = 0.0
    message: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        def frac(x):
            if x is None:
                return None
            return str(x)

        return {
            "id": self.id,
            "status": self.status,
            "mode": self.mode,
            "depth_used": frac(self.depth_used),
            "witness_exponent": frac(self.witness_exponent),
            "witness_value": self.witness_value,
            "ms": round(self.ms, 3),
        }

    def human(self) -> str:
        line = f"{self.status.upper():5} {self.id} [{self.mode}]"
        if self.depth_used is not None:
            line += f" depth {self.depth_used}"
        if self.witness_exponent is not None:
            line += f" witness q^{self.witness_exponent}: {self.witness_value}"
        elif self.witness_value:
            line += f" witness {self.witness_value}"
        if self.message:
            line += f" ({self.message})"
        return line


def summarize(reports) -> dict:
    out = {"total": 0, "pass": 0, "fail": 0, "error": 0}
    for r in reports:
        out["total"] += 1
        out[r.status] += 1
    return out


def to_json_text(reports) -> str:
    reports = sorted(reports, key=lambda r: r.id)
    doc = {"summary": summarize(reports), "entries": [r.to_json() for r in reports]}
    return json.dumps(doc, indent=2)
