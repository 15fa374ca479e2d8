"""Check records and the aggregated verification report."""

from __future__ import annotations

import json
import platform
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .scalar import LogScale, from_json, to_json

PASS = "pass"
FAIL = "fail"
DISCREPANCY = "documented-discrepancy"
STATUSES = (PASS, FAIL, DISCREPANCY)


def _value_json(v):
    if isinstance(v, (Fraction, LogScale)):
        return to_json(v)
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return to_json(Fraction(v))
    if isinstance(v, float):
        return {"float": repr(float(v))}
    if isinstance(v, (list, tuple)):
        return [_value_json(u) for u in v]
    if isinstance(v, dict):
        return {str(k): _value_json(u) for k, u in v.items()}
    return str(v)


def _value_from_json(j):
    """Inverse of ``_value_json``."""
    if isinstance(j, dict):
        if set(j) in ({"rat"}, {"log"}):
            return from_json(j)
        if set(j) == {"float"}:
            return float(j["float"])
        return {k: _value_from_json(u) for k, u in j.items()}
    if isinstance(j, list):
        return [_value_from_json(u) for u in j]
    return j


@dataclass
class Check:
    """One verified claim.

    ``anchor`` is a short human-readable name of the claim being checked;
    ``values`` holds the quantities that decided the outcome.
    """

    id: str
    anchor: str
    status: str
    values: dict[str, Any] = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "values": {k: _value_json(v) for k, v in sorted(self.values.items())},
        }
        if self.note:
            d["note"] = self.note
        return d


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL


def toolchain() -> dict[str, str]:
    import numpy
    import scipy

    from . import _kernels

    return {
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "kernels": "numba" if _kernels.USE_NUMBA else "numpy",
    }


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    config: dict[str, Any] = field(default_factory=dict)
    tool: dict[str, str] = field(default_factory=toolchain)

    def add(self, checks):
        for c in checks:
            if any(c.id == d.id for d in self.checks):
                raise ValueError(f"duplicate check id {c.id!r}")
            self.checks.append(c)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_dict(self) -> dict:
        counts = {s: sum(c.status == s for c in self.checks) for s in STATUSES}
        return {
            "suite": self.suite,
            "summary": counts,
            "checks": [c.to_dict() for c in self.checks],
            "toolchain": dict(sorted(self.tool.items())),
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        checks = [
            Check(c["id"], c["anchor"], c["status"],
                  {k: _value_from_json(v) for k, v in c["values"].items()}, c.get("note", ""))
            for c in d["checks"]
        ]
        return cls(d["suite"], checks, d.get("config", {}), dict(d.get("toolchain", {})))
