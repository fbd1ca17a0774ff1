"""Pass/fail records shared by every verification run."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Check:
    name: str
    verdict: str
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "detail": self.detail}


@dataclass
class Report:
    title: str
    data: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def check(self, name: str, ok: bool, **detail) -> bool:
        self._add(Check(name, PASS if ok else FAIL, detail))
        return ok

    def skip(self, name: str, reason: str, **detail):
        self._add(Check(name, SKIPPED, {"reason": reason, **detail}))

    def _add(self, c: Check):
        if any(x.name == c.name for x in self.checks):
            raise ValueError(f"check {c.name!r} recorded twice")
        self.checks.append(c)

    def merge(self, other: Report, prefix: str | None = None):
        for c in other.checks:
            name = f"{prefix}.{c.name}" if prefix else c.name
            self._add(Check(name, c.verdict, c.detail))

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(c.verdict != FAIL for c in self.checks)

    @property
    def verdict(self) -> str:
        if not self.passed:
            return FAIL
        if self.checks and all(c.verdict == SKIPPED for c in self.checks):
            return SKIPPED
        return PASS

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "verdict": self.verdict,
            "data": self.data,
            "checks": [c.to_dict() for c in self.checks],
        }
