"""Verification reports: a list of failed checks plus free-form findings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Violation:
    check: str
    where: tuple[str, ...] = ()
    detail: str = ""

    def __str__(self) -> str:
        loc = f" at ({', '.join(self.where)})" if self.where else ""
        return f"{self.check}{loc}" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    title: str
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def fail(self, check: str, where=(), detail: str = "") -> None:
        self.violations.append(Violation(check, tuple(where), detail))

    def absorb(self, other: "ValidationReport", prefix: str = "") -> None:
        for v in other.violations:
            self.violations.append(Violation(prefix + v.check, v.where, v.detail))

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "ok": self.ok,
            "violations": [
                {"check": v.check, "where": list(v.where), "detail": v.detail} for v in self.violations
            ],
            "notes": list(self.notes),
            "data": self.data,
        }

    def summary(self) -> str:
        head = f"{self.title}: {'clean' if self.ok else f'{len(self.violations)} violation(s)'}"
        lines = [head] + [f"  - {v}" for v in self.violations[:20]]
        if len(self.violations) > 20:
            lines.append(f"  ... {len(self.violations) - 20} more")
        lines += [f"  * {n}" for n in self.notes]
        return "\n".join(lines)
