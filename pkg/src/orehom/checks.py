from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    """Outcome of an identity check: sample count plus the first few counterexamples."""

    name: str
    passed: bool = True
    samples: int = 0
    failures: list[Any] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    max_failures = 5

    def record(self, ok: bool, witness: Any = None) -> bool:
        self.samples += 1
        if not ok:
            self.passed = False
            if len(self.failures) < self.max_failures:
                self.failures.append(witness)
        return ok

    def merge(self, other: "Check") -> "Check":
        self.samples += other.samples
        if not other.passed:
            self.passed = False
            room = self.max_failures - len(self.failures)
            self.failures.extend(other.failures[:max(room, 0)])
        return self

    def __bool__(self) -> bool:
        return self.passed

    def as_dict(self) -> dict[str, Any]:
        out = {"name": self.name, "passed": self.passed, "samples": self.samples}
        if self.failures:
            out["failures"] = [str(f) for f in self.failures]
        if self.details:
            out["details"] = self.details
        return out
