"""Check results and reports shared by every verification suite."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    """Outcome of one relation at one index tuple.

    ``value`` carries a numeric deviation for sampled checks; ``expected_failure``
    marks regression checks that are supposed to fail.
    """

    relation: str
    indices: tuple = ()
    passed: bool = True
    residue_terms: int = 0
    formula: str = ""
    detail: str = ""
    value: float | None = None
    expected_failure: bool = False

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def ok(self) -> bool:
        """Whether the outcome agrees with what was predicted."""
        return self.passed != self.expected_failure

    def to_json(self) -> dict:
        out = {"relation": self.relation, "indices": [list(i) if isinstance(i, tuple) else i for i in self.indices],
               "status": self.status, "residue_terms": self.residue_terms}
        if self.formula:
            out["formula"] = self.formula
        if self.value is not None:
            out["value"] = float(f"{self.value:.6e}")
        if self.expected_failure:
            out["expected_failure"] = True
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    suite: str
    n: int
    checks: list[Check] = field(default_factory=list)
    seed: int | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> "Report":
        for c in checks:
            self.add(c)
        return self

    def merge(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    @property
    def passed(self) -> bool:
        """True iff every check matches its prediction (regressions must fail)."""
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def max_value(self) -> float:
        return max((c.value for c in self.checks if c.value is not None), default=0.0)

    def summary(self) -> str:
        bad = len(self.failures())
        return f"{self.suite} n={self.n}: {len(self.checks) - bad}/{len(self.checks)} ok"

    def to_json(self) -> dict:
        out = {"suite": self.suite, "n": self.n, "passed": self.passed,
               "checks": [c.to_json() for c in self.checks]}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.meta:
            out["meta"] = self.meta
        return out

    def to_text(self) -> str:
        lines = [self.summary()]
        for c in self.checks:
            mark = c.status + (" (expected)" if c.expected_failure and not c.passed else "")
            idx = ",".join(map(str, c.indices))
            extra = f"  [{c.value:.3e}]" if c.value is not None else ""
            lines.append(f"  {c.relation} @({idx}): {mark}{extra}")
        return "\n".join(lines)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)
