from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of a verification: ``passed`` iff no finding is a failure.

    Findings are plain dicts so they serialise straight to JSON. A finding
    with ``"severity": "note"`` is informational and does not fail the report.
    """
    findings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(f.get("severity", "failure") == "failure" for f in self.findings)

    def fail(self, kind: str, **details):
        self.findings.append({"kind": kind, "severity": "failure", **details})

    def note(self, kind: str, **details):
        self.findings.append({"kind": kind, "severity": "note", **details})

    def extend(self, other: "Report"):
        self.findings.extend(other.findings)
        return self

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {"pass": self.passed, "details": list(self.findings)}
