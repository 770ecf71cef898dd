"""Pass/fail records shared by the check suites."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass
class CheckRecord:
    name: str
    status: str
    evidence: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "evidence": self.evidence}

    @classmethod
    def from_json(cls, data: dict) -> "CheckRecord":
        return cls(data["name"], data["status"], dict(data.get("evidence", {})))


def combine(name: str, parts: list[CheckRecord]) -> CheckRecord:
    """Fold sub-records into one: the first failure wins, otherwise pass.

    All-not-applicable stays not-applicable.
    """
    evidence = {p.name: p.evidence for p in parts}
    for p in parts:
        if p.status == FAIL:
            return CheckRecord(name, FAIL, {"failed": p.name, **evidence})
    if parts and all(p.status == NOT_APPLICABLE for p in parts):
        return CheckRecord(name, NOT_APPLICABLE, evidence)
    return CheckRecord(name, PASS, evidence)
