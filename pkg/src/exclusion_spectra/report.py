"""Pass/fail records for the verification operations."""
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))
        return passed

    def extend(self, other):
        self.checks.extend(other.checks)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def violations(self):
        return [c for c in self.checks if not c.passed]

    def summary(self):
        return "\n".join([self.title] + ["  " + c.line() for c in self.checks])
