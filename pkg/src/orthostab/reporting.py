"""Axiom-check report records shared by the gauge and orthogonality checkers."""

from __future__ import annotations

from dataclasses import dataclass, field


def jsonable(value):
    """Round-trip-safe JSON form: floats stay floats, vectors become lists."""
    import numpy as np
    from fractions import Fraction

    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom over one sample batch."""

    axiom: str
    passed: bool
    worst_value: float | None = None
    worst_witness: object = None

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "passed": self.passed,
            "worst_value": jsonable(self.worst_value),
            "worst_witness": jsonable(self.worst_witness),
        }


@dataclass
class AxiomReport:
    subject: str
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def check(self, axiom: str) -> AxiomCheck:
        for c in self.checks:
            if c.axiom == axiom:
                return c
        raise KeyError(axiom)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "all_passed": self.all_passed,
            "checks": [c.to_dict() for c in self.checks],
        }
