"""Shared validation report types and error taxonomy."""

from __future__ import annotations

from dataclasses import dataclass


class StructuralError(ValueError):
    """Raw data is malformed: dangling references, bad shapes, carrier mismatch."""


class ValidationFailed(ValueError):
    """A build was attempted on data that fails semantic validation."""

    def __init__(self, message: str, report: "Report | None" = None):
        super().__init__(message)
        self.report = report


class PreconditionError(ValueError):
    """An operation was invoked outside its stated preconditions."""


class FalsificationError(RuntimeError):
    """A property that must hold on validated inputs failed.

    Raising this aborts a run loudly: it means either a construction bug or a
    genuine counterexample to a guaranteed identity, never ordinary bad input.
    """


class CapExceededError(ValueError):
    """A size cap guarding an exponential enumeration was exceeded."""


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: tuple
    detail: str

    def __str__(self) -> str:
        w = ", ".join(str(t) for t in self.witness)
        return f"condition {self.condition}: {self.detail} [witness: {w}]"


@dataclass(frozen=True)
class Report:
    """Outcome of a validator: ok, or a list of labelled violations."""

    ok: bool
    violations: tuple[Violation, ...] = ()
    notes: tuple[str, ...] = ()

    def raise_if_failed(self, what: str) -> None:
        if not self.ok:
            lines = "; ".join(str(v) for v in self.violations)
            raise ValidationFailed(f"{what}: {lines}", report=self)

    def conditions(self) -> frozenset:
        return frozenset(v.condition for v in self.violations)
