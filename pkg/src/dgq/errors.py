"""Exception types and validation-report containers shared across the package."""

from __future__ import annotations

from dataclasses import dataclass, field


class StructureError(ValueError):
    """A table is malformed: wrong shape, index out of range, partial map
    defined off its declared domain.  Distinct from an axiom failure."""


class FormatError(ValueError):
    """A document is syntactically or schematically invalid."""


class VacancyError(ValueError):
    """An operation required a vacant double groupoid and got a non-vacant one."""


class FactorizationError(ValueError):
    """A claimed exact factorization is not exact (non-unique or missing)."""


class UnembeddableError(ValueError):
    """Cocycle values cannot be realized in the requested field."""


class UnsupportedFeatureError(ValueError):
    """The request is out of the supported scope (e.g. twisted block structure)."""


class ResourceBudgetError(RuntimeError):
    """An exhaustive search would exceed the configured budget.  Raised instead
    of returning silently truncated results."""


class TruncationError(RuntimeError):
    """A complex was not built to sufficient (bi)degree for the request."""


class InternalConsistencyError(AssertionError):
    """Two routes that must agree by a theorem disagreed.  Always a bug."""


@dataclass(frozen=True)
class Failure:
    """One violated rule together with a minimal witness tuple."""

    rule: str
    witness: tuple
    message: str = ""

    def __str__(self) -> str:
        msg = f": {self.message}" if self.message else ""
        return f"{self.rule} at {self.witness}{msg}"


@dataclass
class Report:
    """Outcome of an exhaustive validation: empty failure list means pass."""

    subject: str
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, rule: str, witness: tuple, message: str = "") -> None:
        self.failures.append(Failure(rule, witness, message))

    def merge(self, other: "Report") -> None:
        self.failures.extend(other.failures)

    def by_rule(self) -> dict[str, list[Failure]]:
        out: dict[str, list[Failure]] = {}
        for f in self.failures:
            out.setdefault(f.rule, []).append(f)
        return out

    def raise_if_failed(self) -> None:
        if not self.ok:
            head = self.failures[0]
            raise StructureError(
                f"{self.subject}: {len(self.failures)} check(s) failed; first: {head}"
            )

    def __str__(self) -> str:
        if self.ok:
            return f"{self.subject}: ok"
        lines = [f"{self.subject}: {len(self.failures)} failure(s)"]
        lines += [f"  - {f}" for f in self.failures[:20]]
        if len(self.failures) > 20:
            lines.append(f"  ... and {len(self.failures) - 20} more")
        return "\n".join(lines)
