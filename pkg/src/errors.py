"""Exception hierarchy shared by every module of the checker."""

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple


class EpistemicError(Exception):
    """Base class for all errors raised by the checker."""


class ModelError(EpistemicError):
    """A state space, event or correspondence violates its structural invariants."""


class DimensionError(EpistemicError):
    """An event was combined with a state space (or event) of another width."""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"event width {actual} does not match state space size {expected}")


class EnumerationRefused(EpistemicError):
    """Exhaustive enumeration was requested beyond its cap."""

    def __init__(self, size: int, cap: int, what: str = "events"):
        self.size = size
        self.cap = cap
        super().__init__(
            f"refusing to enumerate {what} over {size} states (cap is {cap}); use sampled mode instead"
        )


class BudgetInfeasible(EpistemicError):
    """The requested quantification policy cannot be carried out."""


class UnknownProperty(EpistemicError):
    """A property id outside the catalog was requested."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown property {name!r}")


class InvalidParams(EpistemicError):
    """Generator parameters are out of range."""


@dataclass(frozen=True)
class Diagnostic:
    """One problem found in a model file, 1-based line and column."""

    line: int
    column: int
    message: str

    def format(self, source_line: Optional[str] = None) -> str:
        head = f"line {self.line}, column {self.column}: {self.message}"
        if source_line is None:
            return head
        pointer = " " * max(self.column - 1, 0) + "^"
        return "\n".join([head, f"    {source_line}", f"    {pointer}"])


class ModelParseError(EpistemicError):
    """Raised when a model file has one or more diagnostics."""

    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics: Tuple[Diagnostic, ...] = tuple(diagnostics)
        count = len(self.diagnostics)
        first = self.diagnostics[0].format() if count else "no diagnostics"
        suffix = "" if count <= 1 else f" (and {count - 1} more)"
        super().__init__(f"{first}{suffix}")
