"""Exceptions and warnings for ionduct with source location tracking and exit codes."""

from dataclasses import dataclass
from pathlib import Path
from typing import Any

__all__ = [
    "SourceLocation",
    "IonductError",
    "DomainError",
    "ValidationError",
    "LoadError",
    "BreakdownError",
    "LayoutError",
    "InfeasibleDesignError",
    "EmptyFeasibleSetError",
    "InsufficientDataError",
    "NoDischargeError",
    "UnidentifiableError",
    "CurveMismatchError",
    "IonductWarning",
    "SuperlinearDataWarning",
    "UndefinedDispersionWarning",
    "ClampedParameterWarning",
]


@dataclass(frozen=True)
class SourceLocation:
    """Where in a design, space or measurement file a value came from."""

    filepath: str
    line: int
    column: int = 0
    id: str = ""

    def __str__(self) -> str:
        return f"{self.filepath}:{self.line}"


class IonductError(Exception):
    """Base exception for ionduct.

    Attributes:
        source_location: Optional location in an input file where the error occurred
        suggestion: Optional hint for fixing the error
        exit_code: Process exit code the command line maps this error to
    """

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        source_location: SourceLocation | None = None,
        suggestion: str | None = None,
    ) -> None:
        self.source_location = source_location
        self.suggestion = suggestion
        self._original_message = message
        super().__init__(self._format_message())

    def _format_message(self) -> str:
        """Format the message with file:line first, then a snippet and the suggestion."""
        parts = []

        if self.source_location:
            location = str(self.source_location)
            if self.source_location.id:
                parts.append(f"[{location} @ {self.source_location.id}] {self._original_message}")
            else:
                parts.append(f"[{location}] {self._original_message}")
            snippet = self._get_file_snippet()
            if snippet:
                parts.append(f"\n\n{snippet}")
        else:
            parts.append(self._original_message)

        if self.suggestion:
            parts.append(f"\n\n  {self.suggestion}")

        return "".join(parts)

    def _get_file_snippet(self) -> str:
        """Show the offending line of the input file with one line of context."""
        if not self.source_location:
            return ""

        try:
            filepath = Path(self.source_location.filepath)
            if not filepath.exists():
                return ""
            lines = filepath.read_text().splitlines()
        except OSError:
            return ""

        line_num = self.source_location.line
        start = max(0, line_num - 2)
        end = min(len(lines), line_num + 1)
        snippet_lines = []
        for i in range(start, end):
            marker = "→" if i == line_num - 1 else " "
            snippet_lines.append(f"  {marker} {i + 1:4d} │ {lines[i].rstrip()}")
        return "\n".join(snippet_lines)


class DomainError(IonductError, ValueError):
    """Raised when a parameter lies outside the domain of an operation or type."""

    exit_code = 2


class ValidationError(IonductError):
    """Raised when a design, space or measurement file does not match its schema.

    Attributes:
        field_path: Dot-separated path to the offending field (e.g. "design.stage.gap_m")
        actual_value: The value that failed validation
    """

    exit_code = 2

    def __init__(
        self,
        message: str,
        field_path: str = "",
        actual_value: Any = None,
        source_location: SourceLocation | None = None,
        suggestion: str | None = None,
    ) -> None:
        self.field_path = field_path
        self.actual_value = actual_value

        full_message = message
        if field_path:
            full_message = f"Validation error at '{field_path}': {message}"
        if actual_value is not None:
            full_message += f"\n  Actual value: {actual_value!r}"

        super().__init__(full_message, source_location=source_location, suggestion=suggestion)


class LoadError(IonductError):
    """Raised when an input file is missing, has an unknown extension or cannot be parsed."""

    exit_code = 2


class BreakdownError(IonductError):
    """Raised when a drive condition exceeds the breakdown guard of the medium.

    Attributes:
        field: The drift field that was requested, V/m
        limit: The largest admissible drift field, V/m
    """

    exit_code = 3

    def __init__(self, field: float, limit: float) -> None:
        self.field = field
        self.limit = limit
        super().__init__(
            f"Drift field {field:.6g} V/m exceeds the breakdown guard of {limit:.6g} V/m",
            suggestion="Lower the voltage or widen the inter-electrode gap.",
        )


class LayoutError(IonductError):
    """Raised when emitter tips cannot be placed on the available perimeter."""

    exit_code = 3


class InfeasibleDesignError(IonductError):
    """Raised when a design carries a hard constraint violation.

    Attributes:
        rule: Identifier of the violated rule
    """

    exit_code = 3

    def __init__(self, message: str, rule: str = "", suggestion: str | None = None) -> None:
        self.rule = rule
        super().__init__(message, suggestion=suggestion)


class EmptyFeasibleSetError(IonductError):
    """Raised when no design of a space satisfies the objective constraints.

    Attributes:
        rejection_counts: Number of rejected designs per binding constraint
    """

    exit_code = 3

    def __init__(self, rejection_counts: dict[str, int]) -> None:
        self.rejection_counts = dict(sorted(rejection_counts.items()))
        histogram = "\n".join(f"  {name}: {count}" for name, count in self.rejection_counts.items())
        super().__init__(f"No feasible design in the search space. Rejections per constraint:\n{histogram}")


class InsufficientDataError(IonductError):
    """Raised when a fit has fewer usable samples than it needs."""

    exit_code = 4


class NoDischargeError(InsufficientDataError):
    """Raised when a sweep never shows corona current."""


class UnidentifiableError(InsufficientDataError):
    """Raised when observations cannot pin down the requested coefficients."""


class CurveMismatchError(IonductError):
    """Raised when curves to aggregate disagree on geometry tag or voltage grid."""

    exit_code = 2


class IonductWarning(UserWarning):
    """Base class of data-quality warnings that do not stop a computation."""


class SuperlinearDataWarning(IonductWarning):
    """Multi-stage thrust grows faster than linearly; the degradation factor is pinned to 1."""


class UndefinedDispersionWarning(IonductWarning):
    """A standard error was requested from a single device."""


class ClampedParameterWarning(IonductWarning):
    """A fitted parameter fell outside its admissible interval and was clamped."""
