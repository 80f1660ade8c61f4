"""Exception types shared across c4lab."""

from __future__ import annotations

from typing import Any, Optional


class C4LabError(Exception):
    """Base class for every error raised by this package."""


class GraphFormatError(C4LabError, ValueError):
    """Malformed edge-list input. Carries the 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateSetError(C4LabError, ValueError):
    pass


class EditConsistencyError(C4LabError, ValueError):
    """A toggle deletes an absent edge or adds a present one."""


class BudgetExceeded(C4LabError):
    """Exact search refused because the instance is above the configured cap."""


class PreconditionError(C4LabError, ValueError):
    """An operation's input contract failed; ``witness`` shows why."""

    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


class StageFailure(C4LabError):
    """A pipeline stage could not produce a certified result.

    ``stage`` names the step, ``detail`` holds whatever the stage knew
    (residual vertex sets, attempt transcripts, ...).
    """

    def __init__(self, stage: str, message: str, detail: Any = None):
        self.stage = stage
        self.detail = detail
        super().__init__(f"[{stage}] {message}")
