"""Exception hierarchy for the leviflat application."""

from typing import Optional


class LeviflatError(Exception):
    """Base class for all leviflat errors."""


class ContextMismatchError(LeviflatError):
    """Raised when objects from different variable contexts are combined."""


class InvalidIndexError(LeviflatError):
    """Raised for a variable index outside the context."""


class PointLengthError(LeviflatError):
    """Raised when a point does not match the context size."""


class ParseError(LeviflatError):
    """Syntax or name error in the expression language."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class BudgetExceededError(LeviflatError):
    """Raised when a Groebner basis run exceeds its S-pair budget."""

    def __init__(self, budget: int, processed: int):
        self.budget = budget
        self.processed = processed
        super().__init__(
            f"S-pair budget of {budget} exceeded after {processed} reductions"
        )


class NotOnVarietyError(LeviflatError):
    """Raised when a point is required to lie on a variety and does not."""


class ConeError(LeviflatError):
    """Raised for generators that do not define a projective cone."""

    def __init__(self, message: str, generator: Optional[str] = None):
        self.generator = generator
        super().__init__(message)


class DegenerateFamilyError(LeviflatError):
    """Raised for degenerate leaf, web or level-set families."""


class HyperplaneError(LeviflatError):
    """Raised for invalid hyperplane sections."""


class ModelFileError(LeviflatError):
    """Raised for malformed model files."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
