"""Exception types shared across the engine."""


class CausalError(Exception):
    """Base class for all errors raised by this package."""


class ModelError(CausalError):
    """Invalid model, context, world, or intervention."""


class FormulaError(CausalError):
    """Ill-formed formula or inconsistent event set."""


class PreconditionError(CausalError):
    """A checker was handed inputs violating its stated precondition."""


class SearchCapExceeded(CausalError):
    """An exhaustive search would exceed the configured resource caps.

    Raised instead of silently truncating; callers may retry with larger caps.
    """


class ParseError(CausalError):
    """Syntax or resolution error in DSL source, with position info."""

    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        loc = f" (line {line}, column {column})" if line is not None else ""
        hint = f"; expected one of: {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"{message}{loc}{hint}")


class UsageError(CausalError):
    """Bad command-line usage."""
