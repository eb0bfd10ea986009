"""Exception types shared across the toolkit.

Each error carries a short machine-readable ``code`` so the CLI can emit
stable one-line diagnostics.
"""


class LtftError(Exception):
    """Base class for all toolkit errors."""

    code = "error"


class InvalidParameterError(LtftError, ValueError):
    code = "invalid-parameter"


class UnsupportedDimensionError(LtftError, ValueError):
    code = "unsupported-dimension"


class BudgetExceededError(LtftError, RuntimeError):
    code = "budget-exceeded"


class ParseError(LtftError, ValueError):
    code = "parse-error"


class UnsupportedFormatError(LtftError, ValueError):
    code = "unsupported-format"
