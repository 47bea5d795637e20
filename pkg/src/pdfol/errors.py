"""Exception hierarchy, mapped onto CLI exit codes."""


class PdfolError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(PdfolError):
    """Malformed input: expression syntax, unknown symbols, bad flags."""

    exit_code = 2


class MathError(PdfolError):
    """A mathematical precondition failed (shape mismatch, non-unit divisor,
    irrational value in exact mode, unsupported reduction family)."""

    exit_code = 3


class PrecisionError(PdfolError):
    """Truncation budget exhausted: the requested computation would need
    coefficients beyond the represented order."""

    exit_code = 4


class NotInvertibleError(MathError):
    """Division by a non-unit ring element."""
