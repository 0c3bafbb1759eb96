"""Exception types shared across the package."""


class SepmatchError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidInputError(SepmatchError, ValueError):
    """Input violates a documented precondition (shape, finiteness, counts)."""


class EmptyInputError(InvalidInputError):
    """A non-empty input was required."""


class GuardLimitError(SepmatchError):
    """A factorial-cost operation was refused above its size guard."""


class MatrixParseError(InvalidInputError):
    """Cost-matrix text or JSON could not be parsed.

    Carries 1-based ``line`` and ``column`` (token position) attributes when
    the offending location is known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        location = ""
        if line is not None:
            location = f" (line {line}"
            if column is not None:
                location += f", column {column}"
            location += ")"
        super().__init__(message + location)
        self.line = line
        self.column = column


class WavFormatError(InvalidInputError):
    """WAV payload is malformed or uses an unsupported encoding."""
