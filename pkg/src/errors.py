from typing import Optional


class CertificationError(Exception):
    """Base class for every error raised by the toolkit.

    === Attributes ===

    source: the inequality or rule whose failure raised this error, if any.
    """
    source: Optional[str]

    def __init__(self, message: str, source: Optional[str] = None) -> None:
        super().__init__(message)
        self.source = source

    def __str__(self) -> str:
        message = super().__str__()
        if self.source:
            return message + ' [' + self.source + ']'
        return message


class InputError(CertificationError, ValueError):
    """Malformed or out of range input."""


class FieldMismatchError(InputError):
    pass


class DeskScaleLimitError(CertificationError):
    """Instance too large for the Groebner engine."""


class PrerequisiteError(CertificationError):
    """A hypothesis of a tracer transition does not hold."""


class InternalError(CertificationError):
    pass
