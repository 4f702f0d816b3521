# errors.py

from typing import Any, Dict


class WittError(ValueError):
    """Base class for recoverable domain errors (CLI exit code 2)."""

    code = "WittError"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload = {"error": self.code, "message": self.message}
        payload.update({k: _plain(v) for k, v in self.details.items()})
        return payload


def _plain(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, (str, bool)) or value is None:
        return value
    return str(value)


class NotDivisorClosed(WittError):
    code = "NotDivisorClosed"

    def __init__(self, witness: int, missing: int):
        super().__init__(
            f"{witness} is in the set but its divisor {missing} is not",
            witness=witness, missing=missing,
        )
        self.witness = witness
        self.missing = missing


class DescriptorMismatch(WittError):
    code = "DescriptorMismatch"


class NotDivisible(WittError):
    code = "NotDivisible"


class InvalidRing(WittError):
    code = "InvalidRing"


class NotFinite(WittError):
    code = "NotFinite"


class NotGhostIntegral(WittError):
    code = "NotGhostIntegral"

    def __init__(self, index: int, message: str = ""):
        super().__init__(message or f"ghost vector is not integral at index {index}", index=index)
        self.index = index


class ShapeMismatch(WittError):
    code = "ShapeMismatch"


class NotSubset(WittError):
    code = "NotSubset"


class IndexOutsideS(WittError):
    code = "IndexOutsideS"


class NotCoprime(WittError):
    code = "NotCoprime"


class NotPrime(WittError):
    code = "NotPrime"


class WrongRing(WittError):
    code = "WrongRing"


class TooLarge(WittError):
    code = "TooLarge"


class AmbientMismatch(WittError):
    code = "AmbientMismatch"


class TableLimitExceeded(WittError):
    code = "TableLimitExceeded"


class ParseError(WittError):
    code = "ParseError"


class InvariantViolation(AssertionError):
    """An identity that must hold failed: an implementation bug, not bad input."""
