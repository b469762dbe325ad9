__all__ = [
    "KExchangeError",
    "InvalidConfiguration",
    "DomainError",
    "PreconditionError",
    "DegenerateInstance",
    "ParseError",
    "InstanceValidationError",
    "CapExceeded",
    "InternalInvariantError",
    "AuditFailure",
]

import enum
from typing import Any, Optional

from pydantic import ValidationError as PydanticValidationError


class KExchangeError(Exception):
    """Base class for all errors."""

    exit_code = 1

    def __init__(self, message: str):
        self.message = message

    def __str__(self):
        return f"{self.__class__.__name__}({self.message})"

    __repr__ = __str__


class InvalidConfiguration(KExchangeError):
    class Op(str, enum.Enum):
        get = "getting"
        set = "setting"
        load = "loading"
        save = "saving"

    def __init__(
        self,
        message: Optional[str] = None,
        key: Optional[str] = None,
        value: Optional[str] = None,
        error: Optional[Exception] = None,
        operation: Op = Op.get,
    ):
        self.key = key
        self.value = value
        self.error = error
        self.operation = operation
        if message is None:
            error_msg = "" if error is None else f" {error}"
            if key is None:
                if value is None:
                    message = f"Configuration {operation.value} error.{error_msg}"
                else:
                    message = f"Invalid {operation.value} value '{value}'.{error_msg}"
            else:
                if value is None:
                    message = f"Error {operation.value} key='{key}'.{error_msg}"
                else:
                    message = (
                        f"Error {operation.value} key='{key}' value='{value}'."
                        f"{error_msg}"
                    )
        super().__init__(message=message)


class DomainError(KExchangeError):
    """Unknown element, empty ground set or an ill-formed set definition."""


class PreconditionError(KExchangeError):
    """An operation was called with arguments that break its contract."""


class DegenerateInstance(KExchangeError):
    """Every singleton has value zero, so no rounding scale exists."""


class ParseError(KExchangeError):
    exit_code = 2

    def __init__(
        self, message: str, line: Optional[int] = None, column: Optional[int] = None
    ):
        super().__init__(message=message)
        self.line = line
        self.column = column

    def __str__(self):
        if self.line is None:
            return f"{self.__class__.__name__}({self.message})"
        return (
            f"{self.__class__.__name__}(line {self.line}, column {self.column}: "
            f"{self.message})"
        )

    __repr__ = __str__


class InstanceValidationError(ParseError):
    def __init__(
        self,
        message: str,
        context: Optional[str] = None,
        error: Optional[PydanticValidationError] = None,
    ):
        super().__init__(
            message=message if context is None else f"{context}: {message}"
        )
        self.context = context
        self.error = error

    @property
    def errors(self) -> list:
        if self.error is None:
            return []
        return self.error.errors()


class CapExceeded(KExchangeError):
    """Refusal to start an enumeration that is larger than the configured cap."""

    exit_code = 3

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(message=f"{what}: {size} exceeds the cap of {cap}.")
        self.what = what
        self.size = size
        self.cap = cap


class InternalInvariantError(KExchangeError):
    """An instrumented invariant failed; this is always a bug."""

    exit_code = 4


class AuditFailure(KExchangeError):
    exit_code = 4

    def __init__(self, check: str, message: str, witness: Any = None):
        super().__init__(message=f"{check}: {message}")
        self.check = check
        self.witness = witness
