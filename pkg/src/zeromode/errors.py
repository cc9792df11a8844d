class ZeromodeError(Exception):
    exit_code = 1


class InvalidArgumentError(ZeromodeError, ValueError):
    exit_code = 1


class NotApplicableError(ZeromodeError):
    exit_code = 1


class ConvergenceError(ZeromodeError):
    exit_code = 2

    def __init__(self, message: str, partial: float | complex | None = None):
        super().__init__(message)
        self.partial = partial


class DomainError(ZeromodeError, ValueError):
    exit_code = 2

    def __init__(self, message: str, point: float):
        super().__init__(message)
        self.point = point


class InvariantViolationError(ZeromodeError):
    """A numerical identity or inequality failed; `witness` names where."""

    exit_code = 3

    def __init__(self, message: str, witness: dict[str, float]):
        super().__init__(message)
        self.witness = witness
