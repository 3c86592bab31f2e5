"""Exception hierarchy shared by every module."""


class ForgetfulnessError(Exception):
    """Base class for all library errors."""


class ConstraintError(ForgetfulnessError, ValueError):
    """A tedium coefficient or interest level violates its constraint."""


class DomainError(ForgetfulnessError, ValueError):
    """An argument lies outside the domain of the operation (e.g. negative time)."""


class StepSizeError(ForgetfulnessError, ValueError):
    def __init__(self, message: str, min_steps: int):
        super().__init__(message)
        self.min_steps = min_steps


class InsufficientDataError(ForgetfulnessError, ValueError):
    pass


class DegenerateAbscissaError(ForgetfulnessError, ValueError):
    pass


class NumericalFailure(ForgetfulnessError, ArithmeticError):
    """Raised when an iterative fit produces non-finite values.

    ``last_params`` holds the last iterate with finite residuals as an
    ``(x0, m)`` tuple.
    """

    def __init__(self, message: str, last_params: tuple[float, float]):
        super().__init__(message)
        self.last_params = last_params


class CorpusRejected(ForgetfulnessError, ValueError):
    """More than half of the lines in an event file failed to parse."""


class TemporalOrderError(ForgetfulnessError, ValueError):
    pass
