"""Exception hierarchy shared by all modules."""


class RkrdError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(RkrdError, ValueError):
    """An argument violates an operation's precondition."""


class NumericalFailure(RkrdError, ArithmeticError):
    """A numerical routine did not converge or lost a guaranteed property."""


class NotPSD(NumericalFailure):
    """A matrix that must be positive semidefinite has a clearly negative eigenvalue."""


class DegenerateSpectrum(RkrdError, ValueError):
    """The spectral statistics are degenerate (e.g. a rank-1 empirical covariance)."""


class CalibrationFailure(RkrdError, RuntimeError):
    """Noise calibration found no root in its search bracket."""


class FormatError(InvalidInput):
    """A sample file is malformed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
