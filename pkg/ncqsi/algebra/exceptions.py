class InvalidShapeError(Exception):
    """This exception is raised when a chain shape has no factors or a factor below 2"""

    def __init__(self, factor_dims):
        super().__init__(
            f"Invalid chain shape {list(factor_dims)}: need n >= 1 factors, each d_i >= 2"
        )


class ShapeMismatchError(Exception):
    """This exception is raised when two operands live on different chains"""

    def __init__(self, expected, got):
        super().__init__(f"Shape mismatch: expected {expected}, got {got}")


class FactorIndexError(Exception):
    """This exception is raised when a tensor slot does not exist"""

    def __init__(self, index, n_factors):
        super().__init__(f"Factor index {index} out of range 1..{n_factors}")


class NotHermitianError(Exception):
    """This exception is raised when a hermitian operand is required"""

    def __init__(self, defect, tol):
        super().__init__(
            f"Operand is not hermitian: max|x - x*| = {defect:.3e} exceeds {tol:.3e}"
        )


class InvalidStateError(Exception):
    """This exception is raised when a state specification is malformed"""

    def __init__(self, reason):
        super().__init__(f"Invalid state: {reason}")


class NonFaithfulStateError(Exception):
    """This exception is raised when a density has a non-positive eigenvalue"""

    def __init__(self, factor, min_eigenvalue):
        super().__init__(
            f"State is not faithful: density {factor} has min eigenvalue {min_eigenvalue:.3e}"
        )


class InvalidScheduleError(Exception):
    """This exception is raised when jump times are not strictly increasing in (0, T]"""

    def __init__(self, reason):
        super().__init__(f"Invalid filtration schedule: {reason}")


class TimeOutOfRangeError(Exception):
    """This exception is raised when a time lies outside the admissible window"""

    def __init__(self, t, low, high):
        super().__init__(f"Time {t} outside [{low}, {high}]")


class NotAdaptedError(Exception):
    """This exception is raised when a process value does not lie in its filtration level"""

    def __init__(self, what, level, defect):
        super().__init__(
            f"{what} is not in A_{level}: |E(x) - x| = {defect:.3e}"
        )


class InvalidRampError(Exception):
    """This exception is raised when a ramp or profile table violates its contract"""

    def __init__(self, reason):
        super().__init__(f"Invalid ramp table: {reason}")


class ProcessKindError(Exception):
    """This exception is raised when an operation needs a different process kind"""

    def __init__(self, operation, kind):
        super().__init__(f"{operation} is not defined for process kind {kind}")


class NotPositiveError(Exception):
    """This exception is raised when a positive semidefinite operand is required"""

    def __init__(self, what, min_eigenvalue):
        super().__init__(f"{what} is not PSD: min eigenvalue {min_eigenvalue:.3e}")
