"""
Custom exception classes
"""
from fastapi import status


# Process exit statuses used by the command line
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_BAD_ARGUMENTS = 2
EXIT_CAPACITY = 3


class AppException(Exception):
    """Base application exception"""
    def __init__(
        self,
        message: str,
        status_code: int = status.HTTP_500_INTERNAL_SERVER_ERROR,
        exit_code: int = EXIT_VERIFICATION_FAILED,
    ):
        self.message = message
        self.status_code = status_code
        self.exit_code = exit_code
        super().__init__(self.message)


class ValidationError(AppException):
    """Invalid input; maps to HTTP 422 and exit status 2"""
    def __init__(self, message: str = "Validation error"):
        super().__init__(
            message,
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            exit_code=EXIT_BAD_ARGUMENTS,
        )


class InvalidSpec(ValidationError):
    """(s2, n, k) outside 0 <= k <= s2*n, or a bad T-operator index"""
    def __init__(self, message: str = "Invalid Dicke specification"):
        super().__init__(message)


class DigitOutOfRange(ValidationError):
    def __init__(self, message: str = "Basis digit out of range"):
        super().__init__(message)


class DimensionMismatch(ValidationError):
    def __init__(self, message: str = "State dimensions do not match"):
        super().__init__(message)


class InvalidGate(ValidationError):
    """Gate structurally inconsistent with itself or with the register"""
    def __init__(self, message: str = "Invalid gate"):
        super().__init__(message)


class LevelOutOfRange(InvalidGate):
    def __init__(self, message: str = "Gate level out of range"):
        super().__init__(message)


class LevelsNotOrdered(InvalidGate):
    def __init__(self, message: str = "Gate levels must satisfy i < j"):
        super().__init__(message)


class PositionOutOfRange(InvalidGate):
    def __init__(self, message: str = "Qudit position out of range"):
        super().__init__(message)


class ControlOnTarget(InvalidGate):
    def __init__(self, message: str = "Control placed on the target qudit"):
        super().__init__(message)


class DuplicateControl(InvalidGate):
    def __init__(self, message: str = "Qudit controlled twice"):
        super().__init__(message)


class NegativeUpperIndex(ValidationError):
    def __init__(self, message: str = "Binomial upper index must be nonnegative"):
        super().__init__(message)


class SumMismatch(ValidationError):
    def __init__(self, message: str = "Occupation counts do not sum to n"):
        super().__init__(message)


class NotASolution(ValidationError):
    def __init__(self, message: str = "Occupation vector does not solve the weight equations"):
        super().__init__(message)


class PartitionOutOfRange(ValidationError):
    def __init__(self, message: str = "Partition size must satisfy 1 <= l < n"):
        super().__init__(message)


class DegenerateVariance(ValidationError):
    def __init__(self, message: str = "Variance vanishes; Gaussian entropy undefined"):
        super().__init__(message)


class InvalidAmplitude(ValidationError):
    def __init__(self, message: str = "Amplitude must be the square root of a nonnegative rational"):
        super().__init__(message)


class MalformedInput(ValidationError):
    """State text or circuit JSON that does not parse"""
    def __init__(self, message: str = "Malformed input"):
        super().__init__(message)


class CapacityExceeded(AppException):
    """Register too large to hold as a dense amplitude array"""
    def __init__(self, message: str = "State exceeds amplitude capacity"):
        super().__init__(
            message,
            status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE,
            exit_code=EXIT_CAPACITY,
        )


class InconsistentCoefficients(AppException):
    def __init__(self, message: str = "Rotation angles do not reproduce the coefficients"):
        super().__init__(message)


class UnsupportedShape(AppException):
    def __init__(self, message: str = "No circuit topology for this T operator"):
        super().__init__(message)

