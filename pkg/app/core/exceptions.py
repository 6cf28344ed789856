"""Custom exceptions for VortexLab."""

from typing import Optional, Tuple


class VortexLabException(Exception):
    """Base exception for VortexLab."""
    pass


class ValidationException(VortexLabException):
    """Exception raised during input validation."""
    pass


class DomainException(ValidationException):
    """Exception raised when a map is evaluated at one of its vortex points."""
    pass


class UnresolvedSamplingException(ValidationException):
    """Exception raised when consecutive samples are too far apart to unwrap."""

    def __init__(self, message: str, cell: Optional[Tuple[int, ...]] = None):
        super().__init__(message)
        self.cell = cell


class IncompatibleDataException(ValidationException):
    """Exception raised when Neumann data violates the compatibility condition."""

    def __init__(self, message: str, defect: float = 0.0):
        super().__init__(message)
        self.defect = defect


class DegreeMismatchException(ValidationException):
    """Exception raised when a boundary degree does not match the requested charges."""
    pass


class NonRegularLevelException(ValidationException):
    """Exception raised when a level set passes through a critical point."""

    def __init__(self, message: str, retry_level: Optional[float] = None):
        super().__init__(message)
        self.retry_level = retry_level


class NumericalContractException(VortexLabException):
    """Exception raised when a computed result violates a numerical contract."""
    pass
