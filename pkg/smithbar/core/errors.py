"""
Exception types for smithbar.

Every error carries a ``kind`` used by the command line front end to print
``E:<kind>:<message>`` on standard error.
"""

from typing import Iterable, Optional


class SmithbarError(Exception):
    """Base class for all smithbar errors."""
    kind = 'Error'


class InputError(SmithbarError):
    """Exception raised for unreadable files or malformed flags."""
    kind = 'InputError'


class DivisionByZero(SmithbarError):
    """Exception raised when dividing by or inverting zero in a field."""
    kind = 'DivisionByZero'


class FieldMismatch(SmithbarError):
    """Exception raised when operands live in different fields."""
    kind = 'FieldMismatch'


class InvalidField(SmithbarError):
    """Exception raised for an unparsable or non-prime field spec."""
    kind = 'InvalidField'


class ComplexSyntaxError(SmithbarError):
    """Exception raised for a malformed line in a complex file."""
    kind = 'SyntaxError'

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class InvariantViolation(SmithbarError):
    """Exception raised when a parsed complex or action breaks an invariant."""
    kind = 'InvariantViolation'

    def __init__(self, check: str, ids: Iterable[str] = (), message: Optional[str] = None):
        self.check = check
        self.ids = tuple(ids)
        detail = message or f"{check} check failed"
        if self.ids:
            detail = f"{detail} ({', '.join(self.ids)})"
        super().__init__(detail)


class NotClosedUnderBoundary(SmithbarError):
    """Exception raised when fixed generators do not span a subcomplex."""
    kind = 'NotClosedUnderBoundary'


class EndpointCollision(SmithbarError):
    """Exception raised when a window endpoint equals a bar endpoint."""
    kind = 'EndpointCollision'


class ConsistencyViolation(SmithbarError):
    """Exception raised when local data disagree with a periodic barcode."""
    kind = 'ConsistencyViolation'


class VacuousCertificate(SmithbarError):
    """Exception raised when a certificate is requested for zero total bar length."""
    kind = 'VacuousCertificate'


class EvenTupleError(SmithbarError):
    """Exception raised when an odd tuple size is required."""
    kind = 'EvenTupleError'


class BorderlineEigenvalue(SmithbarError):
    """Exception raised when an eigenvalue falls in the guard band around the tolerance."""
    kind = 'BorderlineEigenvalue'

    def __init__(self, value: float, tol: float):
        self.value = value
        super().__init__(f"eigenvalue {value:.3e} within guard band of tolerance {tol:.1e}")


class OutOfRange(SmithbarError):
    """Exception raised for a parameter outside its admissible interval."""
    kind = 'OutOfRange'


class DegenerateRotation(SmithbarError):
    """Exception raised when rotation coefficients coincide modulo 1."""
    kind = 'DegenerateRotation'


class DegenerateSpectrum(SmithbarError):
    """Exception raised when critical sets are not isolated in the action sweep."""
    kind = 'DegenerateSpectrum'


class NonConvergence(SmithbarError):
    """Raised or recorded when a critical point search does not converge."""
    kind = 'NonConvergence'

    def __init__(self, seed: float, residual: float):
        self.seed = seed
        self.residual = residual
        super().__init__(f"no critical point near t={seed:.6f} (residual {residual:.2e})")


class BadResidue(SmithbarError):
    """Exception raised when a residue q is outside the symmetric range for p."""
    kind = 'BadResidue'


class AmbientOverflow(SmithbarError):
    """Exception raised when a projective class leaves its ambient space."""
    kind = 'AmbientOverflow'
