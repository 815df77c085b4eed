"""Exception hierarchy shared by all hkforge modules."""


class HkforgeError(Exception):
    """Base class for all library errors."""


class StructuralError(HkforgeError):
    """Malformed input data (wrong lengths, unused slots, bad JSON)."""


class DomainError(HkforgeError):
    """Input outside the mathematical domain of an operation."""


class RealityError(HkforgeError):
    """Antipodal reality condition violated beyond tolerance."""


class PinchedTorusError(DomainError):
    """Weierstrass discriminant vanishes: the elliptic curve degenerates."""


class PoleOnCycleError(DomainError):
    """Third-kind integrand pole sits on a branch point of the cycle."""


class ContourError(HkforgeError):
    """Contour construction or branch tracking failed."""


class NearDegenerateError(ContourError):
    """Roots too close together to thread a contour between them."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NoSolutionError(HkforgeError):
    """Constraint solver found no sign change in the scanned interval."""

    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan


class UnsolvedStateError(HkforgeError):
    """Operation requires a solved auxiliary coordinate."""
