"""Exception types shared across the package."""


class AtiyahDetError(Exception):
    """Base class for all package-specific errors."""


class ZeroVector(AtiyahDetError):
    """A spinor lift was requested for the zero vector."""


class CoincidentPoints(AtiyahDetError):
    """Two points of a configuration coincide."""


class NumericalBreakdown(AtiyahDetError):
    """A determinant computation degenerated beyond recovery (near-coincident
    points: vanishing pivot or underflowing edge product)."""


class NotRealizable(AtiyahDetError):
    """Six edge lengths do not embed as a tetrahedron in 3-space."""


class DegenerateDenominator(AtiyahDetError):
    """An intermediate projected area in a reduction identity vanishes."""


class IllConditioned(AtiyahDetError):
    """An interpolation system is too ill-conditioned to trust."""


class ResidualTooLarge(AtiyahDetError):
    """Rounded interpolation coefficients fail to reproduce the samples."""


class ObjectiveUndefined(AtiyahDetError):
    """A search objective could not be evaluated anywhere useful."""
