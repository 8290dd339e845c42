"""Exception types raised by the inversion pipelines."""


class TwistConvError(Exception):
    """Base class for library errors."""


class NotInvertible(TwistConvError):
    """The element has no inverse at the requested tolerance."""


class TruncationNotConverged(TwistConvError):
    """Grid refinement did not reach the tail and residual targets."""


class OverlappingSupports(TwistConvError):
    """Cramer column entries do not sit on disjoint cosets."""


class NotContractive(TwistConvError):
    """Neumann series requested for an element with ||delta - a||_1 >= 1."""


class MaxIterExceeded(TwistConvError):
    pass


class NotAFrame(TwistConvError):
    """The Gabor frame operator is numerically singular."""
