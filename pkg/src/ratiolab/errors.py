"""Exception hierarchy.

Every numerical routine fails loudly with one of these classes instead of
returning a silently degraded value.
"""


class RatioLabError(Exception):
    """Base class for all package errors."""


class InvalidInput(RatioLabError, ValueError):
    """Arguments violate a documented precondition."""


# special functions
class PoleProximity(RatioLabError):
    """Evaluation point is too close to the pole of zeta at s = 1."""


class AccuracyLoss(RatioLabError):
    """A remainder or convergence bound exceeds the working tolerance."""


class BranchAmbiguity(RatioLabError):
    """A continuous branch cannot be selected along the requested path."""


class PolePoint(RatioLabError):
    """Argument lies on a pole of the function."""


class MissedZero(RatioLabError):
    """Zero count disagrees with the exact argument-principle count."""


# arithmetic
class NotFundamental(RatioLabError, ValueError):
    """Integer is not a fundamental discriminant."""


class BadTwist(RatioLabError, ValueError):
    """Twist is not admissible for the curve (e.g. shares the conductor)."""


class CoefficientOverflow(RatioLabError):
    """Integer coefficients left the exact int64 range."""


# random matrices
class DegenerateQR(RatioLabError):
    """QR factorisation produced a (numerically) zero pivot."""


class NearSingularSample(RatioLabError):
    """Too many Monte Carlo samples hit a near-zero denominator."""


class CoincidentShifts(RatioLabError):
    """Two shifts coincide where the formula has a removable singularity."""


class QuadratureNotConverged(RatioLabError):
    """Node doubling or step halving failed to reach the tolerance."""


class PoleOnContour(RatioLabError):
    """A shift lies on or outside the integration contour."""


# Euler products
class TailNotConverged(RatioLabError):
    """Doubling the prime cutoff changes the product beyond tolerance."""


class MissingCoefficients(RatioLabError):
    """Coefficient table is too short for the requested cutoff."""


# conjectures
class DegenerateShifts(RatioLabError):
    """Shifts make the closed form singular."""


class RTooSmall(RatioLabError):
    """Shift is below the admissible 1/log T scale."""


# harness
class NearZeroDenominator(RatioLabError):
    """An L-value in a denominator is numerically zero."""


class CutoffNotCertified(RatioLabError):
    """Doubling the approximate-functional-equation length changed the value."""


class ConfigError(RatioLabError, ValueError):
    """Malformed or unknown configuration entry."""
