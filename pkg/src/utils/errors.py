"""
Error hierarchy for the analyzer.

Library code raises these; only the command line turns them into exit codes.
"""


class KleinianError(Exception):
    """Base class for every failure raised by the analyzer."""

    exit_code = 1


class ConfigError(KleinianError):
    """Configuration or input validation failed."""

    exit_code = 2


class NoSquareRoot(KleinianError):
    """The map has no square root under the branch rules (it is minus the identity)."""


class InsufficientSample(KleinianError):
    """A quasicircle sample has too few points for a numeric test."""


class EmptyGroup(KleinianError):
    """Enumeration produced no non-identity word."""


class OrderingFailed(KleinianError):
    """A limit sample could not be cyclically ordered into a simple closed curve."""


class UntrackedRegion(KleinianError):
    """A raster region is below the quality thresholds for tracking."""


class Inconsistent(KleinianError):
    """Algebraic and numeric bump sets disagree beyond tolerance."""

    exit_code = 3

    def __init__(self, message, algebraic=None, numeric=None, distance=None):
        super().__init__(message)
        self.algebraic = algebraic
        self.numeric = numeric
        self.distance = distance


class NoFuchsianModel(KleinianError):
    """No boundary correspondence is available for the component."""


class TooSparse(KleinianError):
    """A circle subset is too small to have a convex hull boundary."""


class CheckFailed(KleinianError):
    """One of the simple / non-accumulating / cusp checks failed."""

    exit_code = 3

    def __init__(self, message, check_id, geodesic=None):
        super().__init__(message)
        self.check_id = check_id
        self.geodesic = geodesic


class DegenerateCurve(KleinianError):
    """A sampled polygon self-intersects at raster scale."""


class Disconnected(KleinianError):
    """Two raster cells of a domain are not joined by any grid path."""


class UnmatchedCurve(KleinianError):
    """A Nielsen boundary class has no partner in another component."""


class CaseViolation(KleinianError):
    """The image-curve class count does not divide the component count."""

    exit_code = 3


def exit_code_for(exc):
    """
    Map an exception to a process exit code.

    Parameters:
    -----------
    exc : BaseException
        The exception caught at the command line boundary.

    Returns:
    --------
    int
        2 for validation problems, 3 for consistency failures, 1 otherwise.
    """
    if isinstance(exc, KleinianError):
        return exc.exit_code
    return 1


__all__ = [
    'KleinianError',
    'ConfigError',
    'NoSquareRoot',
    'InsufficientSample',
    'EmptyGroup',
    'OrderingFailed',
    'UntrackedRegion',
    'Inconsistent',
    'NoFuchsianModel',
    'TooSparse',
    'CheckFailed',
    'DegenerateCurve',
    'Disconnected',
    'UnmatchedCurve',
    'CaseViolation',
    'exit_code_for',
]
