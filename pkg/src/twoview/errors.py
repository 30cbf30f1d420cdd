"""Exception types raised by the twoview library."""


class TwoViewError(Exception):
    """Base class for all twoview errors."""


class ConfigError(TwoViewError):
    """Invalid configuration value or malformed config file."""


class EstimationError(TwoViewError):
    """Base class for failures inside the estimation pipeline."""


class TooFewPoints(EstimationError):
    """Fewer correspondences than the pipeline minimum (9)."""


class DepthBehindCamera(EstimationError):
    """Projected point has non-positive depth in the second camera."""


class DegenerateRays(EstimationError):
    """Triangulation rays are (numerically) parallel."""


class AmbiguousCheirality(EstimationError):
    """Two pose hypotheses tie on the positive-depth vote count."""


class RankDeficient(EstimationError):
    """Matrix has rank below what the operation requires."""


class NotEssential(EstimationError):
    """Singular values do not match the {s, s, 0} essential pattern."""


class IllConditioned(EstimationError):
    """Generalized eigenproblem failed to produce a usable solution."""


class DegenerateDepth(EstimationError):
    """Closed-form depth-ratio denominator is numerically zero."""


class NoConsensus(EstimationError):
    """RANSAC found no sample with a minimal consensus set."""


class DegenerateProjection(EstimationError):
    """Noise-free projection denominator is numerically zero."""


class RankLoss(EstimationError):
    """Constraint Jacobian lost row rank at a non-generic point."""


class VisibilityExhausted(EstimationError):
    """Scene sampling could not place enough mutually visible points."""


class ParseError(TwoViewError):
    """Correspondence file could not be parsed.

    Carries the 1-based line (or row) number of the offending entry.
    """

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnitMismatch(TwoViewError):
    """Pixel-scale coordinates supplied without camera intrinsics."""


class IoError(TwoViewError):
    """Report file could not be written."""
