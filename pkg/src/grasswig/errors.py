"""Exception hierarchy shared by all grasswig modules."""


class GrasswigError(Exception):
    """Base class for every error raised by this package."""


class ProjectionError(GrasswigError, ValueError):
    """A matrix failed validation as an orthogonal projection or frame."""


class NotHermitian(ProjectionError):
    pass


class NotIdempotent(ProjectionError):
    pass


class RankMismatch(ProjectionError):
    pass


class NotOrthonormal(ProjectionError):
    pass


class SpectrumNotSeparated(ProjectionError):
    pass


class DimensionMismatch(GrasswigError, ValueError):
    pass


class CrossCheckFailed(GrasswigError):
    """Angle count and rank(P - Q) disagree."""


class NotAdjacent(GrasswigError, ValueError):
    pass


class NotNonOrthAdjacent(GrasswigError, ValueError):
    pass


class InsufficientSamples(GrasswigError):
    pass


class DimensionTooSmall(GrasswigError, ValueError):
    pass


class BasisSelectionFailed(GrasswigError):
    pass


class OracleInvalidOutput(GrasswigError):
    pass


class OracleLookupError(GrasswigError, KeyError):
    """A tabulated oracle has no entry for the requested projection."""


class NotPreserving(GrasswigError):
    """The map does not preserve tr PQ; ``witness`` holds the offending pair."""

    def __init__(self, message, max_residual=None, witness=None):
        super().__init__(message)
        self.max_residual = max_residual
        self.witness = witness


class NotWigner(GrasswigError):
    pass


class VerificationFailed(GrasswigError):
    pass


class PhaseFixFailed(GrasswigError):
    pass


class LinearityAmbiguous(GrasswigError):
    pass
