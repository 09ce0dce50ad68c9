"""Exception hierarchy shared by every module."""


class CStarError(ValueError):
    """Base class for all domain errors raised by this package."""


class NotHermitian(CStarError):
    pass


class DimensionMismatch(CStarError):
    pass


class DomainError(CStarError):
    """A spectral function was applied outside its domain."""


class NotInvertible(CStarError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CommutatorTooLarge(CStarError):
    def __init__(self, message, commutator_norm):
        super().__init__(message)
        self.commutator_norm = commutator_norm


class GramNotUnit(CStarError):
    pass


class NotUnitary(CStarError):
    pass


class ZeroFunction(CStarError):
    pass


class NotUnit(CStarError):
    pass


class ProjectionZero(CStarError):
    pass


class NotNormalized(CStarError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual
