"""Exception types shared across the package."""


class GrurError(Exception):
    """Base class for algorithmic failures surfaced to callers."""


class StructureError(ValueError):
    """Ring, arity or shape mismatch between operands."""


class DenominatorVanishes(GrurError):
    """A rational-function denominator is zero at the requested point."""

    def __init__(self, point, certificate=None):
        self.point = point
        self.certificate = certificate
        where = ", ".join(f"{k}={v}" for k, v in point.items()) if isinstance(point, dict) else str(point)
        msg = f"denominator vanishes at {where}"
        if certificate is not None:
            msg += f" (certificate {certificate})"
        super().__init__(msg)


class NotZeroDimensional(GrurError):
    pass


class NoSolutions(GrurError):
    pass


class FormSearchFailed(GrurError):
    pass


class WitnessSearchExhausted(GrurError):
    pass


class NoSolutionInBounds(GrurError):
    pass


class AmbiguousReconstruction(GrurError):
    pass


class InsufficientGoodPoints(GrurError):
    pass


class EmptySampleSet(GrurError):
    pass
