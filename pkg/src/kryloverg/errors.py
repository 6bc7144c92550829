"""Exception types shared across the library."""


class KrylovergError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(KrylovergError):
    """Operands have incompatible shapes."""


class NonSquareInput(KrylovergError):
    """A square matrix was required."""


class NonHermitianInput(KrylovergError):
    """Matrix fails the hermiticity check."""


class UnitarityError(KrylovergError):
    """Matrix fails the unitarity check at construction."""


class ConvergenceFailure(KrylovergError):
    """The underlying eigensolver did not converge."""


class NonUnitVector(KrylovergError):
    """Vector norm deviates from one beyond tolerance."""


class DimensionMismatch(KrylovergError):
    """Vector or subspace dimension incompatible with the operator."""


class IllConditioned(KrylovergError):
    """A solve produced non-finite values or failed its residual check."""


class EmptyInput(KrylovergError):
    """An empty sample was supplied."""


class IndexOutOfRange(KrylovergError):
    """Index outside the valid range."""


class OutOfRange(KrylovergError):
    """Scalar argument outside its domain."""


class TooFewLevels(KrylovergError):
    """Not enough spectral levels for the requested statistic."""


class DegenerateSpectrum(KrylovergError):
    """Spectrum collapses below the degeneracy threshold."""


class NonUnitaryBasis(KrylovergError):
    """A reference or eigenvector basis is not unitary within tolerance."""


class ParityWithDisorder(KrylovergError):
    """A parity sector was requested for a disordered chain."""


class DegenerateRange(KrylovergError):
    """A rescaling input has zero range."""


class ConfigError(KrylovergError):
    """Sweep configuration is invalid."""
