"""Exception types shared across the package."""


class LayerwiseError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(LayerwiseError):
    """Matrix operands have incompatible shapes."""


class SingularMatrix(LayerwiseError):
    """A symmetric factorization failed or hit a negligible pivot."""


class DegenerateInput(LayerwiseError):
    """Input data carries no usable signal (e.g. zero variance)."""


class ZeroGradient(LayerwiseError):
    """The weight gradient vanished; training has converged."""


class InsufficientProbes(LayerwiseError):
    """Too few distinct probe measurements to fit the error model."""


class NonPositiveSigma(LayerwiseError):
    """A probe error measurement is not positive, so its log is undefined."""


class NegativeBeta(LayerwiseError):
    """A measured error fell below the approximation term of the error model."""


class TooFewSamples(LayerwiseError):
    """Not enough samples to produce a non-empty train/test split."""


class ParseError(LayerwiseError):
    """A CSV field could not be parsed as a finite number."""


class ShapeError(LayerwiseError):
    """A CSV row has the wrong number of fields."""


class FormatError(LayerwiseError):
    """A model file is malformed, truncated, or has an unsupported version."""
