"""Error hierarchy shared by the numerical core, the experiments and the CLI."""


class JrcBeamError(Exception):
    """Root of every error raised by jrcbeam."""

    pass


class InvalidDimensionError(JrcBeamError, ValueError):
    """A matrix or vector does not have the required shape."""

    pass


class InvalidArgumentError(JrcBeamError, ValueError):
    """An argument is outside of its admissible range."""

    pass


class DomainError(JrcBeamError, ValueError):
    """A covariance matrix is not positive semi-definite."""

    pass


class NumericalConsistencyError(JrcBeamError, ArithmeticError):
    """A quantity that is nonnegative by construction came out negative."""

    pass


class OracleSizeError(InvalidArgumentError):
    """Exhaustive search was requested for an array that is too large."""

    pass


class ConfigurationError(JrcBeamError):
    """Invalid experiment configuration. Raised before any computation."""

    pass


class ResultsIOError(JrcBeamError, OSError):
    """Results could not be written to (or read from) the given path."""

    pass


class BeamspaceResolutionWarning(UserWarning):
    """More users and targets than antennas: beams cannot be told apart."""

    pass
