"""Exception and warning types raised across the package."""


class OrbizetaError(Exception):
    """Base class for all library errors."""


class PoleError(OrbizetaError, ValueError):
    """Argument hits a pole of a meromorphic function."""


class ZeroError(OrbizetaError, ValueError):
    """Logarithm requested at a zero of an entire function."""


class DomainError(OrbizetaError, ValueError):
    """Argument outside the documented validity region."""


class NonHyperbolicError(OrbizetaError, ValueError):
    """Signature with non-negative Euler characteristic."""


class NonRealError(OrbizetaError, ArithmeticError):
    """A quantity that must be real carries an imaginary residue."""


class ConvergenceError(OrbizetaError, ArithmeticError):
    """Series or product evaluated outside its convergence region."""


class QuadratureError(OrbizetaError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class TailError(OrbizetaError, ArithmeticError):
    """Truncation tail too large to be trusted."""


class FitError(OrbizetaError, ArithmeticError):
    """Least-squares fit residual above tolerance."""


class ParseError(OrbizetaError, ValueError):
    """Malformed input file."""


class InvariantViolation(OrbizetaError, ValueError):
    """Input data breaks a structural invariant."""

    def __init__(self, message, index=None):
        super().__init__(message if index is None else f"record {index}: {message}")
        self.index = index


class AuditFailure(OrbizetaError, RuntimeError):
    """Length spectrum changed when the word depth was increased."""


class EmptySpectrumError(OrbizetaError, ValueError):
    """Operation needs at least one geodesic record."""


class ConfigError(OrbizetaError, ValueError):
    """Invalid job configuration."""


class DiscretenessWarning(UserWarning):
    """Distinct words with coinciding traces were found."""
