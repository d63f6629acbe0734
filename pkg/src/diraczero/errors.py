"""Exception hierarchy shared by all diraczero modules."""


class DiracZeroError(Exception):
    """Base class for every error raised by this package."""


class DomainError(DiracZeroError, ValueError):
    """A conformal factor is evaluated where it vanishes or is undefined."""


class OutOfHullError(DomainError):
    """A tabulated conformal factor is evaluated outside its sample grid."""


class QuadratureError(DiracZeroError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class DivergenceError(QuadratureError):
    """An integral over the real line does not converge."""


class InadmissibleError(DiracZeroError, ValueError):
    """Parameters violate k_v**2 >= k_y**2 + M**2, so no normalizable zero mode exists."""


class DegenerateParameterError(DiracZeroError, ValueError):
    """M == k_v: the spinor representation and the normalization both break down."""


class EmptyRangeError(DiracZeroError, ValueError):
    """k_v**2 < M**2: no transverse momentum admits a zero mode."""


class ResolutionError(DiracZeroError, ValueError):
    """Grid too coarse to resolve the local oscillation of the zero mode."""


class EigenSolverError(DiracZeroError, RuntimeError):
    """The eigensolver did not converge."""


class ConfigError(DiracZeroError, ValueError):
    """A run configuration could not be parsed or validated."""


class DegeneracyWarning(UserWarning):
    """Issued when a degeneracy count is requested for an empty k_y range."""
