"""Zero-energy states of the (2+1)-D Dirac equation on ds^2 = Omega^2 (dt^2 - dx^2) - dy^2."""
from .conformal import (
    REGISTRY,
    ConformalFactor,
    CoshPower,
    PolynomialEven,
    Tabulated,
    antiderivative,
    evaluate,
    reciprocal_integral,
)
from .geometry import GeometryBundle, build_geometry, christoffel_oracle, verify_clifford
from .zeromode import (
    PhysicalParams,
    ZeroMode,
    admissible,
    build_zero_mode,
    degeneracy,
    ky_range,
    normalize,
    probability_density,
    spinor_eigenpair,
)

__version__ = "0.1.0"

__all__ = [
    "REGISTRY",
    "ConformalFactor",
    "CoshPower",
    "PolynomialEven",
    "Tabulated",
    "antiderivative",
    "evaluate",
    "reciprocal_integral",
    "GeometryBundle",
    "build_geometry",
    "christoffel_oracle",
    "verify_clifford",
    "PhysicalParams",
    "ZeroMode",
    "admissible",
    "build_zero_mode",
    "degeneracy",
    "ky_range",
    "normalize",
    "probability_density",
    "spinor_eigenpair",
]
