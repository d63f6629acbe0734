"""Finite-difference oracle for the reduced 1-D Dirac operator."""
from ._backend import BACKEND
from .operator import (
    DiracMatrix,
    Grid,
    assemble,
    near_zero_eigen,
    residual,
    resolution,
)

__all__ = ["BACKEND", "DiracMatrix", "Grid", "assemble", "near_zero_eigen", "residual", "resolution"]
