"""Finite-difference reduced Dirac operator and residual certification of zero modes.

Spinor samples are stored node-major, component-minor: dof ``2*i + c`` holds
component ``c`` at node ``i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..conformal import ConformalFactor
from ..errors import EigenSolverError, ResolutionError
from ..zeromode import PhysicalParams, ZeroMode
from . import _backend

BoundaryCondition = Literal["dirichlet", "periodic"]

DENSE_LIMIT = 10_000  # largest dimension accepted by the dense eigensolver
AUTO_DENSE_BELOW = 600  # "auto" uses dense LAPACK below this dimension, shift-invert ARPACK above
RESOLUTION_LIMIT = 0.5  # max h * |lambda| * max(Omega) for residual()


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max) and self.x_max > self.x_min):
            raise ValueError(f"grid needs finite x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.n_points) != self.n_points or self.n_points < 3 or self.n_points % 2 == 0:
            raise ValueError(f"n_points must be an odd integer >= 3, got {self.n_points}")

    @classmethod
    def symmetric(cls, half_width: float, n_points: int) -> "Grid":
        return cls(-half_width, half_width, n_points)

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def refined(self) -> "Grid":
        """Same interval, half the spacing (every old node is kept)."""
        return Grid(self.x_min, self.x_max, 2 * self.n_points - 1)


@dataclass(frozen=True, eq=False)
class DiracMatrix:
    """H = -i sigma_1 D_x - k_y Omega sigma_2 + M Omega sigma_3 + k_v Omega on a grid.

    Dirichlet rows at the two boundary nodes are zero (the spinor is pinned
    to 0 there); :meth:`active_operator` drops those nodes entirely.
    """

    grid: Grid
    weight: np.ndarray  # Omega at the nodes
    k_y: float
    M: float
    k_v: float
    bc: BoundaryCondition

    @property
    def periodic(self) -> bool:
        return self.bc == "periodic"

    @property
    def dim(self) -> int:
        return 2 * self.grid.n_points

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Matrix-free H psi; accepts shape (n, 2) or flat (2n,) and returns the same shape."""
        psi = np.asarray(psi)
        flat = psi.ndim == 1
        out = _backend.apply_dirac(
            psi.reshape(-1, 2), self.weight, self.grid.h, self.k_y, self.M, self.k_v, self.periodic
        )
        return out.reshape(-1) if flat else out

    def to_sparse(self) -> sp.csr_matrix:
        n, h = self.grid.n_points, self.grid.h
        rows_nodes = np.arange(n) if self.periodic else np.arange(1, n - 1)
        w = self.weight[rows_nodes]
        r, c, v = [], [], []

        def block(nodes_r, nodes_c, entries):
            for (a, b), val in entries:
                val = np.broadcast_to(val, nodes_r.shape)
                keep = val != 0
                r.append(2 * nodes_r[keep] + a)
                c.append(2 * nodes_c[keep] + b)
                v.append(val[keep])

        # on-site: Omega * [[M + k_v, i k_y], [-i k_y, k_v - M]]
        block(rows_nodes, rows_nodes, [
            ((0, 0), w * (self.M + self.k_v)),
            ((0, 1), w * (1j * self.k_y)),
            ((1, 0), w * (-1j * self.k_y)),
            ((1, 1), w * (self.k_v - self.M)),
        ])
        # -i sigma_1 D_x: +1/(2h) to the right neighbour, -1/(2h) to the left
        coef = -1j / (2 * h)
        right = (rows_nodes + 1) % n
        left = (rows_nodes - 1) % n
        block(rows_nodes, right, [((0, 1), coef), ((1, 0), coef)])
        block(rows_nodes, left, [((0, 1), -coef), ((1, 0), -coef)])
        return sp.csr_matrix(
            (np.concatenate(v).astype(complex), (np.concatenate(r), np.concatenate(c))),
            shape=(self.dim, self.dim),
        )

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def active_operator(self) -> sp.csr_matrix:
        """The operator on free unknowns: interior nodes for Dirichlet, all nodes for periodic."""
        m = self.to_sparse()
        if self.periodic:
            return m
        return m[2:-2, 2:-2]


def assemble(params: PhysicalParams, omega: ConformalFactor, grid: Grid, bc: BoundaryCondition = "dirichlet") -> DiracMatrix:
    if bc not in ("dirichlet", "periodic"):
        raise ValueError(f"unknown boundary condition {bc!r}")
    weight = np.asarray(omega.value(grid.nodes), dtype=float)
    return DiracMatrix(grid=grid, weight=weight, k_y=params.k_y, M=params.M, k_v=params.k_v, bc=bc)


def resolution(mode: ZeroMode, grid: Grid) -> float:
    """h * |lambda| * max Omega on the grid: phase advance per cell at the worst node."""
    return grid.h * abs(mode.lam) * float(np.max(mode.omega.value(grid.nodes)))


def residual(
    params: PhysicalParams,
    omega: ConformalFactor,
    grid: Grid,
    mode: ZeroMode,
    bc: BoundaryCondition = "dirichlet",
) -> float:
    """max_i |H psi|_i / max_i |psi|_i over interior nodes, psi = chi * phi sampled on the grid.

    Only the sampled spinor is taken from ``mode``; the operator is the
    discretized reduced equation with E = 0.  Truncation error is
    O(h^2 (|lambda| max Omega)^3).
    """
    res = resolution(mode, grid)
    if res > RESOLUTION_LIMIT:
        raise ResolutionError(
            f"phase under-resolved: h*|lambda|*max(Omega) = {res:.3g} > {RESOLUTION_LIMIT}; "
            f"use more points or a narrower domain"
        )
    psi = mode.spinor(grid.nodes)
    hpsi = assemble(params, omega, grid, bc).apply(psi)
    num = _backend.row_norms(hpsi[1:-1])
    den = _backend.row_norms(psi[1:-1])
    return float(np.max(num) / np.max(den))


def near_zero_eigen(matrix: DiracMatrix, k: int = 6, method: str = "auto") -> list[complex]:
    """The ``k`` eigenvalues of smallest modulus of the active operator, sorted by modulus.

    ``method`` is "dense" (LAPACK, dimension <= 10^4), "sparse" (ARPACK in
    shift-invert mode about 0) or "auto".
    """
    op = matrix.active_operator()
    dim = op.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if method == "auto":
        method = "dense" if dim < AUTO_DENSE_BELOW or k >= dim - 1 else "sparse"
    if method == "dense":
        if dim > DENSE_LIMIT:
            raise ValueError(f"dense eigensolve limited to dimension {DENSE_LIMIT}, got {dim}")
        try:
            vals = np.linalg.eigvals(op.toarray())
        except np.linalg.LinAlgError as exc:
            raise EigenSolverError(str(exc)) from exc
    elif method == "sparse":
        if k >= dim - 1:
            raise ValueError(f"sparse eigensolve needs k < dim - 1 = {dim - 1}")
        vals = _shift_invert(op.tocsc(), k)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(np.abs(vals), kind="stable")
    return [complex(v) for v in vals[order][:k]]


def _shift_invert(op: sp.csc_matrix, k: int) -> np.ndarray:
    scale = float(abs(op).max())
    # an exactly singular operator cannot be factorized at 0; nudge the shift off the kernel
    for shift in (0.0, 1e-10 * scale, 1e-7 * scale):
        try:
            return spla.eigs(op, k=k, sigma=shift, return_eigenvectors=False)
        except spla.ArpackNoConvergence as exc:
            raise EigenSolverError(f"ARPACK did not converge: {exc}") from exc
        except RuntimeError as exc:
            if "singular" not in str(exc).lower():
                raise EigenSolverError(str(exc)) from exc
    raise EigenSolverError("operator singular at every trial shift")
