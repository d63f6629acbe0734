"""Pure numpy fallback for the stencil kernels in ``_kernels.pyx``.

Both modules expose the same two functions with identical semantics; see
:mod:`diraczero.discrete._backend` for the selection rule.
"""
import numpy as np


def apply_dirac(psi, weight, h, ky, mass, kv, periodic):
    """Apply H = -i sigma_1 D_x + Omega (-k_y sigma_2 + M sigma_3 + k_v) to node-major spinors.

    ``psi`` has shape (n, 2).  D_x is the central difference.  With
    ``periodic`` false the two boundary rows are left at zero (Dirichlet).
    """
    psi = np.ascontiguousarray(psi, dtype=complex)
    w = np.ascontiguousarray(weight, dtype=float)
    inv2h = 0.5 / h
    out = np.zeros_like(psi)
    if periodic:
        d = (np.roll(psi, -1, axis=0) - np.roll(psi, 1, axis=0)) * inv2h
        p, ww, o = psi, w, out
    else:
        d = (psi[2:] - psi[:-2]) * inv2h
        p, ww, o = psi[1:-1], w[1:-1], out[1:-1]
    p0, p1 = p[:, 0], p[:, 1]
    o[:, 0] = -1j * d[:, 1] + ww * ((mass + kv) * p0 + 1j * ky * p1)
    o[:, 1] = -1j * d[:, 0] + ww * (-1j * ky * p0 + (kv - mass) * p1)
    return out


def row_norms(v):
    v = np.asarray(v, dtype=complex)
    return np.sqrt(v[:, 0].real ** 2 + v[:, 0].imag ** 2 + v[:, 1].real ** 2 + v[:, 1].imag ** 2)
