"""Frame fields, connections and gamma matrices for ds^2 = Omega^2 (dt^2 - dx^2) - dy^2.

Coordinates are ordered (t, x, y) -> indices 0, 1, 2.  Rank-3 arrays use the
layout ``[upper, lower1, lower2]``:

* ``christoffels[nu, sigma, mu]``   = Gamma^nu_{sigma mu}
* ``spin_connection[a, b, mu]``     = omega^a_{b mu}

Matrices ``vielbein[a, mu]`` = e^a_mu and ``inverse_vielbein[a, mu]`` = E_a^mu.
Clifford convention: {gamma^mu, gamma^nu} = 2 g^{mu nu}.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .conformal import ConformalFactor, evaluate_checked
from .errors import DomainError

__all__ = [
    "ETA",
    "PAULI",
    "GAMMA_FLAT",
    "GeometryBundle",
    "build_geometry",
    "metric_at",
    "christoffel_oracle",
    "spin_connection_oracle",
    "spinor_connection_from_spin",
    "verify_clifford",
    "vielbein_violation",
    "default_step",
]

ETA = np.diag([1.0, -1.0, -1.0])

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_1, SIGMA_2, SIGMA_3)
IDENTITY_2 = np.eye(2, dtype=complex)

# flat-space gammas: (sigma_3, i sigma_2, i sigma_1)
GAMMA_FLAT = np.stack([SIGMA_3, 1j * SIGMA_2, 1j * SIGMA_1])


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _anti(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


@dataclass(frozen=True)
class GeometryBundle:
    x: float
    metric: np.ndarray
    vielbein: np.ndarray
    inverse_vielbein: np.ndarray
    christoffels: np.ndarray
    spin_connection: np.ndarray
    gamma_flat: np.ndarray
    gamma_curved: np.ndarray
    spinor_connection: np.ndarray

    @property
    def inverse_metric(self) -> np.ndarray:
        return np.linalg.inv(self.metric)

    def christoffel(self, upper: int, lower1: int, lower2: int) -> float:
        return float(self.christoffels[upper, lower1, lower2])

    def spin(self, upper: int, lower: int, mu: int) -> float:
        """omega^upper_{lower mu}."""
        return float(self.spin_connection[upper, lower, mu])

    def spin_lowered(self) -> np.ndarray:
        """omega_{a b mu} = eta_{a c} omega^c_{b mu}."""
        return np.einsum("ac,cbm->abm", ETA, self.spin_connection)


def metric_at(omega: ConformalFactor, x: float) -> np.ndarray:
    om = float(omega.value(x))
    if not np.isfinite(om) or om == 0.0:
        raise DomainError(f"Omega({x}) = {om}: metric is degenerate")
    return np.diag([om * om, -om * om, -1.0])


def build_geometry(omega: ConformalFactor, x: float) -> GeometryBundle:
    """All geometric data at ``x`` from the closed forms for this metric."""
    om, dom = evaluate_checked(omega, x)
    om, dom = float(om), float(dom)
    r = dom / om

    metric = np.diag([om * om, -om * om, -1.0])
    vielbein = np.diag([om, om, 1.0])
    inverse_vielbein = np.diag([1.0 / om, 1.0 / om, 1.0])

    chris = np.zeros((3, 3, 3))
    chris[0, 0, 1] = chris[0, 1, 0] = chris[1, 0, 0] = chris[1, 1, 1] = r

    spin = np.zeros((3, 3, 3))
    spin[0, 1, 0] = spin[1, 0, 0] = r

    gamma_curved = np.einsum("a,aij->aij", np.diag(inverse_vielbein), GAMMA_FLAT)
    spinor_connection = np.zeros((3, 2, 2), dtype=complex)
    spinor_connection[0] = r / 4 * _comm(GAMMA_FLAT[0], GAMMA_FLAT[1])

    return GeometryBundle(
        x=float(x),
        metric=metric,
        vielbein=vielbein,
        inverse_vielbein=inverse_vielbein,
        christoffels=chris,
        spin_connection=spin,
        gamma_flat=GAMMA_FLAT.copy(),
        gamma_curved=gamma_curved,
        spinor_connection=spinor_connection,
    )


def default_step(x: float) -> float:
    # truncation grows like (Omega'/Omega)^3, not with |x|; a fixed step keeps cosh^3 at |x| ~ 10 below 1e-8
    return 1e-5


def _metric_derivative(omega: ConformalFactor, x: float, h: float) -> np.ndarray:
    """dg[k, r, m] = d_k g_{rm}; only the x-derivative (k = 1) is nonzero."""
    if not h > 0:
        raise ValueError(f"step h must be positive, got {h}")
    dg = np.zeros((3, 3, 3))
    dg[1] = (metric_at(omega, x + h) - metric_at(omega, x - h)) / (2 * h)
    return dg


def christoffel_oracle(omega: ConformalFactor, x: float, h: Optional[float] = None) -> np.ndarray:
    """Gamma^nu_{sigma mu} from the Levi-Civita formula with central-difference metric derivatives.

    Uses only Omega values (never Omega'), so it is independent of the
    closed forms in :func:`build_geometry`.  Error is O(h**2).
    """
    h = default_step(x) if h is None else h
    dg = _metric_derivative(omega, x, h)
    ginv = np.linalg.inv(metric_at(omega, x))
    # d_s g_{r m} + d_m g_{r s} - d_r g_{s m}, indexed [r, s, m]
    bracket = np.einsum("srm->rsm", dg) + np.einsum("mrs->rsm", dg) - dg
    return 0.5 * np.einsum("nr,rsm->nsm", ginv, bracket)


def _frames(omega: ConformalFactor, x: float):
    om = float(omega.value(x))
    if not np.isfinite(om) or om == 0.0:
        raise DomainError(f"Omega({x}) = {om}: frame fields undefined")
    return np.diag([om, om, 1.0]), np.diag([1.0 / om, 1.0 / om, 1.0])


def spin_connection_oracle(omega: ConformalFactor, x: float, h: Optional[float] = None) -> np.ndarray:
    """omega^a_{b mu} = e^a_nu (d_mu E_b^nu + Gamma^nu_{sigma mu} E_b^sigma), all derivatives numerical."""
    h = default_step(x) if h is None else h
    e, E = _frames(omega, x)
    dE = np.zeros((3, 3, 3))  # dE[mu, b, nu] = d_mu E_b^nu
    dE[1] = (_frames(omega, x + h)[1] - _frames(omega, x - h)[1]) / (2 * h)
    chris = christoffel_oracle(omega, x, h)
    cov = np.einsum("mbn->bnm", dE) + np.einsum("nsm,bs->bnm", chris, E)  # [b, nu, mu]
    return np.einsum("an,bnm->abm", e, cov)


def spinor_connection_from_spin(spin_connection: np.ndarray) -> np.ndarray:
    """Gamma_mu = (1/8) omega_{a b mu} [gamma^a, gamma^b] for each mu."""
    lowered = np.einsum("ac,cbm->abm", ETA, spin_connection)
    out = np.zeros((3, 2, 2), dtype=complex)
    for mu in range(3):
        for a in range(3):
            for b in range(3):
                if lowered[a, b, mu] != 0.0:
                    out[mu] += lowered[a, b, mu] * _comm(GAMMA_FLAT[a], GAMMA_FLAT[b])
    return out / 8


def verify_clifford(bundle: GeometryBundle) -> float:
    """max |{gamma^mu, gamma^nu} - 2 g^{mu nu} I| over index pairs and matrix entries."""
    ginv = bundle.inverse_metric
    worst = 0.0
    for mu in range(3):
        for nu in range(3):
            diff = _anti(bundle.gamma_curved[mu], bundle.gamma_curved[nu]) - 2 * ginv[mu, nu] * IDENTITY_2
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def flat_clifford_violation() -> float:
    worst = 0.0
    for a in range(3):
        for b in range(3):
            diff = _anti(GAMMA_FLAT[a], GAMMA_FLAT[b]) - 2 * ETA[a, b] * IDENTITY_2
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def vielbein_violation(bundle: GeometryBundle) -> float:
    """Relative violation of e^a_mu e^b_nu eta_ab = g_{mu nu} and E_a^mu E_b^nu g_{mu nu} = eta_ab."""
    g = bundle.metric
    rebuilt = bundle.vielbein.T @ ETA @ bundle.vielbein
    back = bundle.inverse_vielbein @ g @ bundle.inverse_vielbein.T
    scale = np.maximum(1.0, np.abs(g))
    return float(max(np.max(np.abs(rebuilt - g) / scale), np.max(np.abs(back - ETA))))
