"""Closed-form single-DOF results for the corner-cut linear element.

A linear element on [0, 1]^d with homogeneous Dirichlet data on all
coordinate hyperplanes keeps one basis function N(x) = x_1 ... x_d. Mass,
stiffness, eigenvalue and critical time step then have closed forms in
the cut parameter chi and the stabilization alpha, for any dimension:

    M = ((1 - a) chi^(3d) + a) / 3^d
    K = d ((1 - a) chi^(3d-2) + a) / 3^(d-1)
    lambda = K / M,    dt_crit = 2 / sqrt(lambda)

The asymptotic branch gives the cut position maximizing lambda as
alpha -> 0 and the resulting minimum critical step ~ alpha^(1/(3d)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SingleDofResult",
    "single_dof",
    "single_dof_fields",
    "unstabilized_lambda",
    "stationary_chi",
    "lambda_constant",
    "asymptotic_dt_min",
    "dlambda_dchi",
]


@dataclass(frozen=True)
class SingleDofResult:
    chi: float
    alpha: float
    d: int
    M: float
    K: float
    lam: float
    dt_crit: float


def single_dof_fields(chi, alpha, d: int):
    """Vectorized (M, K, lambda, dt_crit) of the single-DOF element."""
    chi = np.asarray(chi, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if np.any((chi < 0) | (chi > 1)) or np.any((alpha < 0) | (alpha > 1)):
        raise ValueError("chi and alpha must lie in [0, 1]")
    if np.any((chi == 0.0) & (alpha == 0.0)):
        raise ValueError("chi = alpha = 0 leaves an empty system (0/0 eigenvalue)")
    mass = ((1.0 - alpha) * chi ** (3 * d) + alpha) / 3.0**d
    stiff = d * ((1.0 - alpha) * chi ** (3 * d - 2) + alpha) / 3.0 ** (d - 1)
    lam = stiff / mass
    dt = 2.0 / np.sqrt(lam)
    return mass, stiff, lam, dt


def single_dof(chi: float, alpha: float, d: int) -> SingleDofResult:
    """Closed-form mass, stiffness, eigenvalue and dt of one cut element."""
    mass, stiff, lam, dt = single_dof_fields(float(chi), float(alpha), d)
    return SingleDofResult(float(chi), float(alpha), d, float(mass), float(stiff), float(lam), float(dt))


def unstabilized_lambda(chi, d: int):
    """Eigenvalue without stabilization: 3 d chi^-2, unbounded as chi -> 0."""
    chi = np.asarray(chi, dtype=float)
    if np.any(chi <= 0.0):
        raise ValueError("unstabilized eigenvalue requires chi > 0")
    out = 3.0 * d / chi**2
    return float(out) if out.ndim == 0 else out


def stationary_chi(alpha, d: int):
    """Cut position asymptotically maximizing the eigenvalue for small alpha."""
    alpha = np.asarray(alpha, dtype=float)
    out = (alpha * (3 * d - 2) / 2.0) ** (1.0 / (3 * d))
    return float(out) if out.ndim == 0 else out


def lambda_constant(d: int) -> float:
    """Leading constant of lambda_max ~ C(d) alpha^(-2/(3d))."""
    return 2.0 * ((3 * d - 2) / 2.0) ** (1.0 - 2.0 / (3 * d))


def asymptotic_dt_min(alpha, d: int):
    """Asymptotic minimum critical step 2 / sqrt(C(d)) alpha^(1/(3d))."""
    alpha = np.asarray(alpha, dtype=float)
    out = 2.0 / np.sqrt(lambda_constant(d)) * alpha ** (1.0 / (3 * d))
    return float(out) if out.ndim == 0 else out


def dlambda_dchi(chi, alpha, d: int):
    """Partial derivative of the eigenvalue with respect to the cut position.

    Closed form whose bracket vanishing defines the stationary cut:
    alpha (3 chi^2 d - 2 chi^(3d) - 3 d + 2) + 2 chi^(3d) = 0.
    """
    chi = np.asarray(chi, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    bracket = (
        3.0 * alpha * chi**2 * d
        - 2.0 * alpha * chi ** (3 * d)
        - 3.0 * alpha * d
        + 2.0 * alpha
        + 2.0 * chi ** (3 * d)
    )
    denom = (-alpha * chi ** (3 * d) + alpha + chi ** (3 * d)) ** 2
    out = 3.0 * chi ** (3 * d - 3) * d * (alpha - 1.0) * bracket / denom
    return float(out) if out.ndim == 0 else out
