"""Parameter-sweep drivers: analytic maps, element sweeps, plate study.

Three reproducible experiments:
  * analytic chi x alpha maps of the single-DOF closed forms,
  * single-element sweeps of the largest pencil eigenvalue over the cut
    parameter for varying polynomial degree and stabilization,
  * the perforated-plate study checking the modified CFL bound
    dt >= alpha^(1/(d+2)) dt_full against element-wise and global
    critical time steps.

Sweep points are independent; the plate driver optionally fans out over a
process pool while keeping output order fixed by the input grid.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from . import analytic
from .assembly import element_matrices_cornercut, full_element_matrices, iter_element_matrices
from .eigen import critical_dt, max_eig_dense, max_eig_iterative
from .geometry import MAX_SHIFT_X, MAX_SHIFT_Y, perforated_plate

__all__ = [
    "SweepRecord",
    "AnalyticMap",
    "CflEstimate",
    "PlateRecord",
    "analytic_map",
    "element_sweep",
    "min_dt_ratio",
    "cfl_bound",
    "modified_cfl_dt",
    "cfl_estimate",
    "full_element_dts",
    "uncut_lumped_lambda",
    "plate_study",
    "plate_shift_grid",
    "default_degrees",
]

PLATE_NX = 45
PLATE_NY = 15
PLATE_H = 0.2


@dataclass(frozen=True)
class SweepRecord:
    """One point of an element sweep."""

    d: int
    p: int
    alpha: float
    chi: float
    lambda_max: float
    dt_crit: float


@dataclass(frozen=True)
class AnalyticMap:
    """Columnar single-DOF map over a chi x alpha grid (chi varies slowest)."""

    d: int
    chi: np.ndarray  # (nc,)
    alpha: np.ndarray  # (na,)
    M: np.ndarray  # (nc, na)
    K: np.ndarray
    lam: np.ndarray
    dt_crit: np.ndarray

    @property
    def n_records(self) -> int:
        return self.chi.size * self.alpha.size

    def dt_min_per_alpha(self) -> np.ndarray:
        """Grid minimum of dt_crit over chi, one value per alpha."""
        return self.dt_crit.min(axis=0)


@dataclass(frozen=True)
class CflEstimate:
    """Full-element critical steps and the modified CFL level for one p."""

    d: int
    p: int
    alpha: float
    h: float
    c: float
    dt_full_c: float
    dt_full_l: float
    cfl_factor: float
    dt_cfl_fc: float
    c_cfl_consistent: float
    c_cfl_lumped: float


@dataclass(frozen=True)
class PlateRecord:
    """Result of one plate configuration."""

    config: int
    dx: float
    dy: float
    p: int
    k: int
    dt_element: float
    dt_global: float
    element_ok: bool
    global_ok: bool


def analytic_map(d: int, chi_grid, alpha_grid) -> AnalyticMap:
    """Single-DOF mass/stiffness/eigenvalue/dt over the full (chi, alpha) grid."""
    chi = np.asarray(chi_grid, dtype=float)
    alpha = np.asarray(alpha_grid, dtype=float)
    mass, stiff, lam, dt = analytic.single_dof_fields(chi[:, None], alpha[None, :], d)
    return AnalyticMap(d=d, chi=chi, alpha=alpha, M=mass, K=stiff, lam=lam, dt_crit=dt)


def default_degrees(d: int, full: bool = False) -> list[int]:
    """Default degree list: p = 1..10, capped at 6 for 3D unless forced."""
    return list(range(1, 11)) if (d <= 2 or full) else list(range(1, 7))


def element_sweep(
    d: int,
    degrees=None,
    alphas=(1e-4, 1e-8, 1e-12),
    chi_grid=None,
) -> list[SweepRecord]:
    """Largest eigenvalue of the exactly integrated corner-cut element.

    All Dirichlet conditions are omitted (free element); matrices are the
    consistent Gauss-Legendre-integrated pair for every combination of
    degree, stabilization and cut parameter.
    """
    if degrees is None:
        degrees = default_degrees(d)
    if chi_grid is None:
        chi_grid = np.logspace(-8, 0, 161)
    records = []
    for p in degrees:
        for alpha in alphas:
            for chi in np.asarray(chi_grid, dtype=float):
                em = element_matrices_cornercut(p, d, float(chi), float(alpha))
                lam = max_eig_dense(em.M, em.K).lambda_max
                records.append(
                    SweepRecord(d, p, float(alpha), float(chi), lam, critical_dt(lam))
                )
    return records


def min_dt_ratio(records: list[SweepRecord]) -> tuple[float, float]:
    """Grid-minimum dt and its ratio to the chi = 1 (full element) value.

    The records must share (d, p, alpha) and include the chi = 1 sample.
    """
    full = [r for r in records if r.chi == 1.0]
    if not full:
        raise ValueError("sweep records must include the chi = 1 sample")
    dt_full = full[0].dt_crit
    dt_min = min(r.dt_crit for r in records)
    return dt_min, dt_min / dt_full


def cfl_bound(alpha: float, d: int) -> float:
    """Worst-case reduction factor alpha^(1/(d+2)) of the critical step."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha ** (1.0 / (d + 2))


def modified_cfl_dt(alpha: float, d: int, c_cfl: float, h: float, c: float) -> float:
    """Modified CFL step limit alpha^(1/(d+2)) C_cfl h / c."""
    return cfl_bound(alpha, d) * c_cfl * h / c


def full_element_dts(p: int, d: int, h: float, c: float = 1.0) -> tuple[float, float]:
    """Critical steps of one uncut element: (consistent, lumped) mass."""
    m_lump, m_cons, k_full = full_element_matrices(p, d, h)
    lam_c = max_eig_dense(m_cons, c * c * k_full).lambda_max
    lam_l = max_eig_dense(np.diag(m_lump), c * c * k_full).lambda_max
    return critical_dt(lam_c), critical_dt(lam_l)


def uncut_lumped_lambda(p: int, d: int, h: float, c: float = 1.0) -> float:
    """Largest pencil eigenvalue of one uncut element with lumped mass."""
    m_lump, _, k_full = full_element_matrices(p, d, h)
    return max_eig_dense(np.diag(m_lump), c * c * k_full).lambda_max


def cfl_estimate(p: int, alpha: float, h: float, c: float = 1.0, d: int = 2) -> CflEstimate:
    """Full-element steps, CFL constants and the modified bound level."""
    dt_c, dt_l = full_element_dts(p, d, h, c)
    factor = cfl_bound(alpha, d)
    return CflEstimate(
        d=d,
        p=p,
        alpha=alpha,
        h=h,
        c=c,
        dt_full_c=dt_c,
        dt_full_l=dt_l,
        cfl_factor=factor,
        dt_cfl_fc=factor * dt_c,
        c_cfl_consistent=dt_c * c / h,
        c_cfl_lumped=dt_l * c / h,
    )


def plate_shift_grid(n_x: int, n_y: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift sampling: x inclusive over [0, 0.2], y periodic over [0, 9/13).

    The y grid excludes its upper endpoint because a full-period shift
    reproduces the unshifted hole pattern.
    """
    shifts_x = np.linspace(0.0, MAX_SHIFT_X, n_x)
    shifts_y = MAX_SHIFT_Y * np.arange(n_y) / n_y
    return shifts_x, shifts_y


def _plate_config(args) -> PlateRecord:
    """One plate configuration: per-element and global critical steps."""
    (index, dx, dy, p, k, alpha, nx, ny, h, c, lam_uncut, dt_cfl_fc, tol) = args
    domain = perforated_plate(dx, dy)
    lam_element = lam_uncut
    rows_m, cols_m, vals_m = [], [], []
    rows_k, cols_k, vals_k = [], [], []
    nloc = (p + 1) ** 2
    rep = np.repeat(np.arange(nloc), nloc)
    til = np.tile(np.arange(nloc), nloc)
    for gids, kind, mass, stiff in iter_element_matrices(nx, ny, h, p, domain, alpha, k):
        if kind == "cut":
            # eigenvalues-only dense solve; the residual bookkeeping of
            # max_eig_dense is not needed for the per-element minimum
            lam = float(sla.eigh(c * c * stiff, mass, eigvals_only=True, check_finite=False)[-1])
            lam_element = max(lam_element, lam)
            rows_m.append(gids[rep])
            cols_m.append(gids[til])
            vals_m.append(mass.ravel())
        else:
            # uncut and fictitious pencils both reduce to the lumped
            # full-element eigenvalue (alpha cancels)
            rows_m.append(gids)
            cols_m.append(gids)
            vals_m.append(mass)
        rows_k.append(gids[rep])
        cols_k.append(gids[til])
        vals_k.append(stiff.ravel())
    ndof = (nx * p + 1) * (ny * p + 1)
    mass = sp.coo_matrix(
        (np.concatenate(vals_m), (np.concatenate(rows_m), np.concatenate(cols_m))),
        shape=(ndof, ndof),
    ).tocsr()
    stiff = sp.coo_matrix(
        (np.concatenate(vals_k), (np.concatenate(rows_k), np.concatenate(cols_k))),
        shape=(ndof, ndof),
    ).tocsr()
    lam_global = max_eig_iterative(mass, c * c * stiff, tol=tol).lambda_max
    dt_element = critical_dt(lam_element)
    dt_global = critical_dt(lam_global)
    return PlateRecord(
        config=index,
        dx=float(dx),
        dy=float(dy),
        p=p,
        k=k,
        dt_element=dt_element,
        dt_global=dt_global,
        element_ok=bool(dt_element >= dt_cfl_fc),
        global_ok=bool(dt_global >= dt_cfl_fc),
    )


def plate_study(
    shifts_x,
    shifts_y,
    p: int,
    k: int,
    alpha: float = 1e-4,
    nx: int = PLATE_NX,
    ny: int = PLATE_NY,
    h: float = PLATE_H,
    c: float = 1.0,
    eig_tol: float = 1e-9,
    jobs: int = 1,
    subsample: int = 1,
) -> tuple[list[PlateRecord], CflEstimate]:
    """Critical-step study over all hole-shift configurations.

    Per configuration every element pencil is solved individually (cut
    elements with their quadtree matrices, uncut ones with the lumped
    full-element pencil) and the assembled global pencil once; both steps
    are flagged against the modified CFL level dt_cfl_fc. Configurations
    are enumerated x-major (y fastest), 1-based.
    """
    estimate = cfl_estimate(p, alpha, h, c, d=2)
    lam_uncut = uncut_lumped_lambda(p, 2, h, c)
    tasks = []
    index = 0
    for dx in np.asarray(shifts_x, dtype=float):
        for dy in np.asarray(shifts_y, dtype=float):
            index += 1
            if (index - 1) % subsample:
                continue
            tasks.append(
                (index, dx, dy, p, k, alpha, nx, ny, h, c, lam_uncut, estimate.dt_cfl_fc, eig_tol)
            )
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_plate_config, tasks, chunksize=1))
    else:
        records = [_plate_config(t) for t in tasks]
    return records, estimate
