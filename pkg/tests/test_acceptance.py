"""Acceptance suite: one test per headline criterion, printed pass lines.

Run with `pytest tests/test_acceptance.py -v -s`. The plate criterion is
the long one (several minutes; it fans out over the available cores).
"""

import os

import numpy as np
import pytest

from cutstep.analytic import asymptotic_dt_min, single_dof_fields
from cutstep.assembly import (
    apply_dirichlet,
    element_matrices_cornercut,
    single_dof_dirichlet_set,
)
from cutstep.basis import NodalBasis1D, TensorBasis
from cutstep.eigen import max_eig_dense, max_eig_iterative
from cutstep.quadrature import gauss_legendre_1d, gll_rule_1d
from cutstep.studies import (
    cfl_bound,
    cfl_estimate,
    element_sweep,
    full_element_dts,
    min_dt_ratio,
    plate_shift_grid,
    plate_study,
)

JOBS = max(1, min(2, os.cpu_count() or 1))


def _report(index: int, text: str) -> None:
    print(f"\nACCEPTANCE {index} PASS: {text}")


def test_criterion_1_analytic_numeric_equivalence():
    """Corner-cut element with hyperplane Dirichlet reduces to the closed forms."""
    chi_grid = np.logspace(-16, 0, 17)
    alpha_grid = np.logspace(-16, 0, 17)
    worst = 0.0
    for d in (1, 2, 3):
        constrained = single_dof_dirichlet_set(1, d)
        for chi in chi_grid:
            for alpha in alpha_grid:
                em = element_matrices_cornercut(1, d, float(chi), float(alpha))
                red = apply_dirichlet(em, constrained)
                mass, stiff, lam, _ = single_dof_fields(float(chi), float(alpha), d)
                worst = max(
                    worst,
                    abs(red.M[0, 0] - mass) / mass,
                    abs(red.K[0, 0] - stiff) / stiff,
                    abs(red.K[0, 0] / red.M[0, 0] - lam) / lam,
                )
    assert worst < 1e-12
    _report(1, f"single-DOF closed forms reproduced, worst relative error {worst:.2e}")


def test_criterion_2_empty_equals_full_element():
    """dt(chi=0) = dt(chi=1) = 2/sqrt(3d) for all alpha and d."""
    worst = 0.0
    for d in range(1, 6):
        for alpha in np.logspace(-12, -2, 11):
            dt0 = single_dof_fields(0.0, float(alpha), d)[3]
            dt1 = single_dof_fields(1.0, float(alpha), d)[3]
            ref = 2.0 / np.sqrt(3.0 * d)
            worst = max(worst, abs(dt0 - dt1), abs(dt0 - ref), abs(dt1 - ref))
    assert worst < 1e-13
    _report(2, f"empty and full element share dt = 2/sqrt(3d), worst deviation {worst:.2e}")


def test_criterion_3_minimum_dt_scaling():
    """Minimum dt scales as alpha^(1/(3d)) and matches the asymptote at 1e-12."""
    chi = np.logspace(-16, 0, 801)
    alphas = np.logspace(-14, -6, 9)
    slopes = []
    asym_errors = []
    for d in range(1, 6):
        mins = [single_dof_fields(chi, float(a), d)[3].min() for a in alphas]
        slope = np.polyfit(np.log(alphas), np.log(mins), 1)[0]
        target = 1.0 / (3 * d)
        assert abs(slope - target) <= 0.03 * target
        slopes.append(slope)
        dt_min = single_dof_fields(chi, 1e-12, d)[3].min()
        err = abs(dt_min - asymptotic_dt_min(1e-12, d)) / asymptotic_dt_min(1e-12, d)
        assert err <= 0.02
        asym_errors.append(err)
    _report(
        3,
        "min-dt slopes "
        + ", ".join(f"d={d}: {s:.5f}" for d, s in zip(range(1, 6), slopes))
        + f"; worst asymptote error {max(asym_errors):.2%}",
    )


def test_criterion_4_bound_zero_violations():
    """dt(chi, alpha) >= alpha^(1/(d+2)) dt_full_c across the whole sweep."""
    chi = np.logspace(-8, 0, 161)
    alphas = (1e-4, 1e-8, 1e-12)
    checked = 0
    for d, degrees in ((1, range(1, 11)), (2, range(1, 11)), (3, range(1, 7))):
        for p in degrees:
            for alpha in alphas:
                records = element_sweep(d, degrees=[p], alphas=[alpha], chi_grid=chi)
                dt_full = [r.dt_crit for r in records if r.chi == 1.0][0]
                bound = cfl_bound(alpha, d) * dt_full
                violations = [r for r in records if r.dt_crit < bound]
                assert not violations, f"bound violated at d={d} p={p} alpha={alpha}"
                checked += len(records)
    _report(4, f"modified-CFL lower bound held at all {checked} sweep points")


def test_criterion_5_exact_tenth_factor():
    """alpha = 1e-4 in 2D gives the factor 0.1 exactly."""
    factor = cfl_bound(1e-4, 2)
    assert abs(factor - 0.1) < 1e-15
    est = cfl_estimate(2, 1e-4, 0.2)
    assert est.dt_cfl_fc == pytest.approx(0.1 * est.dt_full_c, rel=1e-14)
    _report(5, f"cfl factor = {factor!r}, dt_cfl_fc = 0.1 dt_full_c")


@pytest.mark.slow
def test_criterion_6_plate_bound_and_depth_effect():
    """Scaled-down plate study: k = p+1 underintegration only bites at p = 2.

    The 5 x 10 shift subgrid strides the full 15 x 50 study grid
    (every 3rd x shift, every 5th y shift).
    """
    full_x, full_y = plate_shift_grid(15, 50)
    shifts_x, shifts_y = full_x[::3], full_y[::5]
    summary = []
    for p, depths in ((2, (3, 4)), (3, (4, 5)), (4, (5, 6)), (5, (6, 7))):
        for k in depths:
            records, est = plate_study(shifts_x, shifts_y, p=p, k=k, jobs=JOBS)
            assert len(records) == 50
            violations = sum(not r.element_ok for r in records)
            for r in records:
                assert r.dt_global >= r.dt_element - 1e-10
            if (p, k) == (2, 3):
                assert violations >= 1, "expected at least one element-level violation"
            else:
                assert violations == 0, f"unexpected violations at p={p} k={k}: {violations}"
            summary.append(f"p={p} k={k}: {violations}")
    _report(6, "element-level violations per run: " + "; ".join(summary))


def test_criterion_7_lumped_versus_consistent():
    """Nodal lumping never shrinks the critical step of the full element."""
    for d in (1, 2):
        for p in range(1, 11):
            dt_c, dt_l = full_element_dts(p, d, h=1.0)
            assert dt_l >= dt_c
    _report(7, "dt_full_lumped >= dt_full_consistent for p = 1..10, d = 1, 2")


def test_criterion_8_property_battery():
    """Compact re-run of the per-module property suites."""
    # quadrature exactness to degree 2n-1
    for n in range(1, 9):
        rule = gauss_legendre_1d(n)
        x, w = rule.points[:, 0], rule.weights
        for kdeg in range(2 * n):
            exact = 0.0 if kdeg % 2 else 2.0 / (kdeg + 1)
            assert abs(w @ x**kdeg - exact) < 1e-12
        gll = gll_rule_1d(max(n, 1))
        assert abs(gll.weights.sum() - 2.0) < 1e-12

    # basis Kronecker delta and partition of unity
    rng = np.random.default_rng(0)
    for p in (1, 4, 10):
        basis = NodalBasis1D(p)
        values, _ = basis.eval(basis.nodes)
        assert np.max(np.abs(values - np.eye(p + 1))) < 1e-12
        xi = rng.uniform(-1, 1, 100)
        vals, ders = basis.eval(xi)
        assert np.max(np.abs(vals.sum(axis=1) - 1)) < 1e-11
        assert np.max(np.abs(ders.sum(axis=1))) < 1e-11

    # matrix symmetry and definiteness
    for d, p in ((1, 4), (2, 3), (3, 2)):
        for chi in (1e-12, 0.3, 1.0):
            em = element_matrices_cornercut(p, d, chi, 1e-8)
            assert np.max(np.abs(em.M - em.M.T)) <= 1e-12 * np.abs(em.M).max()
            assert np.linalg.eigvalsh(em.M).min() > 0

    # tensor gradients against central differences
    tb = TensorBasis(2, NodalBasis1D(3))
    pts = rng.uniform(-0.9, 0.9, (20, 2))
    _, grads = tb.eval_batch(pts)
    step = 1e-6
    for axis in range(2):
        shift = np.zeros(2)
        shift[axis] = step
        vp, _ = tb.eval_batch(pts + shift)
        vm, _ = tb.eval_batch(pts - shift)
        fd = (vp - vm) / (2 * step)
        scale = np.maximum(np.abs(grads[:, :, axis]), 1.0)
        assert np.max(np.abs(fd - grads[:, :, axis]) / scale) < 1e-6

    # dense and iterative eigensolvers agree
    for _ in range(5):
        n = int(rng.integers(10, 120))
        A = rng.standard_normal((n, n))
        M = A @ A.T + n * np.eye(n)
        B = rng.standard_normal((n, n))
        K = B @ B.T
        assert max_eig_iterative(M, K).lambda_max == pytest.approx(
            max_eig_dense(M, K).lambda_max, rel=1e-7
        )
    _report(8, "quadrature, basis, matrix, gradient and eigen property suites green")
