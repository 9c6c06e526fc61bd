"""Closed-form landscape of the one-DOF cut element.

Walks the chi-alpha plane of the corner-cut linear element: mass,
stiffness and eigenvalue maps, the stabilization floor lambda -> 3d as
chi -> 0, and the alpha^(1/(3d)) scaling of the minimum critical step.
"""

import numpy as np

from cutstep import analytic_map, asymptotic_dt_min, single_dof, stationary_chi

# A full element and an empty element share the same critical step: the
# alpha-scaled fictitious material has the same wave speed, so only the
# mass/stiffness *ratio* matters.
for d in (1, 2, 3):
    full = single_dof(1.0, 1e-8, d)
    empty = single_dof(0.0, 1e-8, d)
    print(f"d={d}: dt(full) = {full.dt_crit:.6f}, dt(empty) = {empty.dt_crit:.6f},"
          f" 2/sqrt(3d) = {2/np.sqrt(3*d):.6f}")

# Between those ends the step dips: scan the cut parameter at fixed alpha.
print("\nminimum critical step over the cut parameter (d = 2):")
chi = np.logspace(-16, 0, 801)
for alpha in (1e-4, 1e-8, 1e-12):
    amap = analytic_map(2, chi, np.array([alpha]))
    dt_min = amap.dt_crit.min()
    star = stationary_chi(alpha, 2)
    print(f"  alpha={alpha:8.0e}: dt_min = {dt_min:.6e} at chi ~ {star:.4e},"
          f" asymptote {asymptotic_dt_min(alpha, 2):.6e}")

# The dip deepens like alpha^(1/(3d)): a log-log fit over six decades.
print("\nfitted scaling exponents of dt_min vs alpha:")
alphas = np.logspace(-14, -6, 9)
for d in (1, 2, 3, 4, 5):
    mins = [analytic_map(d, chi, np.array([a])).dt_crit.min() for a in alphas]
    slope = np.polyfit(np.log(alphas), np.log(mins), 1)[0]
    print(f"  d={d}: slope {slope:.5f}  (1/(3d) = {1/(3*d):.5f})")
