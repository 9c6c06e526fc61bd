"""Implicit domain descriptions for immersed discretizations.

A domain only needs to answer "is this point physical or fictitious";
the indicator then scales integrands by 1 inside and by the stabilization
parameter alpha outside. Points exactly on a boundary count as inside, so
classification is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ImplicitDomain",
    "CornerCutDomain",
    "PerforatedPlate",
    "fcm_scale",
    "perforated_plate",
    "volume_fraction",
]

PLATE_WIDTH = 9.0
PLATE_HEIGHT = 3.0
HOLE_RADIUS = 3.0 / 13.0
HOLE_SPACING = 9.0 / 13.0  # 3 * radius, both horizontally and vertically
MAX_SHIFT_X = 0.2
MAX_SHIFT_Y = HOLE_SPACING

_RECT_EPS = 1e-9


class ImplicitDomain:
    """Inside/outside classifier over a d-dimensional extended domain."""

    dimension: int

    def inside(self, points) -> np.ndarray:
        """Boolean membership for one point (d,) or a batch (n, d)."""
        raise NotImplementedError

    def crosses_boundary(self, lo, hi):
        """Whether the boundary intersects the box [lo, hi], if decidable.

        Accepts single boxes (d,) or batches (m, d). None means unknown;
        the quadrature then falls back to probing box corners and centers.
        Exact predicates avoid missing boundary pieces that dip through a
        face between probe points.
        """
        return None


@dataclass(frozen=True)
class CornerCutDomain(ImplicitDomain):
    """Physical hypercube [0, chi]^d inside the unit extended element."""

    chi: float
    dimension: int

    def __post_init__(self):
        if not 0.0 <= self.chi <= 1.0:
            raise ValueError(f"cut parameter must lie in [0, 1], got {self.chi}")

    def inside(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        scalar = pts.ndim == 1
        pts = np.atleast_2d(pts)
        result = (pts <= self.chi).all(axis=1)
        return bool(result[0]) if scalar else result

    def crosses_boundary(self, lo, hi):
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        scalar = lo.ndim == 1
        lo, hi = np.atleast_2d(lo), np.atleast_2d(hi)
        entirely_inside = (hi <= self.chi).all(axis=1)
        entirely_outside = (lo > self.chi).any(axis=1)
        result = ~(entirely_inside | entirely_outside)
        return bool(result[0]) if scalar else result


def volume_fraction(domain: CornerCutDomain) -> float:
    """Physical volume fraction chi^d of the corner-cut element."""
    return domain.chi**domain.dimension


@dataclass(frozen=True)
class PerforatedPlate(ImplicitDomain):
    """9 x 3 plate with three columns of circular holes, radius 3/13.

    Hole columns sit at 4.5 and 4.5 +- 9/13 (plus the x-shift); rows are
    spaced 9/13 apart. Layout assumption: at zero shift the middle row of
    holes is centered at plate mid-height y = 1.5, rows extending
    symmetrically, columns vertically aligned. Row generation covers one
    extra spacing period above and below the plate so circles crossing the
    top edge and entering from below are both represented; shifting dy by
    a full period therefore reproduces the unshifted hole set.
    """

    shift_x: float = 0.0
    shift_y: float = 0.0
    dimension: int = field(default=2, init=False)
    hole_centers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.shift_x <= MAX_SHIFT_X:
            raise ValueError(f"shift_x must lie in [0, {MAX_SHIFT_X}], got {self.shift_x}")
        if not 0.0 <= self.shift_y <= MAX_SHIFT_Y:
            raise ValueError(f"shift_y must lie in [0, {MAX_SHIFT_Y}], got {self.shift_y}")
        cols = np.array([
            PLATE_WIDTH / 2.0 - HOLE_SPACING,
            PLATE_WIDTH / 2.0,
            PLATE_WIDTH / 2.0 + HOLE_SPACING,
        ]) + self.shift_x
        y0 = PLATE_HEIGHT / 2.0
        lo = -HOLE_RADIUS - HOLE_SPACING
        hi = PLATE_HEIGHT + HOLE_RADIUS + HOLE_SPACING
        jmin = int(np.floor((lo - y0 - self.shift_y) / HOLE_SPACING))
        jmax = int(np.ceil((hi - y0 - self.shift_y) / HOLE_SPACING))
        rows = y0 + self.shift_y + HOLE_SPACING * np.arange(jmin, jmax + 1)
        rows = rows[(rows > lo) & (rows < hi)]
        cx, cy = np.meshgrid(cols, rows)
        centers = np.stack([cx.ravel(), cy.ravel()], axis=1)
        object.__setattr__(self, "hole_centers", centers)

    def inside(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        scalar = pts.ndim == 1
        pts = np.atleast_2d(pts)
        in_rect = (
            (pts[:, 0] >= -_RECT_EPS)
            & (pts[:, 0] <= PLATE_WIDTH + _RECT_EPS)
            & (pts[:, 1] >= -_RECT_EPS)
            & (pts[:, 1] <= PLATE_HEIGHT + _RECT_EPS)
        )
        # only holes whose circle can reach the query bounding box matter
        centers = self.hole_centers
        lo = pts.min(axis=0) - HOLE_RADIUS
        hi = pts.max(axis=0) + HOLE_RADIUS
        near = ((centers >= lo) & (centers <= hi)).all(axis=1)
        if not near.any():
            result = in_rect
        else:
            centers = centers[near]
            dx = pts[:, 0, None] - centers[None, :, 0]
            dy = pts[:, 1, None] - centers[None, :, 1]
            in_hole = ((dx * dx + dy * dy) < HOLE_RADIUS**2).any(axis=1)
            result = in_rect & ~in_hole
        return bool(result[0]) if scalar else result

    def crosses_boundary(self, lo, hi):
        """Exact box-versus-circle test against every hole.

        A circle's boundary meets the box iff the nearest box point is
        strictly within the radius and the farthest corner strictly
        beyond it. The plate edges coincide with the grid, so they never
        cross a cell interior.
        """
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        scalar = lo.ndim == 1
        lo, hi = np.atleast_2d(lo), np.atleast_2d(hi)  # (m, 2)
        centers = self.hole_centers  # (n, 2)
        nearest = np.clip(centers[None, :, :], lo[:, None, :], hi[:, None, :])
        d2_min = ((centers[None, :, :] - nearest) ** 2).sum(axis=2)
        mid = 0.5 * (lo + hi)
        farthest = np.where(centers[None, :, :] < mid[:, None, :], hi[:, None, :], lo[:, None, :])
        d2_max = ((centers[None, :, :] - farthest) ** 2).sum(axis=2)
        r2 = HOLE_RADIUS**2
        result = ((d2_min < r2) & (d2_max > r2)).any(axis=1)
        return bool(result[0]) if scalar else result


def perforated_plate(shift_x: float, shift_y: float) -> PerforatedPlate:
    """Plate domain with the hole pattern shifted by (shift_x, shift_y)."""
    return PerforatedPlate(shift_x, shift_y)


def fcm_scale(domain: ImplicitDomain, x, alpha: float):
    """Indicator-based integrand scale: 1 inside the domain, alpha outside."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    flags = domain.inside(x)
    if np.isscalar(flags) or isinstance(flags, bool):
        return 1.0 if flags else alpha
    return np.where(flags, 1.0, alpha)
