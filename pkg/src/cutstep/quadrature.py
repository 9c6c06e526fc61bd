"""Quadrature on reference hypercubes, including adaptive cut-cell rules.

Plain Gauss-Legendre and GLL rules live on [-1, 1]^d. Cut elements get a
quadtree/octree rule: sub-cells intersected by the domain boundary are
split recursively up to a fixed depth, every leaf carries a tensor GL
rule, and each point remembers whether it fell inside the physical
domain so the stabilization factor can be applied per point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .basis import gll_nodes, legendre_value_and_derivative
from .geometry import ImplicitDomain

__all__ = [
    "QuadratureRule",
    "CutCellRule",
    "gauss_legendre_1d",
    "gll_rule_1d",
    "tensorize",
    "cut_cell_rule",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Points and weights on [-1, 1]^dimension.

    ``exactness`` is the maximal polynomial degree per direction that the
    rule integrates exactly.
    """

    dimension: int
    points: np.ndarray  # (n, dimension)
    weights: np.ndarray  # (n,)
    exactness: int


@lru_cache(maxsize=64)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_1d(n: int) -> QuadratureRule:
    """Standard n-point Gauss-Legendre rule on [-1, 1], exact to degree 2n-1."""
    if n < 1:
        raise ValueError(f"Gauss-Legendre rule needs n >= 1 points, got {n}")
    x, w = _leggauss(n)
    return QuadratureRule(1, x.reshape(-1, 1), w.copy(), 2 * n - 1)


def gll_rule_1d(p: int) -> QuadratureRule:
    """Gauss-Lobatto-Legendre rule with p+1 points, exact to degree 2p-1.

    Weights are w_j = 2 / (p (p+1) P_p(xi_j)^2); using these points both to
    interpolate and to integrate is what diagonalizes the mass matrix.
    """
    if p < 1:
        raise ValueError(f"GLL rule needs degree p >= 1, got {p}")
    nodes = gll_nodes(p)
    pp, _ = legendre_value_and_derivative(p, nodes)
    weights = 2.0 / (p * (p + 1) * pp**2)
    return QuadratureRule(1, nodes.reshape(-1, 1), weights, 2 * p - 1)


def tensorize(rule1d: QuadratureRule, d: int) -> QuadratureRule:
    """Tensor-product rule on [-1, 1]^d, first coordinate fastest."""
    if rule1d.dimension != 1:
        raise ValueError("tensorize expects a one-dimensional rule")
    if d not in (1, 2, 3):
        raise ValueError(f"tensorize supports d in {{1,2,3}}, got {d}")
    x = rule1d.points[:, 0]
    w = rule1d.weights
    mesh = np.meshgrid(*([x] * d), indexing="ij")
    # coordinate 1 must vary fastest in C-order flattening -> reverse axes
    points = np.stack([m.ravel() for m in mesh[::-1]], axis=1)
    weights = reduce(np.multiply.outer, [w] * d).ravel()
    return QuadratureRule(d, points, weights, rule1d.exactness)


@dataclass(frozen=True)
class CutCellRule:
    """Quadtree/octree quadrature of one (possibly cut) element.

    Leaves tile the reference cube [-1, 1]^d, each refined at most ``depth``
    times. Points and weights are in reference coordinates (weights sum to
    2^d); ``inside`` records the pointwise domain membership, so the
    stabilization scale of a point is 1 if inside else alpha.
    """

    dimension: int
    depth: int
    n1d: int
    lo: np.ndarray  # physical element bounds
    hi: np.ndarray
    leaf_bounds: np.ndarray  # (n_leaves, 2, d), reference coordinates
    points: np.ndarray  # (n_points, d), reference coordinates
    weights: np.ndarray  # (n_points,)
    inside: np.ndarray  # (n_points,) bool

    @property
    def n_leaves(self) -> int:
        return len(self.leaf_bounds)

    @property
    def jacobian(self) -> float:
        """Volume ratio of the physical element to the reference cube."""
        return float(np.prod((self.hi - self.lo) / 2.0))

    @property
    def classification(self) -> str:
        """'interior' / 'fictitious' for untouched elements, else 'cut'."""
        if self.n_leaves == 1:
            if self.inside.all():
                return "interior"
            if not self.inside.any():
                return "fictitious"
        return "cut"

    def scales(self, alpha: float) -> np.ndarray:
        """Pointwise stabilization factors: 1 inside the domain, alpha outside."""
        return np.where(self.inside, 1.0, alpha)

    def physical_points(self) -> np.ndarray:
        return self.lo + (self.points + 1.0) * 0.5 * (self.hi - self.lo)

    def integrate(self, alpha: float, f=None) -> float:
        """Physical integral of the scaled integrand over the element."""
        w = self.weights * self.scales(alpha)
        if f is None:
            return float(w.sum() * self.jacobian)
        return float(w @ np.asarray(f(self.physical_points())) * self.jacobian)


def _corner_offsets(d: int) -> np.ndarray:
    """Unit-cube corner pattern, shape (2^d, d) of zeros and ones."""
    corners = np.indices((2,) * d).reshape(d, -1).T
    return corners.astype(float)


def cut_cell_rule(
    element_lo,
    element_hi,
    domain: ImplicitDomain,
    k: int,
    n1d: int,
) -> CutCellRule:
    """Adaptive quadtree/octree rule for the element [element_lo, element_hi].

    A sub-cell is split into 2^d children while the domain boundary
    intersects it, until refinement level k. Domains with an exact
    ``crosses_boundary`` predicate use it; otherwise the corners and the
    center of the cell are probed (which can miss boundary pieces dipping
    through a face, so exact predicates are preferred when the geometry
    allows one). Every leaf carries an n1d-per-direction tensor
    Gauss-Legendre rule whose points are classified pointwise.
    """
    if k < 0:
        raise ValueError(f"quadtree depth must be >= 0, got {k}")
    lo = np.asarray(element_lo, dtype=float)
    hi = np.asarray(element_hi, dtype=float)
    d = lo.size
    if d != domain.dimension:
        raise ValueError(f"element dimension {d} != domain dimension {domain.dimension}")

    corners = _corner_offsets(d)  # (2^d, d) in [0, 1]

    def to_physical(ref_pts: np.ndarray) -> np.ndarray:
        return lo + (ref_pts + 1.0) * 0.5 * (hi - lo)

    crosses = getattr(domain, "crosses_boundary", None)

    def boundary_cells(cells_lo: np.ndarray, cells_hi: np.ndarray) -> np.ndarray:
        """Cells the domain boundary intersects (exact test if available)."""
        crossed = crosses(to_physical(cells_lo), to_physical(cells_hi)) if crosses else None
        if crossed is not None:
            return np.atleast_1d(crossed)
        probe = cells_lo[:, None, :] + corners[None, :, :] * (cells_hi - cells_lo)[:, None, :]
        center = 0.5 * (cells_lo + cells_hi)
        probe = np.concatenate([probe, center[:, None, :]], axis=1)
        flags = domain.inside(to_physical(probe.reshape(-1, d))).reshape(len(cells_lo), -1)
        return flags.any(axis=1) & ~flags.all(axis=1)

    # breadth-first refinement, vectorized per level
    cells_lo = -np.ones((1, d))
    cells_hi = np.ones((1, d))
    leaf_lo, leaf_hi = [], []
    for level in range(k + 1):
        if len(cells_lo) == 0:
            break
        if level == k:
            leaf_lo.append(cells_lo)
            leaf_hi.append(cells_hi)
            break
        mixed = boundary_cells(cells_lo, cells_hi)
        if not mixed.any():
            leaf_lo.append(cells_lo)
            leaf_hi.append(cells_hi)
            break
        leaf_lo.append(cells_lo[~mixed])
        leaf_hi.append(cells_hi[~mixed])
        split_lo = cells_lo[mixed]
        split_hi = cells_hi[mixed]
        half = 0.5 * (split_hi - split_lo)
        child_lo = split_lo[:, None, :] + corners[None, :, :] * half[:, None, :]
        cells_lo = child_lo.reshape(-1, d)
        cells_hi = cells_lo + np.repeat(half, 1 << d, axis=0)

    leaves_lo = np.concatenate(leaf_lo, axis=0)
    leaves_hi = np.concatenate(leaf_hi, axis=0)
    leaf_bounds = np.stack([leaves_lo, leaves_hi], axis=1)

    unit = tensorize(gauss_legendre_1d(n1d), d)
    half_width = 0.5 * (leaves_hi - leaves_lo)  # (L, d)
    pts = leaves_lo[:, None, :] + (unit.points[None, :, :] + 1.0) * half_width[:, None, :]
    wts = unit.weights[None, :] * np.prod(half_width, axis=1)[:, None]
    points = pts.reshape(-1, d)
    weights = wts.reshape(-1)
    inside = domain.inside(to_physical(points))

    return CutCellRule(
        dimension=d,
        depth=k,
        n1d=n1d,
        lo=lo,
        hi=hi,
        leaf_bounds=leaf_bounds,
        points=points,
        weights=weights,
        inside=np.asarray(inside, dtype=bool),
    )
