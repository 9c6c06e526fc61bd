"""Mass and stiffness matrices for alpha-stabilized cut elements and grids.

Element integrands are tensor products of 1D polynomials, so corner-cut
elements are integrated exactly by composing 1D Gauss-Legendre Gram
matrices with Kronecker products. Cut elements on general geometries use
the adaptive quadtree rule with pointwise stabilization scales. Uncut
elements of a grid use GLL (lumped, diagonal) mass and exact GL stiffness.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.sparse as sp

from .basis import NodalBasis1D, TensorBasis
from .geometry import ImplicitDomain
from .quadrature import CutCellRule, cut_cell_rule, gauss_legendre_1d, gll_rule_1d

__all__ = [
    "ElementMatrices",
    "GlobalSystem",
    "element_matrices_cornercut",
    "element_matrices_quadtree",
    "lumped_mass",
    "assemble_global",
    "iter_element_matrices",
    "apply_dirichlet",
    "single_dof_dirichlet_set",
    "full_element_matrices",
]


@dataclass
class ElementMatrices:
    """Dense symmetric mass/stiffness pair of a single element."""

    M: np.ndarray
    K: np.ndarray
    p: int
    d: int
    lo: np.ndarray
    hi: np.ndarray
    alpha: float
    policy: str  # 'interior', 'fictitious' or 'cut'

    @property
    def n(self) -> int:
        return (self.p + 1) ** self.d


def _gram_1d(basis: NodalBasis1D, a: float, b: float, e0: float, e1: float):
    """1D mass and stiffness Grams of the element basis over [a, b].

    The basis lives on the element interval [e0, e1] (mapped from the
    reference interval); a (p+1)-point GL rule integrates the degree-2p
    mass and degree-(2p-2) stiffness integrands exactly.
    """
    rule = gauss_legendre_1d(basis.degree + 1)
    t = rule.points[:, 0]
    x = a + (b - a) * 0.5 * (t + 1.0)
    w = rule.weights * (b - a) * 0.5
    xi = 2.0 * (x - e0) / (e1 - e0) - 1.0
    vals, ders = basis.eval(xi)
    ders = ders * (2.0 / (e1 - e0))
    mass = (vals * w[:, None]).T @ vals
    stiff = (ders * w[:, None]).T @ ders
    return 0.5 * (mass + mass.T), 0.5 * (stiff + stiff.T)


def _kron_chain(factors: list[np.ndarray]) -> np.ndarray:
    """Kronecker product with factors ordered slowest to fastest coordinate."""
    return reduce(np.kron, factors)


def _separable_matrices(mass_1d: list[np.ndarray], stiff_1d: list[np.ndarray]):
    """Tensor mass and stiffness from per-coordinate 1D Grams.

    Coordinate 1 is the fastest flat index, hence the last Kronecker factor.
    """
    d = len(mass_1d)
    mass = _kron_chain(mass_1d[::-1])
    stiff = np.zeros_like(mass)
    for m in range(d):
        factors = [stiff_1d[k] if k == m else mass_1d[k] for k in range(d)]
        stiff += _kron_chain(factors[::-1])
    return mass, stiff


def element_matrices_cornercut(p: int, d: int, chi: float, alpha: float) -> ElementMatrices:
    """Exactly integrated matrices of the corner-cut unit element.

    The element is [0, 1]^d with physical domain [0, chi]^d; both the
    physical and the alpha-scaled full-element contributions are separable
    and integrated exactly with (p+1)-point GL per direction.
    """
    if not 1 <= p <= 10:
        raise ValueError(f"degree must lie in [1, 10], got {p}")
    if d not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got {d}")
    if not 0.0 <= chi <= 1.0:
        raise ValueError(f"cut parameter must lie in [0, 1], got {chi}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")

    basis = NodalBasis1D(p)
    mass_full, stiff_full = _gram_1d(basis, 0.0, 1.0, 0.0, 1.0)
    mass_cut, stiff_cut = _gram_1d(basis, 0.0, chi, 0.0, 1.0)

    m_phys, k_phys = _separable_matrices([mass_cut] * d, [stiff_cut] * d)
    m_full, k_full = _separable_matrices([mass_full] * d, [stiff_full] * d)
    mass = (1.0 - alpha) * m_phys + alpha * m_full
    stiff = (1.0 - alpha) * k_phys + alpha * k_full

    policy = "interior" if chi == 1.0 else ("fictitious" if chi == 0.0 else "cut")
    return ElementMatrices(
        M=mass,
        K=stiff,
        p=p,
        d=d,
        lo=np.zeros(d),
        hi=np.ones(d),
        alpha=alpha,
        policy=policy,
    )


def _eval_batch_gridded(tb: TensorBasis, points: np.ndarray):
    """Tensor basis evaluation exploiting repeated coordinates.

    Quadtree leaf points share a small set of dyadic per-axis coordinates
    (bitwise-identical across leaves), so evaluating the 1D basis on the
    unique values and gathering is much cheaper than per-point work.
    """
    m, d = points.shape
    n = tb.basis1d.n
    vals_1d, ders_1d = [], []
    for k in range(d):
        uniq, inverse = np.unique(points[:, k], return_inverse=True)
        v, dv = tb.basis1d.eval(uniq)
        vals_1d.append(v[inverse])
        ders_1d.append(dv[inverse])
    values = vals_1d[0]
    for k in range(1, d):
        values = (vals_1d[k][:, :, None] * values[:, None, :]).reshape(m, -1)
    gradients = np.empty((m, n**d, d))
    for axis in range(d):
        g = ders_1d[0] if axis == 0 else vals_1d[0]
        for k in range(1, d):
            fk = ders_1d[k] if axis == k else vals_1d[k]
            g = (fk[:, :, None] * g[:, None, :]).reshape(m, -1)
        gradients[:, :, axis] = g
    return values, gradients


def _matrices_from_rule(rule: CutCellRule, p: int, alpha: float):
    """Pointwise-scaled mass and stiffness from a cut-cell rule."""
    d = rule.dimension
    tb = TensorBasis(d, NodalBasis1D(p))
    vals, grads = _eval_batch_gridded(tb, rule.points)
    w = rule.weights * rule.scales(alpha) * rule.jacobian
    mass = (vals * w[:, None]).T @ vals
    stiff = np.zeros_like(mass)
    inv_map = 2.0 / (rule.hi - rule.lo)
    for m in range(d):
        # contiguous copy: strided slices fall off the fast matmul path
        g = np.ascontiguousarray(grads[:, :, m])
        stiff += inv_map[m] ** 2 * ((g * w[:, None]).T @ g)
    return 0.5 * (mass + mass.T), 0.5 * (stiff + stiff.T)


def element_matrices_quadtree(
    p: int,
    element_lo,
    element_hi,
    domain: ImplicitDomain,
    alpha: float,
    k: int,
) -> ElementMatrices:
    """Quadtree-integrated matrices of one element of a general geometry."""
    rule = cut_cell_rule(element_lo, element_hi, domain, k, p + 1)
    mass, stiff = _matrices_from_rule(rule, p, alpha)
    return ElementMatrices(
        M=mass,
        K=stiff,
        p=p,
        d=rule.dimension,
        lo=rule.lo,
        hi=rule.hi,
        alpha=alpha,
        policy=rule.classification,
    )


def full_element_matrices(p: int, d: int, h: float):
    """Uncut element of size h: lumped GLL mass, consistent GL mass, GL stiffness.

    Returns (m_lumped_diagonal, m_consistent, stiffness); stabilization and
    wave speed factors are applied by callers.
    """
    basis = NodalBasis1D(p)
    mass_full, stiff_full = _gram_1d(basis, 0.0, h, 0.0, h)
    m_cons, stiff = _separable_matrices([mass_full] * d, [stiff_full] * d)
    w_gll = gll_rule_1d(p).weights * h * 0.5
    m_lump = _kron_chain([w_gll] * d) if d > 1 else w_gll.copy()
    return m_lump, m_cons, stiff


def lumped_mass(em: ElementMatrices, p: int, d: int) -> np.ndarray:
    """Diagonal (GLL-quadrature) mass of an uncut element.

    GLL points double as interpolation nodes, so the quadrature of
    N_i N_j is diagonal by the Kronecker property; this is not a row-sum
    of the consistent mass. Cut elements are rejected: lumping them is
    outside the integration policy.
    """
    if em.policy == "cut":
        raise ValueError("lumped mass is only defined for uncut elements")
    w_gll = gll_rule_1d(p).weights
    factors = [w_gll * (em.hi[k] - em.lo[k]) * 0.5 for k in range(d)]
    diag = _kron_chain(factors[::-1]) if d > 1 else factors[0]
    scale = 1.0 if em.policy == "interior" else em.alpha
    return scale * diag


@dataclass
class GlobalSystem:
    """Assembled sparse mass/stiffness operators on a Cartesian grid."""

    M: sp.csr_matrix
    K: sp.csr_matrix
    nx: int
    ny: int
    p: int
    h: float
    alpha: float
    classifications: list[str]

    @property
    def ndof(self) -> int:
        return self.M.shape[0]


def _element_dof_map(ecell: tuple[int, ...], p: int, nx: int, d: int) -> np.ndarray:
    """Global DOF indices of one grid element, local index i1-fastest."""
    gx = ecell[0] * p + np.arange(p + 1)
    if d == 1:
        return gx
    gy = ecell[1] * p + np.arange(p + 1)
    width = nx * p + 1
    return (gx[None, :] + width * gy[:, None]).ravel()


def iter_element_matrices(
    nx: int,
    ny: int | None,
    h: float,
    p: int,
    domain: ImplicitDomain,
    alpha: float,
    k: int,
):
    """Per-element matrix data for a Cartesian grid, in fixed element order.

    Yields (gids, kind, mass, stiff) where mass is a diagonal vector for
    uncut elements and a dense block for cut elements. Element order is
    x-fastest, which fixes the assembly summation order.
    """
    d = 1 if ny is None else 2
    m_lump, _, k_full = full_element_matrices(p, d, h)
    x_edges = np.linspace(0.0, nx * h, nx + 1)
    y_edges = np.linspace(0.0, ny * h, ny + 1) if d == 2 else None
    cells = [(ex,) for ex in range(nx)] if d == 1 else [
        (ex, ey) for ey in range(ny) for ex in range(nx)
    ]
    for cell in cells:
        lo = np.array([x_edges[cell[0]]] if d == 1 else [x_edges[cell[0]], y_edges[cell[1]]])
        hi = np.array(
            [x_edges[cell[0] + 1]] if d == 1 else [x_edges[cell[0] + 1], y_edges[cell[1] + 1]]
        )
        gids = _element_dof_map(cell, p, nx, d)
        rule = cut_cell_rule(lo, hi, domain, k, p + 1)
        kind = rule.classification
        if kind == "cut":
            mass, stiff = _matrices_from_rule(rule, p, alpha)
        else:
            scale = 1.0 if kind == "interior" else alpha
            mass = scale * m_lump
            stiff = scale * k_full
        yield gids, kind, mass, stiff


def assemble_global(
    nx: int,
    ny: int | None,
    h: float,
    p: int,
    domain: ImplicitDomain,
    alpha: float,
    k: int,
) -> GlobalSystem:
    """Assemble a Cartesian grid of elements of size h over the domain.

    ny = None assembles a 1D grid of nx elements. Uncut physical elements
    contribute lumped GLL mass and exact GL stiffness; fully fictitious
    elements the same scaled by alpha; cut elements quadtree-integrated
    consistent mass and stiffness. Shared face DOFs are summed;
    homogeneous Neumann boundaries need no action.
    """
    if alpha <= 0.0:
        raise ValueError("global assembly requires alpha > 0 (mass must stay definite)")
    ndof = (nx * p + 1) * ((ny * p + 1) if ny is not None else 1)
    nloc = (p + 1) ** (1 if ny is None else 2)
    rep = np.repeat(np.arange(nloc), nloc)
    til = np.tile(np.arange(nloc), nloc)

    rows_m, cols_m, vals_m = [], [], []
    rows_k, cols_k, vals_k = [], [], []
    classifications = []
    for gids, kind, mass, stiff in iter_element_matrices(nx, ny, h, p, domain, alpha, k):
        classifications.append(kind)
        if mass.ndim == 2:
            rows_m.append(gids[rep])
            cols_m.append(gids[til])
            vals_m.append(mass.ravel())
        else:
            rows_m.append(gids)
            cols_m.append(gids)
            vals_m.append(mass)
        rows_k.append(gids[rep])
        cols_k.append(gids[til])
        vals_k.append(stiff.ravel())

    mass = sp.coo_matrix(
        (np.concatenate(vals_m), (np.concatenate(rows_m), np.concatenate(cols_m))),
        shape=(ndof, ndof),
    ).tocsr()
    stiff = sp.coo_matrix(
        (np.concatenate(vals_k), (np.concatenate(rows_k), np.concatenate(cols_k))),
        shape=(ndof, ndof),
    ).tocsr()
    return GlobalSystem(
        M=mass,
        K=stiff,
        nx=nx,
        ny=ny if ny is not None else 0,
        p=p,
        h=h,
        alpha=alpha,
        classifications=classifications,
    )


def single_dof_dirichlet_set(p: int, d: int) -> np.ndarray:
    """Flat DOFs with any multi-index coordinate equal to zero.

    For p = 1 this constrains every node on the coordinate hyperplanes,
    leaving the single DOF at the corner opposite the origin.
    """
    n = p + 1
    idx = np.indices((n,) * d).reshape(d, -1)
    constrained = (idx == 0).any(axis=0)
    # flat index with coordinate 1 fastest, matching the tensor basis
    flat = sum(idx[d - 1 - kdim] * (n**kdim) for kdim in range(d))
    return np.sort(flat[constrained])


def apply_dirichlet(obj, constrained):
    """Eliminate homogeneous-Dirichlet DOFs (delete rows and columns).

    Accepts an ElementMatrices or GlobalSystem; an empty set is a no-op
    copy, constraining every DOF is rejected.
    """
    constrained = np.asarray(sorted(set(int(c) for c in np.atleast_1d(constrained))), dtype=int)
    n = obj.M.shape[0]
    if constrained.size >= n:
        raise ValueError("cannot constrain every DOF")
    if constrained.size and (constrained.min() < 0 or constrained.max() >= n):
        raise ValueError("constrained DOF out of range")
    keep = np.setdiff1d(np.arange(n), constrained)
    if isinstance(obj, ElementMatrices):
        return ElementMatrices(
            M=obj.M[np.ix_(keep, keep)],
            K=obj.K[np.ix_(keep, keep)],
            p=obj.p,
            d=obj.d,
            lo=obj.lo,
            hi=obj.hi,
            alpha=obj.alpha,
            policy=obj.policy,
        )
    reduced_m = obj.M.tocsr()[keep][:, keep]
    reduced_k = obj.K.tocsr()[keep][:, keep]
    return GlobalSystem(
        M=reduced_m,
        K=reduced_k,
        nx=obj.nx,
        ny=obj.ny,
        p=obj.p,
        h=obj.h,
        alpha=obj.alpha,
        classifications=obj.classifications,
    )
