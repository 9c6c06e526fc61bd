"""Gauss-Lobatto-Legendre nodes and nodal Lagrange bases on reference cubes.

The 1D basis interpolates the p+1 GLL points of [-1, 1]; multivariate bases
are tensor products with lexicographic flat indexing (first coordinate
fastest). All evaluations are exact polynomial arithmetic in double
precision, no finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NodalBasis1D",
    "TensorBasis",
    "gll_nodes",
    "lagrange_all",
    "legendre_value_and_derivative",
    "tensor_eval",
]


def legendre_value_and_derivative(p: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the degree-p Legendre polynomial and its first derivative.

    Uses the three-term recurrence for the values and the relation
    (1 - x^2) P_p'(x) = p (P_{p-1}(x) - x P_p(x)) away from the endpoints;
    at x = +-1 the derivative is the known closed form +-p(p+1)/2 * (+-1)^p.
    """
    x = np.asarray(x, dtype=float)
    pk = np.ones_like(x)
    if p == 0:
        return pk, np.zeros_like(x)
    pk_minus, pk = pk, x.copy()
    for k in range(1, p):
        pk_minus, pk = pk, ((2 * k + 1) * x * pk - k * pk_minus) / (k + 1)
    endpoint = np.isclose(np.abs(x), 1.0)
    denom = np.where(endpoint, 1.0, 1.0 - x * x)
    dpk = p * (pk_minus - x * pk) / denom
    if np.any(endpoint):
        sign = np.where(x > 0, 1.0, (-1.0) ** (p + 1))
        dpk = np.where(endpoint, sign * p * (p + 1) / 2.0, dpk)
    return pk, dpk


def gll_nodes(p: int) -> np.ndarray:
    """Gauss-Lobatto-Legendre nodes of degree p on [-1, 1].

    Endpoints are exactly -1 and +1; the p-1 interior nodes are the roots
    of P_p', found by Newton iteration from Chebyshev-like initial guesses.
    The returned array is strictly increasing and exactly antisymmetric.
    """
    if p < 1:
        raise ValueError(f"GLL nodes need degree p >= 1, got {p}")
    if p == 1:
        return np.array([-1.0, 1.0])
    x = -np.cos(np.pi * np.arange(1, p) / p)
    for _ in range(100):
        pp, dpp = legendre_value_and_derivative(p, x)
        # P_p'' from the Legendre ODE; valid since the interior roots stay
        # strictly inside (-1, 1)
        d2pp = (2.0 * x * dpp - p * (p + 1) * pp) / (1.0 - x * x)
        step = dpp / d2pp
        x -= step
        if np.max(np.abs(step)) < 1e-15:
            break
    # enforce exact symmetry about 0 (odd count -> exact midpoint zero)
    x = 0.5 * (x - x[::-1])
    return np.concatenate(([-1.0], x, [1.0]))


def _lagrange_batch(nodes: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values and derivatives of all Lagrange polynomials at points x.

    Direct product form with prefix/suffix products so evaluation stays
    exact at the interpolation nodes themselves.
    """
    n = nodes.size
    x = np.atleast_1d(np.asarray(x, dtype=float))
    m = x.size
    diff = x[:, None] - nodes[None, :]

    node_diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(node_diff, 1.0)
    denom = node_diff.prod(axis=1)

    # prefix[q, i] = prod_{j < i} diff[q, j], suffix[q, i] = prod_{j > i}
    prefix = np.ones((m, n))
    suffix = np.ones((m, n))
    np.cumprod(diff[:, :-1], axis=1, out=prefix[:, 1:])
    np.cumprod(diff[:, :0:-1], axis=1, out=suffix[:, -2::-1])

    values = prefix * suffix / denom[None, :]

    derivatives = np.empty((m, n))
    idx = np.arange(n)
    for i in range(n):
        cols = diff[:, idx != i]
        pre = np.ones((m, n - 1))
        suf = np.ones((m, n - 1))
        np.cumprod(cols[:, :-1], axis=1, out=pre[:, 1:])
        np.cumprod(cols[:, :0:-1], axis=1, out=suf[:, -2::-1])
        derivatives[:, i] = (pre * suf).sum(axis=1) / denom[i]
    return values, derivatives


@dataclass(frozen=True)
class NodalBasis1D:
    """Nodal Lagrange basis of degree p on the GLL points of [-1, 1]."""

    degree: int
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", gll_nodes(self.degree))

    @property
    def n(self) -> int:
        return self.degree + 1

    def eval(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Values and derivatives of all basis polynomials at points x."""
        return _lagrange_batch(self.nodes, x)


def lagrange_all(basis: NodalBasis1D, xi: float) -> tuple[np.ndarray, np.ndarray]:
    """All Lagrange values and analytic derivatives at a single point."""
    values, derivatives = basis.eval(np.array([float(xi)]))
    return values[0], derivatives[0]


@dataclass(frozen=True)
class TensorBasis:
    """Tensor-product Lagrange basis on [-1, 1]^d.

    Flat indexing is lexicographic with the first coordinate fastest:
    flat = i1 + (p+1) * i2 + (p+1)^2 * i3.
    """

    dimension: int
    basis1d: NodalBasis1D

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError(f"tensor basis supports d in {{1,2,3}}, got {self.dimension}")

    @property
    def n_functions(self) -> int:
        return self.basis1d.n ** self.dimension

    def flat_index(self, multi: tuple[int, ...]) -> int:
        n = self.basis1d.n
        flat = 0
        for k in reversed(range(self.dimension)):
            flat = flat * n + multi[k]
        return flat

    def multi_index(self, flat: int) -> tuple[int, ...]:
        n = self.basis1d.n
        multi = []
        for _ in range(self.dimension):
            multi.append(flat % n)
            flat //= n
        return tuple(multi)

    def eval_batch(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Values (m, N) and reference gradients (m, N, d) at m points."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        m, d = points.shape
        if d != self.dimension:
            raise ValueError(f"points have dimension {d}, basis has {self.dimension}")
        vals_1d = []
        ders_1d = []
        for k in range(d):
            v, dv = self.basis1d.eval(points[:, k])
            vals_1d.append(v)
            ders_1d.append(dv)

        n = self.basis1d.n
        values = vals_1d[0]
        # first coordinate fastest: later coordinates enter as slower axes
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


def tensor_eval(tb: TensorBasis, x) -> tuple[np.ndarray, np.ndarray]:
    """Values and reference gradients of all tensor basis functions at x."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    values, gradients = tb.eval_batch(x)
    return values[0], gradients[0]
