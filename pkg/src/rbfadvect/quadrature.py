"""Composite Gauss-Legendre quadrature aligned with interpolation centers.

Polyharmonic interpolants are only piecewise smooth: their higher radial
derivatives kink at the centers.  All basis integrals (inner products
<psi_k, psi_j'>, mass entries h_n = int psi_n, energies int u_N^2) place
panel boundaries at every center involved, which makes the composite rule
effectively exact (~1e-10) and lets the discrete energy and conservation
identities close numerically.  2D integrals are tensor products over the
rectangular domain.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .interpolation import NodalBasis


class NonpositiveMassWarning(UserWarning):
    """A mass-vector entry int psi_n came out nonpositive."""


def gauss_legendre_nodes(n: int):
    """Gauss-Legendre nodes and weights on [-1, 1].

    Newton iteration on the Legendre recurrence; every node is converged
    to 1e-15.  Supports 1 <= n <= 64.
    """
    if not 1 <= n <= 64:
        raise ValueError(f"point count {n} outside supported range 1..64")
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))

    def _legendre(x):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x ** 2 - 1.0)
        return p1, dp

    for _ in range(100):
        pn, dpn = _legendre(x)
        dx = pn / dpn
        x -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    _, dpn = _legendre(x)
    w = 2.0 / ((1.0 - x ** 2) * dpn ** 2)
    order = np.argsort(x)
    return x[order], w[order]


@dataclass(frozen=True)
class QuadratureRule:
    """Composite rule: ``panels`` subdivisions per segment, fixed points each.

    For ``integrate_1d`` the segment is the whole interval; for basis
    integrals the segments are the inter-center gaps, so ``panels`` acts as
    a refinement multiplier on the center-aligned panels.
    """

    points_per_panel: int = 10
    panels: int = 1
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.panels < 1:
            raise ValueError("panel count must be >= 1")
        nodes, weights = gauss_legendre_nodes(self.points_per_panel)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)


def panel_points(breakpoints, rule: QuadratureRule):
    """Quadrature points/weights with ``rule.panels`` panels per gap.

    Points are emitted panel-major, node-minor, so summation order is
    deterministic.
    """
    breaks = np.asarray(breakpoints, dtype=float)
    xs, ws = [], []
    for left, right in zip(breaks[:-1], breaks[1:]):
        edges = np.linspace(left, right, rule.panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            half = 0.5 * (b - a)
            xs.append(0.5 * (a + b) + half * rule.nodes)
            ws.append(half * rule.weights)
    return np.concatenate(xs), np.concatenate(ws)


def integrate_1d(f, a: float, b: float, rule: QuadratureRule) -> float:
    """Composite integral of a vectorized function over [a, b]."""
    if not a < b:
        raise ValueError("integration interval must satisfy a < b")
    x, w = panel_points(np.array([a, b]), rule)
    return float(w @ np.asarray(f(x), dtype=float))


def _breaks_1d(nb: NodalBasis, extra=None) -> np.ndarray:
    pts = [nb.domain[0], nb.centers.points[:, 0]]
    if extra is not None:
        pts.append(np.asarray(extra, dtype=float).ravel())
    lo, hi = nb.domain[0]
    vals = np.unique(np.concatenate([np.asarray(p).ravel() for p in pts]))
    return vals[(vals >= lo) & (vals <= hi)]


def quadrature_grid_1d(nb: NodalBasis, rule: QuadratureRule, extra_breaks=None):
    """Center-aligned 1D quadrature grid covering the basis domain."""
    return panel_points(_breaks_1d(nb, extra_breaks), rule)


def quadrature_grid_2d(nb: NodalBasis, rule: QuadratureRule):
    """Tensor-product grid over the rectangular domain, axis breaks at centers."""
    (x0, x1), (y0, y1) = nb.domain
    cx = np.unique(np.concatenate([[x0, x1], nb.centers.points[:, 0]]))
    cy = np.unique(np.concatenate([[y0, y1], nb.centers.points[:, 1]]))
    qx, wx = panel_points(cx[(cx >= x0) & (cx <= x1)], rule)
    qy, wy = panel_points(cy[(cy >= y0) & (cy <= y1)], rule)
    gx, gy = np.meshgrid(qx, qy, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    w = np.outer(wx, wy).ravel()
    return pts, w


def quadrature_grid(nb: NodalBasis, rule: QuadratureRule):
    """Grid for the basis domain with points always shaped (M, d)."""
    if nb.dim == 1:
        x, w = quadrature_grid_1d(nb, rule)
        return x.reshape(-1, 1), w
    return quadrature_grid_2d(nb, rule)


_CHUNK = 4096


def _accumulate_basis(nb: NodalBasis, pts: np.ndarray, w: np.ndarray) -> np.ndarray:
    """sum_q w_q * raw_basis_row(x_q), chunked to bound memory."""
    total = np.zeros(nb.n + nb.poly.q)
    for start in range(0, pts.shape[0], _CHUNK):
        sl = slice(start, start + _CHUNK)
        total += nb.basis_rows(pts[sl]).T @ w[sl]
    return total


def mass_vector(nb: NodalBasis, rule: QuadratureRule) -> np.ndarray:
    """h_n = int_Omega psi_n dx over the basis domain.

    Warns (without failing) when any entry is nonpositive; the SAT penalty
    scaling divides by these entries.
    """
    pts, w = quadrature_grid(nb, rule)
    if nb.dim == 1:
        h = nb.psi_rows(pts).T @ w
    else:
        acc = _accumulate_basis(nb, pts, w)
        h = np.asarray(nb.coef.astype(np.longdouble).T @ acc.astype(np.longdouble), dtype=float)
    bad = int((h <= 0.0).sum())
    if bad:
        warnings.warn(
            f"mass vector has {bad} nonpositive entries (min {h.min():.3e})",
            NonpositiveMassWarning,
            stacklevel=2,
        )
    return h


def energy(nb: NodalBasis, values, rule: QuadratureRule) -> float:
    """int u_N^2 over the domain for the interpolant of the nodal values."""
    pts, w = quadrature_grid(nb, rule)
    values = np.asarray(values, dtype=float)
    if nb.dim == 1:
        vals = nb.psi_rows(pts) @ values
        return float(w @ vals ** 2)
    full = nb.coef @ values
    total = 0.0
    for start in range(0, pts.shape[0], _CHUNK):
        sl = slice(start, start + _CHUNK)
        vals = nb.basis_rows(pts[sl]) @ full
        total += w[sl] @ vals ** 2
    return float(total)


def _union_grid(nb: NodalBasis, other: NodalBasis, rule: QuadratureRule):
    extra = other.centers.points[:, 0]
    return quadrature_grid_1d(nb, rule, extra_breaks=extra)


def inner_product_deriv(
    nb: NodalBasis, k: int, other: NodalBasis, j: int, rule: QuadratureRule
) -> float:
    """<psi_k, tilde-psi_j'> = int psi_k(x) tilde-psi_j'(x) dx (1D).

    Panel boundaries include every center of both bases.
    """
    pts, w = _union_grid(nb, other, rule)
    vals_k = nb.psi_rows(pts)[:, k]
    dvals_j = other.psi_deriv_rows(pts)[:, j]
    return float(w @ (vals_k * dvals_j))


def inner_product_matrix(
    nb: NodalBasis, other: NodalBasis, rule: QuadratureRule, extended: bool = True
) -> np.ndarray:
    """All <psi_k, tilde-psi_j'> at once, shape (N, N_other).

    ``extended=False`` evaluates the cardinal functions with plain float64
    contractions.  The correction-function system is assembled that way:
    the matrix is structurally rank-deficient and its reported condition
    number is set by the assembly noise floor, which the extended path
    pushes another two orders down.
    """
    pts, w = _union_grid(nb, other, rule)
    if extended:
        psi = nb.psi_rows(pts)
        dpsi = other.psi_deriv_rows(pts)
    else:
        psi = nb.basis_rows(pts) @ nb.coef
        dpsi = other.deriv_basis_rows(pts) @ other.coef
    return psi.T @ (w[:, None] * dpsi)
