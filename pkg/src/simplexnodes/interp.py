"""Lagrange interpolation on a node set, Lebesgue constants, error benchmarks.

Lagrange basis values at points ``Q`` are ``V_Q V_X^{-1}``, where ``V`` are
PKD Vandermonde matrices.  The product is formed by a factored solve with
``V_X`` and never by an explicit inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.linalg.lapack import dgecon

from ._validation import check_bary
from .exceptions import UnisolvencyError
from .geometry import SimplexGeometry
from .modal import ModalBasis
from .multiindex import enumerate_indices
from .nodes import NodeSet

__all__ = [
    "LagrangeOperator",
    "LebesgueResult",
    "build_lagrange",
    "lagrange_eval",
    "lebesgue_function",
    "lebesgue_constant",
    "default_grid_degree",
    "default_sample_degree",
    "default_alpha",
    "interpolate",
    "interpolation_error",
    "barycentric_grid",
    "maximize_on_simplex",
    "f_A",
    "f_B",
]

_CHUNK = 4096
_RCOND_MIN = 1e-13


@dataclass(frozen=True, eq=False)
class LagrangeOperator:
    """Factorized PKD Vandermonde matrix of a node set."""

    nodes: NodeSet
    basis: ModalBasis = field(repr=False)
    vandermonde: np.ndarray = field(repr=False)
    lu: tuple = field(repr=False)
    rcond: float = field(repr=False)

    @property
    def dim(self):
        return self.nodes.dim

    @property
    def degree(self):
        return self.nodes.degree

    @property
    def size(self):
        return len(self.nodes)

    def modal_coefficients(self, nodal_values):
        """PKD coefficients of the interpolant with the given nodal values."""
        return lu_solve(self.lu, np.asarray(nodal_values, dtype=float))

    def nodal_from_modal(self, modal):
        return self.vandermonde @ modal

    def solve_transposed(self, rhs):
        """``V_X^{-T} rhs``; turns modal row data into Lagrange row data."""
        return lu_solve(self.lu, rhs, trans=1)


def build_lagrange(ns):
    """Factor the Vandermonde matrix of ``ns``.

    Raises
    ------
    UnisolvencyError
        If the matrix is numerically singular, e.g. for collinear points.
    """
    basis = ModalBasis(ns.dim, ns.degree)
    if len(ns) != basis.size:
        raise UnisolvencyError(f"{len(ns)} nodes cannot be unisolvent for a space of dimension {basis.size}")
    V = basis.evaluate(ns.points)
    V.setflags(write=False)
    with np.errstate(all="ignore"):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LinAlgWarning)
            warnings.simplefilter("ignore", RuntimeWarning)
            lu = lu_factor(V, check_finite=False)
    anorm = np.abs(V).sum(axis=0).max()
    rcond = 0.0
    if np.all(np.isfinite(lu[0])) and np.all(np.abs(np.diag(lu[0])) > 0):
        rcond, _ = dgecon(lu[0], anorm, norm="1")
    if not rcond > _RCOND_MIN:
        cond = np.inf if rcond == 0 else 1.0 / rcond
        raise UnisolvencyError(
            f"Vandermonde matrix of the {ns.family} node set is singular (condition estimate {cond:.3e})",
            condition_number=cond,
        )
    return LagrangeOperator(ns, basis, V, lu, float(rcond))


def _chunks(b):
    for start in range(0, len(b), _CHUNK):
        yield b[start:start + _CHUNK]


def lagrange_eval(op, pts):
    """Lagrange basis values, ``(P, N)``; entry ``(i, j)`` is ``phi_j(p_i)``."""
    b = check_bary(pts, op.dim)
    out = np.empty((len(b), op.size))
    for start in range(0, len(b), _CHUNK):
        part = b[start:start + _CHUNK]
        Vq = op.basis.evaluate(part)
        out[start:start + len(part)] = op.solve_transposed(Vq.T).T
    return out


def lebesgue_function(op, pts):
    b = check_bary(pts, op.dim)
    vals = np.empty(len(b))
    for start in range(0, len(b), _CHUNK):
        part = b[start:start + _CHUNK]
        phi = op.solve_transposed(op.basis.evaluate(part).T)
        vals[start:start + len(part)] = np.abs(phi).sum(axis=0)
    return vals


def interpolate(op, values):
    """Return a callable evaluating the interpolant of ``values`` at barycentric points."""
    coef = op.modal_coefficients(values)

    def evaluate(pts):
        b = check_bary(pts, op.dim)
        return np.concatenate([op.basis.evaluate(part) @ coef for part in _chunks(b)]) if len(b) else np.empty(0)

    return evaluate


# --- maximization over the simplex ------------------------------------------

_GRID_CACHE = {}


def barycentric_grid(d, g):
    """All points ``alpha / g`` with ``alpha`` of length ``d + 1`` summing to ``g``."""
    key = (d, g)
    if key not in _GRID_CACHE:
        idx = np.array(enumerate_indices(d, g), dtype=np.int64)
        _GRID_CACHE.clear()
        _GRID_CACHE[key] = idx
    idx = _GRID_CACHE[key]
    return idx, idx / float(g)


def _grid_local_maxima(idx, g, vals):
    """Mask of grid points whose value is not below any lattice neighbour."""
    d = idx.shape[1] - 1
    radix = g + 1
    weights = radix ** np.arange(d + 1, dtype=np.int64)
    keys = idx @ weights
    order = np.argsort(keys)
    sorted_keys = keys[order]
    is_max = np.ones(len(idx), dtype=bool)
    for i in range(d + 1):
        for j in range(d + 1):
            if i == j:
                continue
            nb = idx.copy()
            nb[:, i] += 1
            nb[:, j] -= 1
            ok = nb[:, j] >= 0
            nkeys = nb[ok] @ weights
            pos = np.searchsorted(sorted_keys, nkeys)
            nvals = vals[order[pos]]
            rows = np.flatnonzero(ok)
            is_max[rows[nvals > vals[rows]]] = False
    return is_max


def _is_symmetric(points, tol=1e-12):
    ref = points[np.lexsort(points.T[::-1])]
    for perm in permutations(range(points.shape[1])):
        p = points[:, perm]
        p = p[np.lexsort(p.T[::-1])]
        if np.abs(p - ref).max() > tol:
            return False
    return True


def _local_stencil(d, m=5):
    ticks = np.linspace(-1.0, 1.0, m)
    mesh = np.meshgrid(*([ticks] * d), indexing="ij")
    return np.column_stack([c.ravel() for c in mesh])


def _project(b):
    b = np.maximum(b, 0.0)
    return b / b.sum(axis=1, keepdims=True)


def _refine(func, centers, center_vals, h, levels, shrink, stencil, max_moves=64):
    """Nested local grid search around each center.

    At every level the stencil is re-centred on the best probe until the
    incumbent is the best point of its stencil, then the stencil shrinks.
    Incumbents are never replaced by worse points.
    """
    d = centers.shape[1] - 1
    samples = 0
    for _ in range(levels):
        active = np.ones(len(centers), dtype=bool)
        for _ in range(max_moves):
            rows = np.flatnonzero(active)
            if rows.size == 0:
                break
            local = np.repeat(centers[rows], len(stencil), axis=0)
            local[:, 1:] += h * np.tile(stencil, (rows.size, 1))
            local[:, 0] = 1.0 - local[:, 1:].sum(axis=1)
            local = _project(local)
            pv = func(local).reshape(rows.size, len(stencil))
            samples += len(local)
            k = np.argmax(pv, axis=1)
            top = pv[np.arange(rows.size), k]
            better = top > center_vals[rows]
            moved = rows[better]
            centers[moved] = local.reshape(rows.size, len(stencil), d + 1)[np.flatnonzero(better), k[better]]
            center_vals[moved] = top[better]
            active[:] = False
            active[moved] = True
        h /= shrink
    return h, samples


def maximize_on_simplex(func, d, grid_degree, top_k=10, refine_levels=8, shrink=4.0, symmetric=False,
                        polish=True):
    """Largest value of ``func`` found by a grid scan and local refinement.

    ``func`` maps barycentric points ``(P, d + 1)`` to values ``(P,)``.  The
    lattice of degree ``grid_degree`` is scanned, the ``top_k`` best lattice
    local maxima seed ``refine_levels`` rounds of nested local grids that
    shrink by ``shrink`` per round, and with ``polish`` the search continues
    with halving steps down to a step of about ``1e-13``.  Every probe lies in
    the closed simplex, so the result is a lower bound on the true maximum,
    and it never decreases when ``refine_levels`` grows.

    With ``symmetric=True`` seeds that are coordinate permutations of each
    other count once; only use it for permutation-invariant ``func``.

    Returns ``(value, argmax, samples_used)``.
    """
    idx, grid = barycentric_grid(d, grid_degree)
    vals = func(grid)
    samples = len(grid)
    best = int(np.argmax(vals))
    best_val, best_pt = float(vals[best]), grid[best]

    cand = np.flatnonzero(_grid_local_maxima(idx, grid_degree, vals))
    cand = cand[np.argsort(-vals[cand], kind="stable")]
    seeds = []
    seen = set()
    for c in cand:
        key = tuple(np.sort(idx[c])) if symmetric else tuple(idx[c])
        if key in seen:
            continue
        seen.add(key)
        seeds.append(c)
        if len(seeds) == top_k:
            break

    centers = grid[seeds].copy()
    center_vals = vals[seeds].copy()
    if len(centers):
        h, used = _refine(func, centers, center_vals, 1.0 / grid_degree, refine_levels, shrink,
                          _local_stencil(d, 5))
        samples += used
        if polish:
            levels = max(0, int(np.ceil(np.log2(h / 1e-13))))
            _, used = _refine(func, centers, center_vals, h, levels, 2.0, _local_stencil(d, 3))
            samples += used
        j = int(np.argmax(center_vals))
        if center_vals[j] > best_val:
            best_val, best_pt = float(center_vals[j]), centers[j]
    return best_val, np.array(best_pt), samples


@dataclass(frozen=True)
class LebesgueResult:
    constant: float
    argmax: np.ndarray = field(repr=False)
    samples_used: int
    refinement_levels: int


def default_grid_degree(d, n):
    return max(10 * n, 60) if d <= 2 else max(5 * n, 40)


def lebesgue_constant(op, grid_degree=None, top_k=10, refine_levels=8, shrink=4.0):
    """Estimate the Lebesgue constant of the node set behind ``op``.

    The Lebesgue function is scanned on a barycentric lattice of degree
    ``grid_degree``, the ``top_k`` best lattice-local maxima are refined by
    nested local grids shrinking by ``shrink`` per level, and the largest
    value seen is returned.
    """
    if grid_degree is None:
        grid_degree = default_grid_degree(op.dim, op.degree)
    symmetric = _is_symmetric(op.nodes.points)
    val, arg, samples = maximize_on_simplex(
        lambda b: lebesgue_function(op, b), op.dim, int(grid_degree), top_k, refine_levels, shrink, symmetric
    )
    return LebesgueResult(max(val, 1.0), arg, samples, refine_levels)


# --- benchmark functions -----------------------------------------------------


def f_A(x):
    """``prod_i (x_i + 1) * cosh(sum_i x_i - 1)``, vectorized over rows."""
    x = np.asarray(x, dtype=float)
    return np.prod(x + 1.0, axis=-1) * np.cosh(x.sum(axis=-1) - 1.0)


def f_B(x, alpha=25.0):
    """Runge-type function ``1 / (1 + alpha |x|^2)``."""
    x = np.asarray(x, dtype=float)
    return 1.0 / (1.0 + alpha * np.sum(x * x, axis=-1))


def default_alpha(d):
    return 25.0 if d <= 2 else 60.0


def default_sample_degree(d):
    return 50 if d <= 2 else 25


def interpolation_error(op, f, g, sample_degree=None, top_k=10, refine_levels=8, shrink=4.0):
    """Sup-norm estimate of ``I_X f - f`` on geometry ``g``.

    ``f`` takes Cartesian points of shape ``(P, d)``.  Nodes are mapped to
    ``g`` through their barycentric coordinates.
    """
    if not isinstance(g, SimplexGeometry) or g.dim != op.dim:
        raise ValueError("geometry must be a SimplexGeometry of the node-set dimension")
    if sample_degree is None:
        sample_degree = default_sample_degree(op.dim)
    nodal = f(g.bary_to_cart(op.nodes.points))
    interpolant = interpolate(op, nodal)

    def residual(b):
        return np.abs(interpolant(b) - f(g.bary_to_cart(b)))

    val, _, _ = maximize_on_simplex(residual, op.dim, int(sample_degree), top_k, refine_levels, shrink)
    return val
