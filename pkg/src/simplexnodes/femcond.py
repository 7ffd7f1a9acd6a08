"""Reference-element finite element matrices and their condition numbers.

All matrices are expressed in the Lagrange basis of a node set.  The
Lambda-2 metric lives on the unit simplex; the mass matrix defaults to it
(its condition number is affine invariant).  Stiffness, nodal gradient and
nodal Laplacian take an explicit geometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .exceptions import NumericalError
from .geometry import SimplexGeometry, reference_simplex
from .interp import LagrangeOperator
from .modal import pkd_grad
from .quadrature import SimplexQuadrature, simplex_quadrature

__all__ = [
    "SimplexQuadrature",
    "simplex_quadrature",
    "ConditionReport",
    "cond2",
    "mass_matrix",
    "mass_matrix_quadrature",
    "stiffness_matrix",
    "nodal_derivatives",
    "nodal_gradient",
    "nodal_laplacian",
    "lambda2",
    "harmonic_dimension",
    "condition_table_row",
]

DEFAULT_REL_THRESHOLD = 1e-10
_MASS_AGREEMENT = 1e-9
_QUAD_CHUNK = 1024


@dataclass(frozen=True)
class ConditionReport:
    value: float
    sigma_max: float
    sigma_min_nonzero: float
    numerical_rank: int
    kernel_dim: int


def cond2(A, rel_threshold=DEFAULT_REL_THRESHOLD, kernel_dim=None):
    """2-norm condition number ``||A|| ||A^+||`` from a full SVD.

    Singular values below ``rel_threshold * sigma_max`` count as zero.  If
    ``kernel_dim`` is given it overrides the threshold and exactly that many
    of the smallest singular values are discarded; this is the right choice
    when the kernel is known analytically and the matrix is ill conditioned
    enough for the threshold to be ambiguous.
    """
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix has non-finite entries")
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        raise NumericalError("condition number of a zero matrix is undefined")
    if kernel_dim is None:
        rank = int(np.count_nonzero(s > rel_threshold * s[0]))
    else:
        rank = s.size - int(kernel_dim)
        if rank < 1:
            raise ValueError(f"kernel_dim={kernel_dim} leaves no nonzero singular values")
    smin = s[rank - 1]
    return ConditionReport(float(s[0] / smin), float(s[0]), float(smin), rank, s.size - rank)


def _default_q(op, quad_order):
    return op.degree + 2 if quad_order is None else int(quad_order)


def mass_matrix_quadrature(op, quad_order=None):
    """Mass matrix on the unit simplex by quadrature of the Lagrange basis."""
    Q = simplex_quadrature(op.dim, _default_q(op, quad_order))
    M = np.zeros((op.size, op.size))
    for start in range(0, len(Q.weights), _QUAD_CHUNK):
        pts = Q.points[start:start + _QUAD_CHUNK]
        w = Q.weights[start:start + _QUAD_CHUNK]
        phi = op.solve_transposed(op.basis.evaluate(pts).T)
        M += (phi * w) @ phi.T
    return M


def mass_matrix(op, quad_order=None, check=True, g=None):
    """Mass matrix ``(V V^T)^{-1}``, on the unit simplex unless ``g`` is given.

    The closed form follows from orthonormality of the modal basis.  With
    ``check=True`` it is compared with a quadrature assembly and must agree
    to relative ``1e-9``.  Another geometry only rescales the matrix by the
    ratio of volumes.
    """
    Vinv = op.modal_coefficients(np.eye(op.size))
    M = Vinv.T @ Vinv
    M = 0.5 * (M + M.T)
    if check:
        Mq = mass_matrix_quadrature(op, quad_order)
        err = np.abs(M - Mq).max() / np.abs(M).max()
        if err > _MASS_AGREEMENT:
            raise NumericalError(f"closed-form and quadrature mass matrices differ by {err:.2e}")
        if np.linalg.eigvalsh(M)[0] <= 0.0:
            raise NumericalError("mass matrix is not positive definite")
    if g is not None:
        _check_geometry(op, g)
        M = M * (g.volume * factorial(op.dim))
    return M


def stiffness_matrix(op, g, quad_order=None, check=True):
    """``K = V^{-T} S V^{-1}`` with ``S`` the modal stiffness matrix on ``g``."""
    _check_geometry(op, g)
    q = op.degree + 1 if quad_order is None else int(quad_order)
    Q = simplex_quadrature(op.dim, max(q, 1))
    scale = g.volume * factorial(op.dim)
    S = np.zeros((op.size, op.size))
    for start in range(0, len(Q.weights), _QUAD_CHUNK):
        pts = Q.points[start:start + _QUAD_CHUNK]
        w = Q.weights[start:start + _QUAD_CHUNK] * scale
        dpsi = pkd_grad(op.basis, pts, g)
        for dj in dpsi:
            S += (dj.T * w) @ dj
    Vinv = op.modal_coefficients(np.eye(op.size))
    K = Vinv.T @ S @ Vinv
    K = 0.5 * (K + K.T)
    if check:
        rep = cond2(K)
        if rep.kernel_dim != 1:
            raise NumericalError(f"stiffness matrix kernel has dimension {rep.kernel_dim}, expected 1")
    return K


def nodal_derivatives(op, g):
    """Matrices ``D_j = V_{d_j} V^{-1}`` mapping nodal values to nodal ``d_j`` values."""
    _check_geometry(op, g)
    dV = pkd_grad(op.basis, op.nodes.points, g)
    return [op.solve_transposed(dj.T).T for dj in dV]


def nodal_gradient(op, g):
    """Stacked ``(d N, N)`` nodal gradient matrix, block ``j`` is ``D_j``."""
    return np.vstack(nodal_derivatives(op, g))


def nodal_laplacian(op, g):
    """``L = sum_j D_j D_j``; exact on polynomials of the interpolation degree."""
    D = nodal_derivatives(op, g)
    return sum(Dj @ Dj for Dj in D)


def lambda2(op):
    """Integral over the unit simplex of the sum of squared Lagrange functions."""
    Vinv = op.modal_coefficients(np.eye(op.size))
    return float(np.sum(Vinv * Vinv))


def harmonic_dimension(d, n):
    """Dimension of the harmonic polynomials of degree at most ``n`` in ``d`` variables."""
    if n < 2:
        return comb(n + d, d)
    return comb(n + d, d) - comb(n - 2 + d, d)


def _check_geometry(op, g):
    if not isinstance(op, LagrangeOperator):
        raise TypeError("expected a LagrangeOperator")
    if not isinstance(g, SimplexGeometry) or g.dim != op.dim:
        raise ValueError("geometry must be a SimplexGeometry of the node-set dimension")


def condition_table_row(op, g=None, quad_order=None, rel_threshold=DEFAULT_REL_THRESHOLD, check=True):
    """Condition numbers of M, K, G and L for one node set.

    Kernels are removed by their known dimensions (0 for M, 1 for K and G,
    the harmonic dimension for L).  Returns a dict of
    :class:`ConditionReport`; for degree 1 the Laplacian vanishes and its
    entry is reported as NaN.
    """
    if g is None:
        g = reference_simplex("biunit", op.dim)
    D = nodal_derivatives(op, g)
    G = np.vstack(D)
    L = sum(Dj @ Dj for Dj in D)
    if op.degree < 2:
        nan = float("nan")
        cond_L = ConditionReport(nan, 0.0, nan, 0, op.size)
    else:
        cond_L = cond2(L, kernel_dim=harmonic_dimension(op.dim, op.degree))
    return {
        "M": cond2(mass_matrix(op, quad_order, check=check, g=g), kernel_dim=0),
        "K": cond2(stiffness_matrix(op, g, quad_order, check=False), kernel_dim=1),
        "G": cond2(G, kernel_dim=1),
        "L": cond_L,
    }
