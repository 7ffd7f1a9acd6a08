"""Conical-product (collapsed coordinate) quadrature on the unit simplex."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import UnsupportedError
from .nodes1d import gauss_jacobi

__all__ = ["SimplexQuadrature", "simplex_quadrature"]


@dataclass(frozen=True, eq=False)
class SimplexQuadrature:
    """Barycentric points and weights; weights sum to ``1 / d!``."""

    dim: int
    points: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    def integrate(self, values):
        """Integrate samples taken at ``points`` along the first axis."""
        return np.tensordot(self.weights, values, axes=(0, 0))


@lru_cache(maxsize=64)
def _conical(d, q):
    if d == 1:
        rule = gauss_jacobi(0, 0, q)
        y = rule.points
        return np.column_stack([1.0 - y, y]), rule.weights.copy()
    sub_pts, sub_w = _conical(d - 1, q)
    rule = gauss_jacobi(d - 1, 0, q)
    pts, wts = [], []
    for y, wy in zip(rule.points, rule.weights):
        pts.append(np.column_stack([(1.0 - y) * sub_pts, np.full(len(sub_pts), y)]))
        wts.append(wy * sub_w)
    return np.vstack(pts), np.concatenate(wts)


def simplex_quadrature(d, q):
    """Tensor of ``q``-point Gauss-Jacobi rules through the Duffy map.

    The rule has ``q**d`` points and integrates polynomials of total degree
    up to ``2 q - 1`` exactly on the unit ``d``-simplex.
    """
    d, q = int(d), int(q)
    if d not in (1, 2, 3):
        raise UnsupportedError(f"simplex quadrature is provided for d in (1, 2, 3), got {d}")
    if q < 1:
        raise ValueError(f"need q >= 1, got {q}")
    pts, wts = _conical(d, q)
    pts, wts = pts.copy(), wts.copy()
    pts.setflags(write=False)
    wts.setflags(write=False)
    return SimplexQuadrature(d, pts, wts, 2 * q - 1)
