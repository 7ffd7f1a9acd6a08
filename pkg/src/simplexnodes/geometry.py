"""Reference simplices and barycentric/Cartesian maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .exceptions import DomainError, UnsupportedError

__all__ = ["GEOMETRY_KINDS", "SimplexGeometry", "reference_simplex", "bary_to_cart", "cart_to_bary"]

GEOMETRY_KINDS = ("unit", "biunit", "equilateral")

_OUTSIDE_TOL = 1e-12


def _equilateral_vertices(d):
    if d == 1:
        return np.array([[-1.0], [1.0]])
    if d == 2:
        r = 2.0 / np.sqrt(3.0)
        ang = np.deg2rad([90.0, 210.0, 330.0])
        return np.column_stack([r * np.cos(ang), r * np.sin(ang)])
    if d == 3:
        R = np.sqrt(1.5)
        base = _equilateral_vertices(2)
        return np.vstack([np.column_stack([base, np.full(3, -R / 3.0)]), [0.0, 0.0, R]])
    raise UnsupportedError(f"equilateral simplex is only provided for d <= 3, got d={d}")


@dataclass(frozen=True, eq=False)
class SimplexGeometry:
    """A simplex given by its ``d + 1`` vertices (rows of ``vertices``).

    Vertex ``i`` corresponds to barycentric coordinate ``b_i``.
    """

    kind: str
    vertices: np.ndarray = field(repr=False)
    _lu: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float)
        d = V.shape[1]
        if V.shape != (d + 1, d):
            raise ValueError(f"need d+1 vertices in R^d, got shape {V.shape}")
        V.setflags(write=False)
        object.__setattr__(self, "vertices", V)
        system = np.vstack([V.T, np.ones(d + 1)])
        object.__setattr__(self, "_lu", lu_factor(system))
        if self.volume <= 0.0:
            raise ValueError("simplex vertices are affinely dependent")

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def jacobian(self):
        """``d x d`` matrix with columns ``v_i - v_0``."""
        return (self.vertices[1:] - self.vertices[0]).T

    @property
    def volume(self):
        return abs(np.linalg.det(self.jacobian)) / factorial(self.dim)

    def bary_gradients(self):
        """``(d + 1, d)`` array whose row ``i`` is the Cartesian gradient of ``b_i``."""
        Jinv = np.linalg.inv(self.jacobian)
        return np.vstack([-Jinv.sum(axis=0), Jinv])

    def bary_to_cart(self, b):
        b = np.asarray(b, dtype=float)
        if b.shape[-1] != self.dim + 1:
            raise ValueError(f"expected {self.dim + 1} barycentric coordinates, got {b.shape[-1]}")
        return b @ self.vertices

    def cart_to_bary(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ValueError(f"expected points in R^{self.dim}, got last dimension {x.shape[-1]}")
        flat = x.reshape(-1, self.dim)
        rhs = np.vstack([flat.T, np.ones(len(flat))])
        b = lu_solve(self._lu, rhs).T
        low = b.min(axis=1) if len(b) else np.array([])
        if np.any(low < -_OUTSIDE_TOL):
            k = int(np.argmin(low))
            raise DomainError(f"point {flat[k]} lies outside the {self.kind} simplex")
        b = np.maximum(b, 0.0)
        b /= b.sum(axis=1, keepdims=True)
        return b.reshape(x.shape[:-1] + (self.dim + 1,))


def reference_simplex(kind, d):
    """Reference simplex of the given kind.

    ``unit`` is the hull of the origin and the standard basis vectors,
    ``biunit`` is ``{x >= -1, sum(x) <= 2 - d}``, and ``equilateral`` has
    edge length 2 and its centroid at the origin (``d <= 3``).
    """
    d = int(d)
    if d < 1:
        raise UnsupportedError(f"dimension must be at least 1, got {d}")
    if kind == "unit":
        V = np.vstack([np.zeros(d), np.eye(d)])
    elif kind == "biunit":
        V = np.vstack([-np.ones(d), 2.0 * np.eye(d) - 1.0])
    elif kind == "equilateral":
        V = _equilateral_vertices(d)
    else:
        raise UnsupportedError(f"unknown geometry {kind!r}; expected one of {GEOMETRY_KINDS}")
    return SimplexGeometry(kind, V)


def bary_to_cart(b, g):
    return g.bary_to_cart(b)


def cart_to_bary(x, g):
    return g.cart_to_bary(x)
