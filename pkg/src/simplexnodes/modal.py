"""Orthonormal Proriol-Koornwinder-Dubiner (PKD) basis on the simplex.

Each basis function is written as a product over levels ``l = 1..d`` of
homogenized ("scaled") Jacobi polynomials

    J_k^{(a, 0)}(u, v) = (u + v)^k P_k^{(a, 0)}((u - v) / (u + v)),

with ``u = b_l`` and ``v = b_0 + ... + b_{l-1}``.  The product is a
homogeneous polynomial of the barycentric coordinates, so it is evaluated by
a three-term recurrence without any division by collapsed coordinates and
stays finite on facets and at vertices.

The functions are orthonormal on the unit simplex.  Values do not depend on
the geometry; Cartesian gradients are obtained by the affine chain rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, sqrt

import numpy as np

from ._validation import check_bary
from .multiindex import iter_indices

__all__ = ["ModalBasis", "pkd_eval", "pkd_grad"]


def _scaled_jacobi(a, kmax, u, v, grad):
    """``J_0..J_kmax`` of ``(u, v)``, plus u- and v-derivatives if ``grad``."""
    shape = (kmax + 1,) + u.shape
    J = np.empty(shape)
    J[0] = 1.0
    if grad:
        Ju = np.zeros(shape)
        Jv = np.zeros(shape)
    else:
        Ju = Jv = None
    if kmax == 0:
        return J, Ju, Jv
    S = u + v
    D = u - v
    J[1] = 0.5 * ((a + 2) * D + a * S)
    if grad:
        Ju[1] = 0.5 * ((a + 2) + a)
        Jv[1] = 0.5 * (-(a + 2) + a)
    S2 = S * S
    for m in range(1, kmax):
        c = 2 * m + a
        den = 2.0 * (m + 1) * (m + a + 1) * c
        A1 = (c + 1) * (c + 2) * c / den
        A0 = (c + 1) * a * a / den
        C = 2.0 * (m + a) * m * (c + 2) / den
        L = A1 * D + A0 * S
        J[m + 1] = L * J[m] - C * S2 * J[m - 1]
        if grad:
            Ju[m + 1] = (A1 + A0) * J[m] + L * Ju[m] - C * (2.0 * S * J[m - 1] + S2 * Ju[m - 1])
            Jv[m + 1] = (A0 - A1) * J[m] + L * Jv[m] - C * (2.0 * S * J[m - 1] + S2 * Jv[m - 1])
    return J, Ju, Jv


@dataclass(frozen=True, eq=False)
class ModalBasis:
    """PKD basis of degree ``degree`` on the ``dim``-simplex.

    Functions are graded by total degree; within one degree the index tuples
    ``(k_1, ..., k_d)`` appear in lexicographically decreasing order, so the
    first ``binomial(m + d, d)`` functions span polynomials of degree ``m``.
    """

    dim: int
    degree: int
    indices: tuple = field(init=False, repr=False)
    norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        d, n = int(self.dim), int(self.degree)
        if d < 1 or n < 0:
            raise ValueError(f"need dim >= 1 and degree >= 0, got dim={d}, degree={n}")
        idx = tuple(k for m in range(n + 1) for k in iter_indices(d - 1, m))
        norms = []
        for k in idx:
            s, c = 0, 1.0
            for level, kl in enumerate(k, start=1):
                a = 2 * s + level - 1
                c *= 2 * kl + a + 1
                s += kl
            norms.append(sqrt(c))
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "norms", np.array(norms))

    @property
    def size(self):
        return comb(self.degree + self.dim, self.dim)

    def _tables(self, b, grad):
        d, n = self.dim, self.degree
        tables = []
        partial = b[:, 0].copy()
        for level in range(1, d + 1):
            u = b[:, level]
            per_s = [_scaled_jacobi(2 * s + level - 1, n - s, u, partial, grad) for s in range(n + 1)]
            tables.append(per_s)
            partial = partial + u
        return tables

    def evaluate(self, b, grad=False):
        """Basis values at barycentric points ``b`` of shape ``(P, d + 1)``.

        Returns ``V`` of shape ``(P, size)``; with ``grad=True`` also returns
        ``dV`` of shape ``(d + 1, P, size)`` holding derivatives with respect
        to each barycentric coordinate of the homogeneous extension.
        """
        b = check_bary(b, self.dim)
        d = self.dim
        P = len(b)
        tables = self._tables(b, grad)
        V = np.empty((P, self.size))
        dV = np.zeros((d + 1, P, self.size)) if grad else None
        for col, k in enumerate(self.indices):
            val = np.ones(P)
            if grad:
                g = np.zeros((d + 1, P))
            s = 0
            for level, kl in enumerate(k, start=1):
                J, Ju, Jv = tables[level - 1][s]
                f = J[kl]
                if grad:
                    g *= f
                    g[level] += val * Ju[kl]
                    g[:level] += val * Jv[kl]
                val = val * f
                s += kl
            V[:, col] = val * self.norms[col]
            if grad:
                dV[:, :, col] = g * self.norms[col]
        if grad:
            return V, dV
        return V


def pkd_eval(basis, pts):
    return basis.evaluate(pts)


def pkd_grad(basis, pts, g):
    """Cartesian gradients on geometry ``g``: array of shape ``(d, P, size)``."""
    if g.dim != basis.dim:
        raise ValueError(f"geometry dimension {g.dim} does not match basis dimension {basis.dim}")
    _, dV = basis.evaluate(pts, grad=True)
    return np.einsum("ij,ipk->jpk", g.bary_gradients(), dV)
