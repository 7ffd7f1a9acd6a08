"""Input checks shared by the numerical modules."""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError

BARY_NEG_TOL = 1e-14
BARY_SUM_TOL = 1e-13


def check_bary(b, d, strict=False):
    """Return ``b`` as a float array of shape ``(P, d + 1)``.

    With ``strict=True`` the rows must also be barycentric coordinates within
    the usual tolerances.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim == 1:
        b = b[None, :]
    if b.ndim != 2 or b.shape[1] != d + 1:
        raise ValueError(f"expected barycentric points of shape (P, {d + 1}), got {b.shape}")
    if strict:
        if np.any(b < -BARY_NEG_TOL):
            raise DomainError("barycentric coordinates must be non-negative")
        if np.any(np.abs(b.sum(axis=1) - 1.0) > BARY_SUM_TOL):
            raise DomainError("barycentric coordinates must sum to one")
    return b


def check_degree_range(n_min, n_max, cap):
    if not 1 <= n_min <= n_max <= cap:
        raise ValueError(f"degree range must satisfy 1 <= {n_min} <= {n_max} <= {cap}")
