"""One-dimensional node families on ``[0, 1]`` and Gauss-Jacobi rules.

Every node set returned here is increasing and symmetric about one half,
``x[i] == 1 - x[n - i]`` up to rounding.  Lobatto families store their
endpoints as the exact values ``0.0`` and ``1.0``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .exceptions import DegenerateDegreeError, NumericalError, UnsupportedError

__all__ = [
    "MAX_DEGREE",
    "MAX_QUAD_POINTS",
    "FAMILY_KINDS",
    "NodeFamily1D",
    "QuadratureRule1D",
    "equispaced1d",
    "lgl1d",
    "gl1d",
    "lgc1d",
    "gauss_jacobi",
    "get_family",
]

MAX_DEGREE = 64
MAX_QUAD_POINTS = 128
FAMILY_KINDS = ("equispaced", "lgl", "gl", "lgc")

_NEWTON_MAXITER = 100
_NEWTON_TOL = 1e-15


def _check_degree(n, lowest):
    if int(n) != n:
        raise TypeError(f"degree must be an integer, got {n!r}")
    n = int(n)
    if n < lowest:
        raise DegenerateDegreeError(f"degree {n} is below the minimum {lowest}")
    if n > MAX_DEGREE:
        raise UnsupportedError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
    return n


def _symmetrize(t, lobatto):
    n = len(t) - 1
    x = np.empty_like(t)
    for i in range(n // 2 + 1):
        lo = 0.5 * (t[i] + (1.0 - t[n - i]))
        x[i] = lo
        x[n - i] = 1.0 - lo
    if n % 2 == 0:
        x[n // 2] = 0.5
    if lobatto:
        x[0], x[n] = 0.0, 1.0
    x.setflags(write=False)
    return x


def _legendre_table(x, n):
    """Rows ``P_0(x), ..., P_n(x)`` by the three-term recurrence."""
    P = np.empty((n + 1,) + np.shape(x))
    P[0] = 1.0
    if n >= 1:
        P[1] = x
    for k in range(1, n):
        P[k + 1] = ((2 * k + 1) * x * P[k] - k * P[k - 1]) / (k + 1)
    return P


def equispaced1d(n):
    n = _check_degree(n, 1)
    return _symmetrize(np.arange(n + 1) / n, lobatto=True)


def lgl1d(n):
    """Lobatto-Gauss-Legendre points mapped to ``[0, 1]``.

    Interior points are the roots of the derivative of the degree-``n``
    Legendre polynomial, found by Newton iteration on ``(1 - x^2) P_n'(x)``
    started from the Chebyshev-Lobatto points.
    """
    n = _check_degree(n, 1)
    x = -np.cos(np.pi * np.arange(n + 1) / n)
    for _ in range(_NEWTON_MAXITER):
        P = _legendre_table(x, n)
        step = (x * P[n] - P[n - 1]) / ((n + 1) * P[n])
        x = x - step
        if np.max(np.abs(step)) <= _NEWTON_TOL:
            break
    else:
        raise NumericalError(f"LGL Newton iteration did not converge for n={n}")
    return _symmetrize((1.0 + x) / 2.0, lobatto=True)


def gl1d(n):
    """The ``n + 1`` Gauss-Legendre points mapped to ``(0, 1)``.

    Unlike the other families, ``n = 0`` is allowed and gives the midpoint.
    """
    n = _check_degree(n, 0)
    m = n + 1
    x = -np.cos(np.pi * (np.arange(m) + 0.75) / (m + 0.5))
    for _ in range(_NEWTON_MAXITER):
        P = _legendre_table(x, m)
        dP = m * (x * P[m] - P[m - 1]) / (x * x - 1.0)
        step = P[m] / dP
        x = x - step
        if np.max(np.abs(step)) <= _NEWTON_TOL:
            break
    else:
        raise NumericalError(f"Gauss-Legendre Newton iteration did not converge for n={n}")
    return _symmetrize((1.0 + np.sort(x)) / 2.0, lobatto=False)


def lgc1d(n):
    n = _check_degree(n, 1)
    return _symmetrize((1.0 - np.cos(np.pi * np.arange(n + 1) / n)) / 2.0, lobatto=True)


_BUILDERS = {
    "equispaced": equispaced1d,
    "lgl": lgl1d,
    "gl": gl1d,
    "lgc": lgc1d,
}


class NodeFamily1D:
    """A memoized 1D node family, ``family[n]`` is the degree-``n`` set.

    Instances are safe to share between threads; the memo is guarded by a
    lock and the returned arrays are read-only.
    """

    def __init__(self, kind):
        if kind not in _BUILDERS:
            raise ValueError(f"unknown 1D family {kind!r}; expected one of {FAMILY_KINDS}")
        self.kind = kind
        self._build = _BUILDERS[kind]
        self._memo = {}
        self._lock = threading.Lock()

    @property
    def has_endpoints(self):
        return self.kind != "gl"

    def points(self, n):
        n = int(n)
        try:
            return self._memo[n]
        except KeyError:
            pass
        x = self._build(n)
        with self._lock:
            return self._memo.setdefault(n, x)

    __getitem__ = points

    def __repr__(self):
        return f"NodeFamily1D({self.kind!r})"


_SHARED = {}
_SHARED_LOCK = threading.Lock()


def get_family(kind):
    """Return the process-wide shared instance of a 1D family."""
    if isinstance(kind, NodeFamily1D):
        return kind
    with _SHARED_LOCK:
        if kind not in _SHARED:
            _SHARED[kind] = NodeFamily1D(kind)
        return _SHARED[kind]


@dataclass(frozen=True)
class QuadratureRule1D:
    """Points and positive weights for the weight ``(1 - t)^a t^b`` on ``[0, 1]``."""

    points: np.ndarray
    weights: np.ndarray
    a: float = 0.0
    b: float = 0.0

    @property
    def exactness_degree(self):
        return 2 * len(self.points) - 1

    def integrate(self, f):
        return float(np.dot(self.weights, f(self.points)))


def gauss_jacobi(a, b, q):
    """``q``-point Gauss-Jacobi rule for ``(1 - t)^a t^b`` on ``[0, 1]``.

    Exact for polynomials of degree at most ``2 q - 1``.
    """
    if not (a > -1 and b > -1):
        raise ValueError(f"Jacobi exponents must exceed -1, got a={a}, b={b}")
    q = int(q)
    if q < 1:
        raise ValueError(f"need at least one quadrature point, got q={q}")
    if q > MAX_QUAD_POINTS:
        raise UnsupportedError(f"q={q} exceeds the supported maximum {MAX_QUAD_POINTS}")
    x, w = roots_jacobi(q, a, b)
    if not (np.all(np.isfinite(x)) and np.all(w > 0)):
        raise NumericalError(f"Gauss-Jacobi rule failed for a={a}, b={b}, q={q}")
    pts = (1.0 + x) / 2.0
    wts = w * 2.0 ** (-(a + b + 1.0))
    pts.setflags(write=False)
    wts.setflags(write=False)
    return QuadratureRule1D(pts, wts, float(a), float(b))
