"""Barycentric multi-indices.

A multi-index is a plain tuple of non-negative integers; the tuple length is
``d + 1`` for a node of the ``d``-simplex and the entry sum is the polynomial
degree.
"""

from __future__ import annotations

from math import comb
from typing import Iterator, Tuple

MultiIndex = Tuple[int, ...]

__all__ = [
    "MultiIndex",
    "enumerate_indices",
    "iter_indices",
    "count",
    "total",
    "remove",
    "insert_zero",
    "check_multiindex",
]


def check_multiindex(alpha) -> MultiIndex:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) < 1:
        raise ValueError("multi-index must have at least one entry")
    if any(a < 0 for a in alpha):
        raise ValueError(f"multi-index entries must be non-negative, got {alpha}")
    return alpha


def iter_indices(d: int, n: int) -> Iterator[MultiIndex]:
    """Yield every multi-index of length ``d + 1`` and sum ``n``.

    The first entry varies slowest and decreases, so ``(n, 0, ..., 0)``
    comes first and ``(0, ..., 0, n)`` last.
    """
    if d < 0 or n < 0:
        raise ValueError(f"need d >= 0 and n >= 0, got d={d}, n={n}")
    if d == 0:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in iter_indices(d - 1, n - first):
            yield (first,) + rest


def enumerate_indices(d: int, n: int) -> list[MultiIndex]:
    """All multi-indices of the degree-``n`` node set on the ``d``-simplex.

    Examples
    --------
    >>> enumerate_indices(1, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    return list(iter_indices(d, n))


def count(d: int, n: int) -> int:
    return comb(n + d, d)


def total(alpha: MultiIndex) -> int:
    return sum(alpha)


def remove(alpha: MultiIndex, i: int) -> MultiIndex:
    """Drop entry ``i``; the length must be at least two."""
    if len(alpha) < 2:
        raise IndexError("cannot remove from a multi-index of length 1")
    if not 0 <= i < len(alpha):
        raise IndexError(f"position {i} out of range for length {len(alpha)}")
    return alpha[:i] + alpha[i + 1:]


def insert_zero(alpha: MultiIndex, i: int) -> MultiIndex:
    """Insert a zero so that it becomes entry ``i`` of the result."""
    if not 0 <= i <= len(alpha):
        raise IndexError(f"position {i} out of range for length {len(alpha)}")
    return alpha[:i] + (0,) + alpha[i:]
