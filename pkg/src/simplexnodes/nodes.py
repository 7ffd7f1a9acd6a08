"""Interpolation node sets on the d-simplex.

The main entry point is :func:`recursive_nodeset`, which builds each node
as a weighted average of the lower-dimensional nodes of its facets, with
the weights drawn from the same 1D family that seeds the recursion.
:func:`equispaced_nodeset` and :func:`blp_nodeset` are explicit comparison
families.  :func:`write_nodeset` and :func:`read_nodeset` move node sets to
and from CSV or JSON files.
"""

from __future__ import annotations

import io
import json
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import DegenerateFamilyError, NodeFileError, UnsupportedError
from .multiindex import check_multiindex, count, enumerate_indices, insert_zero, remove
from .nodes1d import MAX_DEGREE, NodeFamily1D, get_family, lgl1d

__all__ = [
    "MAX_DIM",
    "FAMILY_TAGS",
    "NodeSet",
    "NodeCache",
    "recursive_node",
    "recursive_nodeset",
    "equispaced_nodeset",
    "blp_nodeset",
    "make_nodeset",
    "write_nodeset",
    "read_nodeset",
]

MAX_DIM = 7
FAMILY_TAGS = ("equispaced", "lgl", "gl", "lgc", "blp")

_CLAMP_TOL = 1e-14
_SUM_TOL = 1e-8


@dataclass(frozen=True)
class NodeSet:
    """Degree-``degree`` nodes on the ``dim``-simplex in barycentric form.

    ``points[k]`` is the node for ``indices[k]``; ``points`` has shape
    ``(N, dim + 1)`` with ``N = binomial(degree + dim, dim)``.
    """

    dim: int
    degree: int
    family: str
    indices: tuple
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "indices", tuple(tuple(int(a) for a in ix) for ix in self.indices))

    def __len__(self):
        return len(self.indices)

    def min_distance(self):
        from scipy.spatial.distance import pdist

        if len(self) < 2:
            return np.inf
        return float(pdist(self.points).min())


class NodeCache:
    """Memo of recursive nodes keyed by the raw multi-index tuple.

    The 1D family is part of the cache identity; a cache must not be shared
    between families.  Reads are lock-free, inserts are idempotent.
    """

    def __init__(self, family=None):
        self.family = None if family is None else get_family(family).kind
        self._store = {}
        self._lock = threading.Lock()

    def get(self, alpha):
        return self._store.get(alpha)

    def put(self, alpha, b):
        with self._lock:
            return self._store.setdefault(alpha, b)

    def __len__(self):
        return len(self._store)

    def __contains__(self, alpha):
        return alpha in self._store


def _finalize(b):
    if b.min() < 0.0:
        if b.min() < -_CLAMP_TOL:
            raise DegenerateFamilyError(f"node has a negative coordinate {b.min():.3e}")
        b = np.maximum(b, 0.0)
        b /= b.sum()
    b.setflags(write=False)
    return b


def _recursive(alpha, family, cache):
    if cache is not None:
        hit = cache.get(alpha)
        if hit is not None:
            return hit
    m = len(alpha)
    if m == 1:
        b = np.ones(1)
        b.setflags(write=False)
    else:
        n = sum(alpha)
        xn = family[n]
        b = np.zeros(m)
        weight = 0.0
        for i in range(m):
            w = xn[n - alpha[i]]
            if w == 0.0:
                continue
            sub = _recursive(alpha[:i] + alpha[i + 1:], family, cache)
            b[:i] += w * sub[:i]
            b[i + 1:] += w * sub[i:]
            weight += w
        if weight == 0.0:
            raise DegenerateFamilyError(f"all recursion weights vanish for {alpha}")
        b /= weight
        b = _finalize(b)
    if cache is not None:
        b = cache.put(alpha, b)
    return b


def recursive_node(alpha, family="lgl", cache=None):
    """Barycentric coordinates of the recursive node for ``alpha``.

    Parameters
    ----------
    alpha : sequence of int
        Multi-index; its length is ``d + 1`` and its sum the degree.
    family : str or NodeFamily1D
        1D family used both for the facet nodes and for the weights.
    cache : NodeCache, optional
        Shared memo of lower-dimensional nodes.  Results do not depend on
        whether a cache is used.

    Returns
    -------
    numpy.ndarray
        Read-only array of ``len(alpha)`` non-negative values summing to one.
    """
    alpha = check_multiindex(alpha)
    family = get_family(family)
    if cache is not None and cache.family not in (None, family.kind):
        raise ValueError(f"cache belongs to family {cache.family!r}, not {family.kind!r}")
    if len(alpha) - 1 > MAX_DIM:
        raise UnsupportedError(f"dimension {len(alpha) - 1} exceeds the supported maximum {MAX_DIM}")
    if sum(alpha) > MAX_DEGREE:
        raise UnsupportedError(f"degree {sum(alpha)} exceeds the supported maximum {MAX_DEGREE}")
    return _recursive(alpha, family, cache)


def _check_dn(d, n):
    d, n = int(d), int(n)
    if d < 1:
        raise ValueError(f"dimension must be at least 1, got {d}")
    if d > MAX_DIM:
        raise UnsupportedError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    if n < 1:
        raise ValueError(f"degree must be at least 1, got {n}")
    if n > MAX_DEGREE:
        raise UnsupportedError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
    return d, n


def recursive_nodeset(d, n, family="lgl", cache=None):
    d, n = _check_dn(d, n)
    family = get_family(family)
    if cache is None:
        cache = NodeCache(family)
    indices = enumerate_indices(d, n)
    points = np.array([recursive_node(a, family, cache) for a in indices])
    return NodeSet(d, n, family.kind, indices, points)


def equispaced_nodeset(d, n):
    d, n = _check_dn(d, n)
    indices = enumerate_indices(d, n)
    return NodeSet(d, n, "equispaced", indices, np.array(indices, dtype=float) / n)


def _blp_node(alpha, x):
    zeros = [j for j, a in enumerate(alpha) if a == 0]
    if zeros:
        j = zeros[0]
        sub = _blp_node(remove(alpha, j), x)
        return np.insert(sub, j, 0.0)
    m = len(alpha)
    if m == 1:
        return np.ones(1)
    v = x[list(alpha)]
    return (1.0 + m * v - v.sum()) / m


def blp_nodeset(d, n):
    """Explicit LGL-based nodes of Blyth, Luo and Pozrikidis.

    A node with every index positive is placed by a closed-form correction of
    the LGL coordinates; nodes with a zero index are taken from the same rule
    on the facet and embedded.
    """
    d, n = _check_dn(d, n)
    x = lgl1d(n)
    indices = enumerate_indices(d, n)
    points = np.array([_finalize(_blp_node(a, x)) for a in indices])
    return NodeSet(d, n, "blp", indices, points)


def make_nodeset(family, d, n):
    """Build a node set from a family tag or load one from ``external:<path>``."""
    if isinstance(family, NodeSet):
        return family
    if isinstance(family, NodeFamily1D):
        return recursive_nodeset(d, n, family)
    if family == "equispaced":
        return equispaced_nodeset(d, n)
    if family == "blp":
        return blp_nodeset(d, n)
    if family in ("lgl", "gl", "lgc"):
        return recursive_nodeset(d, n, family)
    if isinstance(family, str) and family.startswith("external:"):
        return read_nodeset(family[len("external:"):])
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILY_TAGS} or 'external:<path>'")


# --- file I/O ---------------------------------------------------------------

_HEADER = re.compile(r"^#\s*dim=(\d+)\s+degree=(\d+)\s+family=(\S+)\s*$")


def write_nodeset(ns, fmt="csv", destination=None, cartesian=None):
    """Write ``ns`` as CSV or JSON.

    ``destination`` may be a path, a text stream or ``None`` (return the
    text).  ``cartesian`` optionally supplies an ``(N, dim)`` array appended
    as extra columns (CSV) or an extra ``cartesian`` field (JSON).
    """
    if fmt == "csv":
        lines = [f"# dim={ns.dim} degree={ns.degree} family={ns.family}"]
        for k, (alpha, b) in enumerate(zip(ns.indices, ns.points)):
            row = [str(a) for a in alpha] + [f"{v:.17g}" for v in b]
            if cartesian is not None:
                row += [f"{v:.17g}" for v in cartesian[k]]
            lines.append(",".join(row))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        obj = {
            "dim": ns.dim,
            "degree": ns.degree,
            "family": ns.family,
            "indices": [list(a) for a in ns.indices],
            "points": ns.points.tolist(),
        }
        if cartesian is not None:
            obj["cartesian"] = np.asarray(cartesian).tolist()
        text = json.dumps(obj, indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if destination is None:
        return text
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(text)
    else:
        destination.write(text)
    return None


def _validate(dim, degree, family, indices, points, origin):
    expected = count(dim, degree)
    if len(points) != expected:
        raise NodeFileError(f"{origin}: expected {expected} nodes for dim={dim}, degree={degree}, got {len(points)}")
    for row, (alpha, b) in enumerate(zip(indices, points), start=1):
        if len(alpha) != dim + 1 or len(b) != dim + 1:
            raise NodeFileError(f"{origin}: row {row} has the wrong number of entries")
        if any(a < 0 for a in alpha) or sum(alpha) != degree:
            raise NodeFileError(f"{origin}: row {row} has an invalid multi-index {tuple(alpha)}")
        if not np.all(np.isfinite(b)):
            raise NodeFileError(f"{origin}: row {row} has non-finite coordinates")
        if abs(sum(b) - 1.0) > _SUM_TOL:
            raise NodeFileError(f"{origin}: row {row} coordinates sum to {sum(b):.12g}, not 1")
        if min(b) < -_SUM_TOL:
            raise NodeFileError(f"{origin}: row {row} has a negative coordinate")
    if len(set(map(tuple, indices))) != len(indices):
        raise NodeFileError(f"{origin}: duplicate multi-indices")
    return NodeSet(dim, degree, family, indices, np.array(points, dtype=float))


def _parse_csv(text, origin):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise NodeFileError(f"{origin}: empty file")
    m = _HEADER.match(lines[0])
    if m is None:
        raise NodeFileError(f"{origin}: missing '# dim=<d> degree=<n> family=<tag>' header")
    dim, degree, family = int(m.group(1)), int(m.group(2)), m.group(3)
    indices, points = [], []
    for row, line in enumerate(lines[1:], start=1):
        if line.startswith("#"):
            continue
        cells = line.split(",")
        if len(cells) not in (2 * (dim + 1), 2 * (dim + 1) + dim):
            raise NodeFileError(f"{origin}: row {row} has {len(cells)} columns")
        try:
            alpha = [int(c) for c in cells[: dim + 1]]
            b = [float(c) for c in cells[dim + 1: 2 * (dim + 1)]]
        except ValueError as exc:
            raise NodeFileError(f"{origin}: row {row} is not numeric ({exc})") from None
        indices.append(alpha)
        points.append(b)
    return dim, degree, family, indices, points


def _parse_json(text, origin):
    try:
        obj = json.loads(text)
        dim, degree, family = int(obj["dim"]), int(obj["degree"]), str(obj["family"])
        indices = [[int(a) for a in ix] for ix in obj["indices"]]
        points = [[float(v) for v in p] for p in obj["points"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise NodeFileError(f"{origin}: malformed JSON node set ({exc})") from None
    if len(indices) != len(points):
        raise NodeFileError(f"{origin}: 'indices' and 'points' differ in length")
    return dim, degree, family, indices, points


def read_nodeset(source):
    """Read a node set written by :func:`write_nodeset` or by hand.

    ``source`` is a path or a text stream.  The format is detected from the
    first non-blank character.  Files whose family tag is not a built-in tag
    are labelled ``external:<tag>``.

    Raises
    ------
    NodeFileError
        If the file is malformed, a row's coordinates do not sum to one, or
        the point count does not match the header.
    """
    if isinstance(source, (str, Path)):
        origin = str(source)
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise NodeFileError(f"{origin}: {exc.strerror}") from None
    else:
        origin = getattr(source, "name", "<stream>")
        text = source.read()
    parse = _parse_json if text.lstrip().startswith("{") else _parse_csv
    dim, degree, family, indices, points = parse(text, origin)
    if family not in FAMILY_TAGS and not family.startswith("external:"):
        family = f"external:{family}"
    return _validate(dim, degree, family, indices, points, origin)
