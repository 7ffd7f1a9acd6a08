from math import factorial, sqrt

import numpy as np
import pytest

from simplexnodes import bary_to_cart, build_lagrange, cart_to_bary, mass_matrix, recursive_nodeset, reference_simplex
from simplexnodes.exceptions import DomainError, UnsupportedError
from simplexnodes.femcond import cond2


def test_biunit_vertices():
    g = reference_simplex("biunit", 2)
    np.testing.assert_array_equal(g.vertices, [[-1, -1], [1, -1], [-1, 1]])
    for d in (1, 2, 3, 4):
        g = reference_simplex("biunit", d)
        assert np.all(g.vertices >= -1)
        assert np.all(g.vertices.sum(axis=1) <= 2 - d + 1e-15)
        assert abs(g.volume - 2.0 ** d / factorial(d)) <= 1e-14


@pytest.mark.parametrize("d", [2, 3])
def test_equilateral(d):
    g = reference_simplex("equilateral", d)
    v = g.vertices
    dist = np.linalg.norm(v[:, None] - v[None, :], axis=2)
    off = dist[~np.eye(d + 1, dtype=bool)]
    np.testing.assert_allclose(off, 2.0, atol=1e-14)
    np.testing.assert_allclose(v.mean(axis=0), 0.0, atol=1e-15)
    if d == 2:
        np.testing.assert_allclose(np.linalg.norm(v, axis=1), 2 / sqrt(3), atol=1e-15)


def test_unit_volume_and_errors():
    assert abs(reference_simplex("unit", 3).volume - 1 / 6) <= 1e-16
    with pytest.raises((UnsupportedError, ValueError)):
        reference_simplex("equilateral", 4)
    with pytest.raises(ValueError):
        reference_simplex("regular", 2)


def test_examples():
    g = reference_simplex("biunit", 2)
    np.testing.assert_array_equal(bary_to_cart([1, 0, 0], g), [-1, -1])
    e = reference_simplex("equilateral", 2)
    np.testing.assert_allclose(bary_to_cart([1 / 3] * 3, e), [0, 0], atol=1e-15)
    u = reference_simplex("unit", 2)
    np.testing.assert_allclose(bary_to_cart([0.5, 0.5, 0], u), [0.5, 0], atol=1e-16)


@pytest.mark.parametrize("kind,d", [(k, d) for k in ("unit", "biunit", "equilateral") for d in (1, 2, 3)
                                     if not (k == "equilateral" and d == 1)])
def test_round_trip(kind, d):
    g = reference_simplex(kind, d)
    rng = np.random.default_rng(d)
    b = rng.dirichlet(np.ones(d + 1), size=1000)
    back = cart_to_bary(bary_to_cart(b, g), g)
    assert np.max(np.abs(back - b)) <= 1e-13
    x = bary_to_cart(b, g)
    assert np.max(np.abs(bary_to_cart(cart_to_bary(x, g), g) - x)) <= 1e-12
    np.testing.assert_allclose(cart_to_bary(g.vertices, g), np.eye(d + 1), atol=1e-14)
    np.testing.assert_allclose(cart_to_bary(g.vertices.mean(axis=0), g), np.full(d + 1, 1 / (d + 1)), atol=1e-14)


def test_outside_point():
    g = reference_simplex("unit", 2)
    with pytest.raises(DomainError):
        cart_to_bary([0.6, 0.6], g)
    inside = cart_to_bary([[1.0 + 5e-13, 0.0]], g)
    assert inside.min() >= 0.0
    with pytest.raises(ValueError):
        bary_to_cart([0.5, 0.5], g)


def test_bary_gradients_sum_to_zero():
    for kind in ("unit", "biunit", "equilateral"):
        g = reference_simplex(kind, 3)
        G = g.bary_gradients()
        assert G.shape == (4, 3)
        np.testing.assert_allclose(G.sum(axis=0), 0.0, atol=1e-14)
        np.testing.assert_allclose(g.vertices.T @ G, np.eye(3), atol=1e-14)


@pytest.mark.parametrize("d,n", [(2, 4), (2, 9), (3, 5)])
def test_mass_condition_affine_invariant(d, n):
    op = build_lagrange(recursive_nodeset(d, n))
    ku = cond2(mass_matrix(op, g=reference_simplex("unit", d))).value
    kb = cond2(mass_matrix(op, g=reference_simplex("biunit", d))).value
    assert abs(ku - kb) <= 1e-10 * ku
    Mb = mass_matrix(op, g=reference_simplex("biunit", d))
    assert abs(Mb.sum() - 2.0 ** d / factorial(d)) <= 1e-12
