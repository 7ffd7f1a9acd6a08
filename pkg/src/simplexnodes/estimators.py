"""scikit-learn compatible wrappers around a simplex node set.

:class:`LagrangeFeatures` turns Cartesian points into Lagrange basis values
and composes with pipelines like any polynomial feature map.
:class:`SimplexInterpolator` fits nodal values to samples and predicts the
polynomial interpolant.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .geometry import reference_simplex
from .interp import build_lagrange, lagrange_eval
from .nodes import make_nodeset

__all__ = ["LagrangeFeatures", "SimplexInterpolator"]


class _NodalMixin:
    def _build(self):
        ns = make_nodeset(self.family, self.dim, self.degree)
        if ns.dim != self.dim:
            raise ValueError(f"node set has dimension {ns.dim}, estimator was configured for {self.dim}")
        self.nodes_ = ns
        self.geometry_ = reference_simplex(self.geometry, ns.dim)
        self.operator_ = build_lagrange(ns)
        self.n_features_in_ = ns.dim

    def _basis_values(self, X):
        X = check_array(X, ensure_min_samples=1)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return lagrange_eval(self.operator_, self.geometry_.cart_to_bary(X))

    def node_coordinates(self):
        """Cartesian coordinates of the nodes on the configured geometry."""
        ns = make_nodeset(self.family, self.dim, self.degree)
        return reference_simplex(self.geometry, ns.dim).bary_to_cart(ns.points)


class LagrangeFeatures(_NodalMixin, TransformerMixin, BaseEstimator):
    """Lagrange basis values of a simplex node set as features.

    Parameters
    ----------
    dim : int
        Simplex dimension.
    degree : int
        Polynomial degree of the interpolation space.
    family : str
        ``"lgl"``, ``"lgc"``, ``"gl"``, ``"equispaced"``, ``"blp"`` or
        ``"external:<path>"``.
    geometry : str
        Reference simplex the Cartesian inputs live on.
    """

    def __init__(self, dim=2, degree=3, family="lgl", geometry="unit"):
        self.dim = dim
        self.degree = degree
        self.family = family
        self.geometry = geometry

    def fit(self, X=None, y=None):
        self._build()
        if X is not None:
            X = check_array(X)
            if X.shape[1] != self.n_features_in_:
                raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        self.n_output_features_ = len(self.nodes_)
        return self

    def transform(self, X):
        check_is_fitted(self, "operator_")
        return self._basis_values(X)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "operator_")
        return np.array(["phi_" + "_".join(map(str, a)) for a in self.nodes_.indices], dtype=object)


class SimplexInterpolator(_NodalMixin, RegressorMixin, BaseEstimator):
    """Polynomial interpolant on a simplex node set.

    ``fit`` solves for the nodal values in the least-squares sense.  When the
    samples are exactly the nodes this is interpolation; use
    :meth:`node_coordinates` to obtain them.
    """

    def __init__(self, dim=2, degree=3, family="lgl", geometry="unit"):
        self.dim = dim
        self.degree = degree
        self.family = family
        self.geometry = geometry

    def fit(self, X, y):
        self._build()
        X, y = check_X_y(X, y, y_numeric=True)
        if len(X) < len(self.nodes_):
            raise ValueError(f"need at least {len(self.nodes_)} samples, got {len(X)}")
        phi = self._basis_values(X)
        self.nodal_values_, *_ = np.linalg.lstsq(phi, y, rcond=None)
        self.coef_ = self.operator_.modal_coefficients(self.nodal_values_)
        return self

    def fit_function(self, f):
        """Interpolate ``f``, a callable on Cartesian points ``(P, dim)``."""
        X = self.node_coordinates()
        return self.fit(X, f(X))

    def predict(self, X):
        check_is_fitted(self, "nodal_values_")
        return self._basis_values(X) @ self.nodal_values_
