"""Recursively defined interpolation nodes on the simplex and their quality metrics."""

from .estimators import LagrangeFeatures, SimplexInterpolator
from .exceptions import (
    DegenerateDegreeError,
    DegenerateFamilyError,
    DomainError,
    NodeFileError,
    NumericalError,
    SimplexNodesError,
    UnisolvencyError,
    UnsupportedError,
)
from .femcond import (
    ConditionReport,
    cond2,
    condition_table_row,
    lambda2,
    mass_matrix,
    nodal_gradient,
    nodal_laplacian,
    stiffness_matrix,
)
from .geometry import SimplexGeometry, bary_to_cart, cart_to_bary, reference_simplex
from .interp import (
    LagrangeOperator,
    LebesgueResult,
    build_lagrange,
    f_A,
    f_B,
    interpolate,
    interpolation_error,
    lagrange_eval,
    lebesgue_constant,
    lebesgue_function,
)
from .modal import ModalBasis, pkd_eval, pkd_grad
from .multiindex import enumerate_indices, insert_zero, remove, total
from .nodes import (
    NodeCache,
    NodeSet,
    blp_nodeset,
    equispaced_nodeset,
    make_nodeset,
    read_nodeset,
    recursive_node,
    recursive_nodeset,
    write_nodeset,
)
from .nodes1d import NodeFamily1D, equispaced1d, gauss_jacobi, get_family, gl1d, lgc1d, lgl1d
from .quadrature import SimplexQuadrature, simplex_quadrature

__version__ = "0.1.0"
