"""Axial-gauge Yang-Mills Wilson loop computations on holomorphic fields.

Modules: lie (orthonormal algebra bases), bargmann (weighted first-order
inner products and orthogonalized monomial bases), surfaces (parametrized
surfaces, areas), functionals (kernel functionals, abelian loops,
duality), gridholonomy (lattice traversal identity, ordered surface
products), measure (field sampling, reweighting density, Wilson MC),
limits (area laws and the quark potential), cli (front end).
"""

__version__ = "0.1.0"

from .lie import LieBasis, casimir_scalar
from .surfaces import (make_surface, rectangle, tilted_plane, spherical_cap,
                       polynomial_graph, area, heat_kernel_area)
from .bargmann import gram_schmidt, fd_inner, BasisCache
from .functionals import (psi_weight, xi_kernel, nu_surface,
                          abelian_loop_expectation, duality_angle)
from .gridholonomy import (build_grid, grid_identity_check,
                           builtin_connection, boundary_holonomy,
                           surface_ordered_product)
from .measure import (MeasureConfig, FieldSample, sample_field, density_Y,
                      wilson_J, u_path, mc_expectation, MCEstimate)
from .limits import (AreaLawResult, area_law_limit, rect_wilson,
                     quark_potential, dual_area_law)
