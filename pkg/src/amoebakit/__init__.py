"""Amoebas, contours and the logarithmic Gauss map of Laurent polynomials.

The main entry points are re-exported here; see the submodules for the rest.
"""

from .amoeba import amoeba_samples, complement_components, contour_points, emit
from .elim import discriminant, gcd, resultant, squarefree_decomposition, univariate_roots
from .gauss import (
    ProjectiveDirection,
    fiber,
    gauss_degree,
    gauss_discriminant,
    projection_polynomial,
)
from .newton import is_nondegenerate, lattice_points, newton_polytope, normalized_volume
from .poly import LaurentPoly, ParseError, parse
from .series import diagonal, expand, expansion_spec, morse_prefactor_check, rate_check
from .singularity import (
    check_multiplicity_budget,
    jacobian_hessian_identity_check,
    milnor_number,
    phase_critical_points,
)
from .solve import solve_torus

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly",
    "ParseError",
    "ProjectiveDirection",
    "amoeba_samples",
    "check_multiplicity_budget",
    "complement_components",
    "contour_points",
    "diagonal",
    "discriminant",
    "emit",
    "expand",
    "expansion_spec",
    "fiber",
    "gauss_degree",
    "gauss_discriminant",
    "gcd",
    "is_nondegenerate",
    "jacobian_hessian_identity_check",
    "lattice_points",
    "milnor_number",
    "morse_prefactor_check",
    "newton_polytope",
    "normalized_volume",
    "parse",
    "phase_critical_points",
    "projection_polynomial",
    "rate_check",
    "resultant",
    "solve_torus",
    "squarefree_decomposition",
    "univariate_roots",
]
