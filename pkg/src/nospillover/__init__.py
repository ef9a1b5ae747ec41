"""No-spillover eigenvalue updating for structured matrix pencils.

Compute perturbations (dM, dK) of a pencil lambda*M + K that move a chosen
set of eigenvalues (or a deflating pair) to prescribed targets while the
complementary deflating pair provably stays put, preserving symmetry
structures (symmetric, Hermitian, *-odd/even, T-odd/even and
skew-Hamiltonian/Hamiltonian pencils) along the way.
"""

from .errors import NoSpilloverError
from .linalg import eig_pencil, herm_eigs, pseudoinverse, solve
from .pencil import (
    ALL_TAGS,
    HERMITIAN,
    STAR_EVEN,
    STAR_ODD,
    SYMMETRIC,
    T_EVEN,
    T_ODD,
    DeflatingPair,
    StructuredPencil,
    StructureTag,
    classify_structure,
    complete_deflating_pair,
    deflation_residual,
    gramians,
    normalize_columns,
    rayleigh_eigenvalue,
    realify_eigenpair,
)
from .shh import EigGrouping, SHHPencil, shh_update, star_shh_core, t_shh_update
from .special import (
    QuadraticSpec,
    hermitian_update,
    select_psd_params,
    solve_quadratic,
    star_even_update,
    star_odd_update,
    t_even_real_update,
    t_odd_real_update,
)
from .structured import (
    CoreSolution,
    build_update_basis,
    change_gramian,
    complete_core,
    parametrized_core,
    scaled_gramian_core,
    structured_update,
)
from .unstructured import (
    UpdateProblem,
    UpdateResult,
    dual_basis_update,
    solve_general,
    target_defect,
)
from .verify import Certificate, certify, spectrum_match

__version__ = "0.1.0"

__all__ = [
    "ALL_TAGS",
    "Certificate",
    "CoreSolution",
    "DeflatingPair",
    "EigGrouping",
    "HERMITIAN",
    "NoSpilloverError",
    "QuadraticSpec",
    "SHHPencil",
    "STAR_EVEN",
    "STAR_ODD",
    "SYMMETRIC",
    "StructureTag",
    "StructuredPencil",
    "T_EVEN",
    "T_ODD",
    "UpdateProblem",
    "UpdateResult",
    "build_update_basis",
    "certify",
    "change_gramian",
    "classify_structure",
    "complete_core",
    "complete_deflating_pair",
    "deflation_residual",
    "dual_basis_update",
    "eig_pencil",
    "gramians",
    "herm_eigs",
    "hermitian_update",
    "normalize_columns",
    "parametrized_core",
    "pseudoinverse",
    "rayleigh_eigenvalue",
    "realify_eigenpair",
    "scaled_gramian_core",
    "select_psd_params",
    "shh_update",
    "solve",
    "solve_general",
    "solve_quadratic",
    "spectrum_match",
    "star_even_update",
    "star_odd_update",
    "star_shh_core",
    "structured_update",
    "t_even_real_update",
    "t_odd_real_update",
    "t_shh_update",
    "target_defect",
]
