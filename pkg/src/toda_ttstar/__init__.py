"""Toda-type tt*-structures: frames, classification, radial solver, W-algebra data."""

from .classify import (
    AsymmetryClass,
    CanonicalForm,
    ClassificationReport,
    NormalizedTuple,
    ReducedSystem,
    build_dft_frame_change,
    build_shift_operator,
    canonical_rotation,
    canonicalize_to_toda_frame,
    classify_frame,
    classify_tuple,
    collapse_table1,
    collapse_two_unknown_cases,
    cyclic_equivalent,
    detect_toda_l,
    determine_l,
    normalize_l,
    phi_eigenvalue_cycle,
    reduce_system,
    rotate,
)
from .core import (
    FrameStructure,
    KappaMatrix,
    ValidityReport,
    build_toda_frame,
    check_zn_symmetry,
    compute_kappa,
    omega_automorphism,
    validate_ttstar_frame,
    verify_isomorphism,
)
from .cyclotomic import CyclotomicMatrix
from .errors import (
    AntiSymmetryError,
    ConvergenceError,
    FrameError,
    InvalidDataError,
    NotFixedPointError,
    TodaError,
)
from .solver import (
    AsymptoticData,
    GridSpec,
    RadialSolution,
    SolverOptions,
    check_anti_symmetry,
    extract_asymptotics,
    solve_radial_toda,
    toda_residual,
)
from .walgebra import MinimalModelData, ceff_consistency, minimal_model_data

__version__ = "0.1.0"

__all__ = [
    "AntiSymmetryError",
    "AsymmetryClass",
    "AsymptoticData",
    "CanonicalForm",
    "ClassificationReport",
    "ConvergenceError",
    "CyclotomicMatrix",
    "FrameError",
    "FrameStructure",
    "GridSpec",
    "InvalidDataError",
    "KappaMatrix",
    "MinimalModelData",
    "NormalizedTuple",
    "NotFixedPointError",
    "RadialSolution",
    "ReducedSystem",
    "SolverOptions",
    "TodaError",
    "ValidityReport",
    "build_dft_frame_change",
    "build_shift_operator",
    "build_toda_frame",
    "canonical_rotation",
    "canonicalize_to_toda_frame",
    "ceff_consistency",
    "check_anti_symmetry",
    "check_zn_symmetry",
    "classify_frame",
    "classify_tuple",
    "collapse_table1",
    "collapse_two_unknown_cases",
    "compute_kappa",
    "cyclic_equivalent",
    "detect_toda_l",
    "determine_l",
    "extract_asymptotics",
    "minimal_model_data",
    "normalize_l",
    "omega_automorphism",
    "phi_eigenvalue_cycle",
    "reduce_system",
    "rotate",
    "solve_radial_toda",
    "toda_residual",
    "validate_ttstar_frame",
    "verify_isomorphism",
]
