"""Radial tt*-Toda solver and diagnostics."""

from .kernels import BACKEND, available_backends
from .radial import (
    AsymptoticData,
    GridSpec,
    RadialSolution,
    RefinementReport,
    SolverOptions,
    anti_symmetry_sup,
    assemble_system,
    check_anti_symmetry,
    continuum_residual,
    extract_asymptotics,
    parse_solve_request,
    read_csv,
    refinement_ratio,
    solution_to_csv,
    solve_radial_toda,
    sum_sup,
    toda_residual,
    write_csv,
)

__all__ = [
    "BACKEND",
    "AsymptoticData",
    "GridSpec",
    "RadialSolution",
    "RefinementReport",
    "SolverOptions",
    "anti_symmetry_sup",
    "assemble_system",
    "available_backends",
    "check_anti_symmetry",
    "continuum_residual",
    "extract_asymptotics",
    "parse_solve_request",
    "read_csv",
    "refinement_ratio",
    "solution_to_csv",
    "solve_radial_toda",
    "sum_sup",
    "toda_residual",
    "write_csv",
]
