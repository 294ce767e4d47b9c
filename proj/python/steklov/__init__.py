"""Steklov-type eigenvalues (Δu = u, ∂u/∂ν = λu) on smoothly deformed disks.

Thin re-export of the compiled core: Fourier shapes, the blended radial disk
map, P1 assembly of the pulled-back forms, the pencil eigensolver, cluster
derivatives of the elementary symmetric functions, criticality residuals and
the constrained gradient flow.
"""

from ._core import (
    AssembledPencil,
    BoundaryFrame,
    Constraint,
    CriticalityReport,
    DiffeoMap,
    DiskMesh,
    EigenCluster,
    FlowParams,
    FlowState,
    GradientDensity,
    Normalization,
    NumericalError,
    PerturbSpec,
    ShapeSpec,
    SpectralResult,
    ValidationError,
    __version__,
    assemble,
    bc_residual,
    boundary_density,
    build_disk_mesh,
    constrained_flow,
    criticality_report,
    d_perimeter,
    d_surface_functional,
    d_volume,
    detect_cluster,
    elementary_symmetric,
    fd_derivative,
    gamma_functions,
    hadamard_derivative,
    oracle,
    pencil_residual,
    perimeter,
    perturbed,
    renormalize,
    solve_pencil,
    surface_functional,
    sym_functions,
    volume,
)

__all__ = [
    "AssembledPencil",
    "BoundaryFrame",
    "Constraint",
    "CriticalityReport",
    "DiffeoMap",
    "DiskMesh",
    "EigenCluster",
    "FlowParams",
    "FlowState",
    "GradientDensity",
    "Normalization",
    "NumericalError",
    "PerturbSpec",
    "ShapeSpec",
    "SpectralResult",
    "ValidationError",
    "__version__",
    "assemble",
    "bc_residual",
    "boundary_density",
    "build_disk_mesh",
    "constrained_flow",
    "criticality_report",
    "d_perimeter",
    "d_surface_functional",
    "d_volume",
    "detect_cluster",
    "elementary_symmetric",
    "fd_derivative",
    "gamma_functions",
    "hadamard_derivative",
    "oracle",
    "pencil_residual",
    "perimeter",
    "perturbed",
    "renormalize",
    "solve_pencil",
    "surface_functional",
    "sym_functions",
    "volume",
]
