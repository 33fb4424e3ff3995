"""Matrix-free tensor-product multigrid for the anisotropic Helmholtz equation."""

from ._core import (
    ExperimentResult,
    ExperimentSpec,
    MemoryCapError,
    ModelParameters,
    Policy,
    Rhs,
    Solver,
    SolveReport,
    Table,
    TableBounds,
    TableResult,
    anisotropy,
    apply_operator,
    derive_parameters,
    estimate_memory_bytes,
    level_count,
    run_experiment,
    run_table,
    solve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
