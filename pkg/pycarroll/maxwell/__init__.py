"""Carrollian electromagnetism: symbolic residuals and a log-time grid solver."""

from pycarroll.maxwell.config import (
    CFLViolation,
    SimConfig,
    cfl_bound,
    load_config,
    parse_config,
)
from pycarroll.maxwell.fdtd import (
    EMGridState,
    SimulationResult,
    fdtd_step,
    initial_state,
    read_field_dump,
    run_simulation,
    write_field_dump,
)
from pycarroll.maxwell.symbolic import (
    EMFieldSymbolic,
    FieldConfigError,
    FormulationMismatch,
    assemble_field_strength,
    duality,
    local_maxwell_residual,
    maxwell_residual,
    plane_wave,
    rescale_time,
    star_field_strength,
    wave_residual,
)

__all__ = [
    "CFLViolation",
    "EMFieldSymbolic",
    "EMGridState",
    "FieldConfigError",
    "FormulationMismatch",
    "SimConfig",
    "SimulationResult",
    "assemble_field_strength",
    "cfl_bound",
    "duality",
    "fdtd_step",
    "initial_state",
    "load_config",
    "local_maxwell_residual",
    "maxwell_residual",
    "parse_config",
    "plane_wave",
    "read_field_dump",
    "rescale_time",
    "run_simulation",
    "star_field_strength",
    "wave_residual",
    "write_field_dump",
]
