"""
格点核心模块
耦合核、自旋构型、哈密顿量与相互作用求和
"""

from .errors import (
    DimensionMismatchError,
    WindowTooSmallError,
    SizeGuardError,
    PreconditionError,
    StructuralError,
    ConfigError,
    StepBudgetExceededError,
)
from .coupling import CouplingKernel, Site, as_coords, coords_to_sites, coupling, interaction_sum
from .configuration import SpinConfiguration, flip_set
from .hamiltonian import (
    PairConvention,
    HamiltonianParams,
    DEFAULT_CUTOFF,
    hamiltonian,
    flip_energy_difference,
    boundary_field,
    window_coupling,
    truncation_tail_bound,
    cutoff_sensitivity,
)

__all__ = [
    'DimensionMismatchError', 'WindowTooSmallError', 'SizeGuardError',
    'PreconditionError', 'StructuralError', 'ConfigError', 'StepBudgetExceededError',
    'CouplingKernel', 'Site', 'as_coords', 'coords_to_sites', 'coupling', 'interaction_sum',
    'SpinConfiguration', 'flip_set',
    'PairConvention', 'HamiltonianParams', 'DEFAULT_CUTOFF', 'hamiltonian',
    'flip_energy_difference', 'boundary_field', 'window_coupling',
    'truncation_tail_bound', 'cutoff_sensitivity',
]
