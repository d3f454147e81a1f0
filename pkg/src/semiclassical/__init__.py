"""Bound-state spectra of 1-D wells from an improved semiclassical quantization condition."""

from ._kernels import NUMBA_AVAILABLE
from .action import (
    QuadratureConfig,
    QuadratureWarning,
    action,
    action_closed_form,
    action_derivative,
    gradient_integral,
)
from .corrections import (
    CorrectionEstimate,
    adiabatic_validity,
    delta1_closed_form,
    delta1_direct,
    delta1_from_action,
    delta_series,
    resum_delta,
)
from .oracle import GridConfig, eigenvalues_fd, sturm_count
from .potentials import (
    ClassFiveCoefficients,
    PotentialSpec,
    QuantumScale,
    WellFrame,
    analytic_spectrum,
    derivative,
    evaluate,
    load_tabulated,
    make_catalog_potential,
    read_tabulated_csv,
    second_derivative,
    turning_points,
    well_frame,
)
from .solver import (
    ORDERS,
    UNBOUNDED,
    Level,
    SolverConfig,
    SolverError,
    compare,
    count_levels,
    solve_level,
    solve_spectrum,
)

__version__ = "0.1.0"
