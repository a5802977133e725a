"""One-way information deficit (OWID), discord and concurrence for two-qubit
Bell-diagonal and X states: closed forms, a numerical measurement oracle,
phase-flip dynamics and constant-OWID surfaces."""

from ._backend import BACKEND
from .channels import (
    EventReport,
    PhaseFlipChannel,
    apply_channel_kraus,
    apply_phase_flip_x,
    concurrence_under_phase_flip,
    dynamics_trajectory,
    find_crossing,
    find_sudden_death,
    kraus_phase_flip,
    owid_under_phase_flip,
    p_of_time,
)
from .closed_form import (
    concurrence_x_state,
    entropy_bell_diagonal,
    entropy_x_state,
    f_phi_theta,
    min_measured_entropy_bell,
    min_measured_entropy_x,
    owid_bell_diagonal,
    owid_x_state,
)
from .errors import ConvergenceError, DomainError, PreconditionError
from .geometry import LevelSurfaceSample, SurfaceSpec, export_surface, owid_field, sample_level_surface
from .linalg import DensityMatrix, partial_trace_a, partial_trace_b, von_neumann_entropy
from .oracle import (
    DEFAULT_CONFIG,
    OptimizerConfig,
    concurrence_oracle,
    discord_oracle,
    min_measured_entropy_x_reduced,
    owid_oracle,
    verify_corner_claim,
)
from .states import (
    BellDiagonalParams,
    XStateParams,
    bell_diagonal_density,
    validate_corner_condition,
    x_state_density,
)

__version__ = "0.1.0"
