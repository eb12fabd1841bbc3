"""Discrete-time quantum walks on a line with temporal disorder and a ratchet pawl."""

from .dsl import ParseError, format_schedule, parse_angle, parse_schedule
from .engine import (
    Disordered,
    Fixed,
    PawlConfig,
    PawlDisordered,
    PawlFixed,
    PawlMixed,
    ResolvedCoinField,
    RngStream,
    Schedule,
    Term,
    apply_step,
    coin_matrix,
    draw_theta,
    resolve_coin_field,
    run_schedule,
)
from .experiment import (
    EnsembleSummary,
    ExperimentConfig,
    emit,
    preset,
    preset_family,
    run_band_structure,
    run_experiment,
)
from .observables import (
    Distribution,
    entanglement_entropy,
    position_mean,
    position_sd,
    probability_distribution,
    reduced_coin_density,
    symmetry_defect,
)
from .spectral import (
    averaged_group_velocity,
    dispersion,
    group_velocity,
    max_spread,
    momentum_step_matrix,
)
from .state import CoinKind, InitialSpec, WalkState, WindowError, new_state, norm, support

__version__ = "0.1.0"
