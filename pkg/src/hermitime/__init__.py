"""Discretized time, momentum, kinetic and displacement operators on 1D grids
and truncated Fock spaces, with experiments that check their closed forms."""

from .canonical import (
    ParticleParams,
    displacement_operator,
    expected_time_closed_form,
    heisenberg_rate,
    kinetic_operator,
    momentum_operator,
    time_operator,
    velocity_operator,
)
from .config import EXPERIMENTS, ExperimentConfig, parse_config
from .errors import (
    ConfigError,
    DomainError,
    HermitimeError,
    InsufficientDomainError,
    MismatchError,
    ZeroNormError,
)
from .experiments import run_experiment
from .fock import (
    FockSpace,
    FockVector,
    check_jump_inequality,
    fock_expectation,
    jump_time_bound,
    lowering_matrix,
    momentum_ladder,
    oscillator_eigenfunction,
    raising_matrix,
    time_ladder,
)
from .grid import (
    Grid,
    PlaneWaveParams,
    Wavefunction,
    expectation,
    inner_product,
    make_uniform_grid,
    normalize,
    sample_plane_wave,
)
from .operators import (
    LinearOperator,
    add,
    adjoint,
    commutator,
    compose,
    first_derivative,
    hermiticity_residual,
    scale,
    second_derivative,
)
from .report import ExperimentReport, emit_report

__version__ = "0.1.0"
