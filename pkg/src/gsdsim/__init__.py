"""Single-photon two-way signaling through a cascade of Mach-Zehnder interferometers."""
from .circuit import (
    DelaySchedule,
    LeafDistribution,
    MzTree,
    build_tree,
    delay_schedule,
    leaf_delay,
    parity_route,
    propagate,
)
from .infotheory import (
    GainReport,
    analytic_H_B,
    analytic_total,
    enumerate_gains,
    optimal_m,
    shannon_entropy,
    table1_report,
)
from .kernels import BACKEND
from .noise import PhysicalParams, loss_curve, monte_carlo_rate, success_rate
from .optics import StageNoise, TwoPortState, mz_transfer
from .protocol import (
    Agent,
    DetectorAssignment,
    GameOutcome,
    Knowledge,
    decode_clicker,
    decode_silent,
    level_parity_assignment,
    play_round,
    run_game,
)
from .timing import Geometry, classical_bits_within, quantum_window, validate_window

__version__ = "0.1.0"
