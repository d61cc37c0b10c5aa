"""Coupled attitude dynamics of a rigid body carrying two elastic rectangular
plates, with a dissipative stabilizing feedback.

The library builds the modal (sine eigenbasis) reduction of the plate
equations, assembles the coupled body/plate equations of motion, applies the
gyroscopic-cancelling feedback torque, and certifies numerically that the
quadratic energy functional decays at exactly -k |omega|^2 along the closed
loop.  A small CLI (``platespin``) runs configured scenarios and gain sweeps,
writing per-sample CSV files and a gnuplot script.
"""

from .control import ControlTorque, closed_loop_rhs, feedback, make_closed_loop_kernel
from .dynamics import (PlateVelocityMoments, State, StateDerivative, StateLayout,
                       angular_acceleration, cross_momentum, elastic_reaction,
                       kinematics_rhs, modal_acceleration, momentum_rhs, rhs,
                       state_layout, velocity_moments)
from .energy import (EnergyMonitor, EnergyReport, GramMatrix, dissipation_rate,
                     energy, gram, kinetic_energy, lyapunov, modified_energy,
                     potential_energy)
from .errors import (BlowupError, ConfigError, DomainError, IntegrationError,
                     LayoutError, ParameterError, PlateSpinError,
                     SingularInertiaError, StepSizeError)
from .integrate import IntegrationConfig, Trajectory, integrate, step_rk4
from .modal import (ModalBasis, ModeIndex, build_basis, eval_displacement,
                    mode_grid, mode_shape, sine_first_moment, sine_moment)
from .params import (BodyInertia, EffectiveInertia, Gains, PlateSpec,
                     SystemParams, effective_inertia, frozen_inertia,
                     rectangle_moments, stiffness_from_material)

__version__ = "0.1.0"

__all__ = [
    "BlowupError", "BodyInertia", "ConfigError", "ControlTorque", "DomainError",
    "EffectiveInertia", "EnergyMonitor", "EnergyReport", "Gains", "GramMatrix",
    "IntegrationConfig", "IntegrationError", "LayoutError", "ModalBasis",
    "ModeIndex", "ParameterError", "PlateSpec", "PlateSpinError",
    "PlateVelocityMoments", "SingularInertiaError", "State", "StateDerivative",
    "StateLayout", "StepSizeError", "SystemParams", "Trajectory",
    "angular_acceleration", "build_basis", "closed_loop_rhs", "cross_momentum",
    "dissipation_rate", "effective_inertia", "elastic_reaction", "energy",
    "eval_displacement", "feedback", "frozen_inertia", "gram", "integrate",
    "kinematics_rhs", "kinetic_energy", "lyapunov", "make_closed_loop_kernel",
    "modal_acceleration", "mode_grid", "mode_shape", "modified_energy",
    "momentum_rhs", "potential_energy", "rectangle_moments", "rhs",
    "sine_first_moment", "sine_moment", "state_layout", "step_rk4",
    "stiffness_from_material", "velocity_moments",
]
