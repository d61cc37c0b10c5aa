"""Stabilizing state feedback for the body-plus-plates system.

The control torque cancels the gyroscopic terms of the momentum balance and
adds rate damping plus an attitude restoring torque:

    f = -k w + (w x K) + (a2 gt23 - a3 gt32, -a1 gt13 + a3 gt31, a1 gt12 - a2 gt21)

With this choice the momentum balance collapses to rate damping, attitude
restoring, and the elastic reaction of the plates; the energy functional then
decays at exactly -k |w|^2 (see :mod:`platespin.energy`).

The feedback shares the plate velocity moments with the dynamics so that the
cancellation holds to rounding, not merely to discretization.
"""

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .dynamics import PlateVelocityMoments, State, StateDerivative, state_layout
from .params import EffectiveInertia, SystemParams


@dataclass(frozen=True)
class ControlTorque:
    """Three control torque components about the body axes."""

    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=float)
        object.__setattr__(self, "components", c)


def alpha_pairing(gains, attitude_error) -> np.ndarray:
    """Attitude restoring part of the feedback, antisymmetric in the error rows.

        (a2 gt23 - a3 gt32,  -a1 gt13 + a3 gt31,  a1 gt12 - a2 gt21)
    """
    a1, a2, a3 = gains.attitude
    gt = np.asarray(attitude_error, dtype=float)
    return np.array([
        a2 * gt[5] - a3 * gt[7],
        -a1 * gt[2] + a3 * gt[6],
        a1 * gt[1] - a2 * gt[3],
    ])


def feedback(params: SystemParams, bases, effective: EffectiveInertia,
             state: State, moments: PlateVelocityMoments | None = None) -> ControlTorque:
    """Evaluate the stabilizing feedback torque at a state."""
    if moments is None:
        moments = dynamics.velocity_moments(bases, state)
    omega = state.angular_velocity
    gyro = dynamics.cross_momentum(params, effective, moments, omega)
    f = -params.gains.damping * omega + gyro + alpha_pairing(params.gains, state.attitude_error)
    return ControlTorque(components=f)


def closed_loop_rhs(params: SystemParams, bases, effective: EffectiveInertia,
                    state: State) -> StateDerivative:
    """State derivative with the feedback torque applied."""
    moments = dynamics.velocity_moments(bases, state)
    torque = feedback(params, bases, effective, state, moments=moments)
    phi = dynamics.momentum_rhs(params, effective, moments, state.angular_velocity,
                                torque.components)
    omega_dot = dynamics.angular_acceleration(effective, phi)
    return StateDerivative(
        attitude_error=dynamics.kinematics_rhs(state.attitude_error, state.angular_velocity),
        angular_velocity=omega_dot,
        modal_amplitudes=tuple(r.copy() for r in state.modal_rates),
        modal_rates=tuple(
            dynamics.modal_acceleration(basis, state.modal_amplitudes[n], omega_dot)
            for n, basis in enumerate(bases)
        ),
    )


def make_closed_loop_kernel(params: SystemParams, bases, effective: EffectiveInertia):
    """Build a fast flat-vector evaluator of the closed-loop derivative.

    Returns ``deriv(x) -> xdot`` operating on flat state vectors.  All
    parameter-dependent quantities are precomputed; the per-call work is a
    handful of scalar operations plus vector products over the mode arrays.
    Algebraically identical to composing :func:`feedback` with
    :func:`platespin.dynamics.rhs`.
    """
    layout = state_layout(bases)
    nt = layout.n_total
    qs = layout.q
    qds = layout.qdot

    rho_mode = np.concatenate([
        np.full(b.n_modes, b.plate.area_density) for b in bases
    ])
    p1 = np.concatenate([b.p1 for b in bases])
    p2 = np.concatenate([b.p2 for b in bases])
    stiff = np.concatenate([
        b.plate.stiffness * b.biharmonic_eigenvalue for b in bases
    ])
    inv_nf = np.concatenate([
        np.full(b.n_modes, 1.0 / b.norm_factor) for b in bases
    ])
    rp1 = rho_mode * p1
    rp2 = rho_mode * p2
    rsp1 = rp1 * stiff
    rsp2 = rp2 * stiff

    IJ = np.diag(params.body.principal) + effective.frozen
    (IJ11, IJ12, IJ13), (IJ21, IJ22, IJ23), (IJ31, IJ32, IJ33) = IJ
    (H11, H12, H13), (H21, H22, H23), (H31, H32, H33) = effective.inverse
    k = params.gains.damping
    a1, a2, a3 = params.gains.attitude

    def deriv(x: np.ndarray) -> np.ndarray:
        g11, g12, g13, g21, g22, g23, g31, g32, g33 = x[0:9]
        w1, w2, w3 = x[9], x[10], x[11]
        q = x[qs]
        qd = x[qds]

        S1 = rp1 @ qd
        S2 = rp2 @ qd
        Rr1 = rsp1 @ q
        Rr2 = rsp2 @ q

        R1 = IJ11 * w1 + IJ12 * w2 + IJ13 * w3
        R2 = IJ21 * w1 + IJ22 * w2 + IJ23 * w3
        R3 = IJ31 * w1 + IJ32 * w2 + IJ33 * w3

        cx1 = w2 * R3 - w3 * (R2 - S1)
        cx2 = -w1 * R3 + w3 * (R1 + S2)
        cx3 = w1 * R2 - w2 * R1 - (w2 * S2 + w1 * S1)

        f1 = -k * w1 + cx1 + a2 * g23 - a3 * g32
        f2 = -k * w2 + cx2 - a1 * g13 + a3 * g31
        f3 = -k * w3 + cx3 + a1 * g12 - a2 * g21

        ph1 = f1 + w3 * R2 - w2 * R3 + Rr2 - w3 * S1
        ph2 = f2 + w1 * R3 - w3 * R1 - Rr1 - w3 * S2
        ph3 = f3 - w1 * R2 + w2 * R1 + w1 * S1 + w2 * S2

        wd1 = H11 * ph1 + H12 * ph2 + H13 * ph3
        wd2 = H21 * ph1 + H22 * ph2 + H23 * ph3
        wd3 = H31 * ph1 + H32 * ph2 + H33 * ph3

        out = np.empty(12 + 2 * nt)
        out[0] = w3 * g12 - w2 * g13
        out[1] = w1 * g13 - w3 * (g11 + 1.0)
        out[2] = w2 * (g11 + 1.0) - w1 * g12
        out[3] = w3 * (g22 + 1.0) - w2 * g23
        out[4] = w1 * g23 - w3 * g21
        out[5] = w2 * g21 - w1 * (g22 + 1.0)
        out[6] = w3 * g32 - w2 * (g33 + 1.0)
        out[7] = w1 * (g33 + 1.0) - w3 * g31
        out[8] = w2 * g31 - w1 * g32
        out[9] = wd1
        out[10] = wd2
        out[11] = wd3
        out[qs] = qd
        out[qds] = -stiff * q + (p1 * wd2 - p2 * wd1) * inv_nf
        return out

    return deriv
