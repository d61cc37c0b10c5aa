"""Right-hand side of the reduced body-plus-plates equations of motion.

State layout (flat vector):

    X = (gt11..gt33, w1, w2, w3, q[plate1], q[plate2], qdot[plate1], qdot[plate2])

where gt is the attitude error (direction-cosine rows minus identity,
row-major), w is the body angular velocity, and q are modal plate amplitudes.

The derivative is assembled in the elimination order of the underlying model:
the plate accelerations are substituted into the angular-momentum balance
first, so the angular acceleration solves the 3x3 system M wdot = phi with
the effective mass matrix M; the modal accelerations then follow from the
projected plate equations driven by wdot.  All plate coupling enters through
four weighted modal sums per plate (the velocity and elastic moments below).
"""

from dataclasses import dataclass

import numpy as np

from .errors import LayoutError
from .modal import ModalBasis
from .params import EffectiveInertia, SystemParams


# ---------------------------------------------------------------------------
# state containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateLayout:
    """Slice bookkeeping for the flat state vector."""

    n_modes: tuple

    @property
    def n_total(self) -> int:
        return sum(self.n_modes)

    @property
    def dim(self) -> int:
        return 12 + 2 * self.n_total

    @property
    def gtilde(self) -> slice:
        return slice(0, 9)

    @property
    def omega(self) -> slice:
        return slice(9, 12)

    @property
    def q(self) -> slice:
        return slice(12, 12 + self.n_total)

    @property
    def qdot(self) -> slice:
        return slice(12 + self.n_total, 12 + 2 * self.n_total)

    def q_plate(self, n: int) -> slice:
        start = 12 + sum(self.n_modes[:n])
        return slice(start, start + self.n_modes[n])

    def qdot_plate(self, n: int) -> slice:
        start = 12 + self.n_total + sum(self.n_modes[:n])
        return slice(start, start + self.n_modes[n])


def state_layout(bases) -> StateLayout:
    return StateLayout(n_modes=tuple(b.n_modes for b in bases))


def _fields_to_vector(gtilde, omega, amplitudes, rates) -> np.ndarray:
    return np.concatenate([gtilde, omega, *amplitudes, *rates])


@dataclass(frozen=True)
class State:
    """Attitude error, angular velocity, and per-plate modal coordinates."""

    attitude_error: np.ndarray
    angular_velocity: np.ndarray
    modal_amplitudes: tuple
    modal_rates: tuple

    def __post_init__(self):
        gt = np.asarray(self.attitude_error, dtype=float)
        om = np.asarray(self.angular_velocity, dtype=float)
        if gt.shape != (9,):
            raise LayoutError(f"attitude_error must have shape (9,), got {gt.shape}")
        if om.shape != (3,):
            raise LayoutError(f"angular_velocity must have shape (3,), got {om.shape}")
        amps = tuple(np.asarray(a, dtype=float) for a in self.modal_amplitudes)
        rates = tuple(np.asarray(r, dtype=float) for r in self.modal_rates)
        if len(amps) != len(rates) or any(a.shape != r.shape for a, r in zip(amps, rates)):
            raise LayoutError("modal_amplitudes and modal_rates must have matching shapes")
        object.__setattr__(self, "attitude_error", gt)
        object.__setattr__(self, "angular_velocity", om)
        object.__setattr__(self, "modal_amplitudes", amps)
        object.__setattr__(self, "modal_rates", rates)

    @classmethod
    def zero(cls, bases) -> "State":
        return cls(
            attitude_error=np.zeros(9),
            angular_velocity=np.zeros(3),
            modal_amplitudes=tuple(np.zeros(b.n_modes) for b in bases),
            modal_rates=tuple(np.zeros(b.n_modes) for b in bases),
        )

    @classmethod
    def from_vector(cls, x, layout: StateLayout) -> "State":
        x = np.asarray(x, dtype=float)
        if x.shape != (layout.dim,):
            raise LayoutError(f"expected state vector of shape ({layout.dim},), got {x.shape}")
        n_plates = len(layout.n_modes)
        return cls(
            attitude_error=x[layout.gtilde].copy(),
            angular_velocity=x[layout.omega].copy(),
            modal_amplitudes=tuple(x[layout.q_plate(n)].copy() for n in range(n_plates)),
            modal_rates=tuple(x[layout.qdot_plate(n)].copy() for n in range(n_plates)),
        )

    def to_vector(self) -> np.ndarray:
        return _fields_to_vector(self.attitude_error, self.angular_velocity,
                                 self.modal_amplitudes, self.modal_rates)

    def norm(self) -> float:
        """Euclidean norm of the flat state vector."""
        return float(np.linalg.norm(self.to_vector()))

    def attitude_rows(self) -> np.ndarray:
        """Reconstructed direction-cosine rows g_i = gt_i + e_i, shape (3, 3)."""
        return self.attitude_error.reshape(3, 3) + np.eye(3)


@dataclass(frozen=True)
class StateDerivative:
    """Time derivative with the same layout as :class:`State`."""

    attitude_error: np.ndarray
    angular_velocity: np.ndarray
    modal_amplitudes: tuple
    modal_rates: tuple

    def to_vector(self) -> np.ndarray:
        return _fields_to_vector(self.attitude_error, self.angular_velocity,
                                 self.modal_amplitudes, self.modal_rates)


@dataclass(frozen=True)
class PlateVelocityMoments:
    """Per-plate weighted modal sums entering the momentum balance.

    s1, s2 are velocity moments (int wdot (x1+d1) dx and int wdot (x2+d2) dx);
    r1, r2 are the matching elastic moments with weight a^2 lam^2 q, i.e. the
    stiffness-scaled first moments of the biharmonic restoring load.
    """

    s1: np.ndarray
    s2: np.ndarray
    r1: np.ndarray
    r2: np.ndarray


# ---------------------------------------------------------------------------
# elementary stages
# ---------------------------------------------------------------------------

def velocity_moments(bases, state: State) -> PlateVelocityMoments:
    """Evaluate the four coupling moments for each plate."""
    n_plates = len(bases)
    if len(state.modal_amplitudes) != n_plates:
        raise LayoutError(
            f"state carries {len(state.modal_amplitudes)} plates, bases carry {n_plates}"
        )
    s1 = np.empty(n_plates)
    s2 = np.empty(n_plates)
    r1 = np.empty(n_plates)
    r2 = np.empty(n_plates)
    for n, basis in enumerate(bases):
        q = state.modal_amplitudes[n]
        qd = state.modal_rates[n]
        if q.shape != (basis.n_modes,):
            raise LayoutError(
                f"plate {n}: expected {basis.n_modes} amplitudes, got shape {q.shape}"
            )
        stiff = basis.plate.stiffness * basis.biharmonic_eigenvalue
        s1[n] = basis.p1 @ qd
        s2[n] = basis.p2 @ qd
        r1[n] = basis.p1 @ (stiff * q)
        r2[n] = basis.p2 @ (stiff * q)
    return PlateVelocityMoments(s1=s1, s2=s2, r1=r1, r2=r2)


def _momentum_brackets(params: SystemParams, effective: EffectiveInertia, omega):
    """The three row products R_i = ((I + J) omega)_i used by the quadratic terms."""
    IJ = np.diag(params.body.principal) + effective.frozen
    return IJ @ omega


def cross_momentum(params: SystemParams, effective: EffectiveInertia,
                   moments: PlateVelocityMoments, omega) -> np.ndarray:
    """Gyroscopic torque (omega x K) with the frozen-plate momentum expansion.

    K collects (I + J) omega plus the plate velocity moments (weighted by the
    area densities) on the first two axes; the cross product is written out
    component-wise.
    """
    w1, w2, w3 = omega
    R1, R2, R3 = _momentum_brackets(params, effective, omega)
    rho = np.array([p.area_density for p in params.plates])
    S1 = float(rho @ moments.s1)
    S2 = float(rho @ moments.s2)
    return np.array([
        w2 * R3 - w3 * (R2 - S1),
        -w1 * R3 + w3 * (R1 + S2),
        w1 * R2 - w2 * R1 - (w2 * S2 + w1 * S1),
    ])


def elastic_reaction(params: SystemParams, moments: PlateVelocityMoments) -> np.ndarray:
    """Torque exerted on the carrier by the elastic restoring loads of the plates.

    Appears on the right-hand side of the momentum balance as
    (sum_n rho_n r2_n, -sum_n rho_n r1_n, 0).
    """
    rho = np.array([p.area_density for p in params.plates])
    return np.array([float(rho @ moments.r2), -float(rho @ moments.r1), 0.0])


def momentum_rhs(params: SystemParams, effective: EffectiveInertia,
                 moments: PlateVelocityMoments, omega, torque) -> np.ndarray:
    """Right-hand side phi of the momentum balance M wdot = phi.

    Component-wise (R_i are the (I+J) row products, S/r the rho-weighted
    plate moments):

        phi1 = f1 + w3 R2 - w2 R3 + sum_n rho_n (r2_n - w3 s1_n)
        phi2 = f2 + w1 R3 - w3 R1 - sum_n rho_n (r1_n + w3 s2_n)
        phi3 = f3 - w1 R2 + w2 R1 + sum_n rho_n (w1 s1_n + w2 s2_n)
    """
    w1, w2, w3 = omega
    f = np.asarray(torque, dtype=float)
    R1, R2, R3 = _momentum_brackets(params, effective, omega)
    rho = np.array([p.area_density for p in params.plates])
    S1 = float(rho @ moments.s1)
    S2 = float(rho @ moments.s2)
    Rr1 = float(rho @ moments.r1)
    Rr2 = float(rho @ moments.r2)
    return np.array([
        f[0] + w3 * R2 - w2 * R3 + Rr2 - w3 * S1,
        f[1] + w1 * R3 - w3 * R1 - Rr1 - w3 * S2,
        f[2] - w1 * R2 + w2 * R1 + w1 * S1 + w2 * S2,
    ])


def angular_acceleration(effective: EffectiveInertia, phi) -> np.ndarray:
    """Solve the momentum balance: wdot = M^{-1} phi (closed-form inverse)."""
    return effective.inverse @ np.asarray(phi, dtype=float)


def modal_acceleration(basis: ModalBasis, amplitudes, omega_dot) -> np.ndarray:
    """Projected plate accelerations for one plate.

        qdd = -a^2 lam^2 q + (p1 wdot2 - p2 wdot1) / (l1 l2 / 4)

    The second term is the modal projection of the rotational inertia load
    (x1 + d1) wdot2 - (x2 + d2) wdot1, normalized by the basis norm.
    """
    q = np.asarray(amplitudes, dtype=float)
    stiff = basis.plate.stiffness * basis.biharmonic_eigenvalue
    return -stiff * q + (basis.p1 * omega_dot[1] - basis.p2 * omega_dot[0]) / basis.norm_factor


def kinematics_rhs(gtilde, omega) -> np.ndarray:
    """Attitude-error rates: the perturbed form of gdot_i = -omega x g_i."""
    g11, g12, g13, g21, g22, g23, g31, g32, g33 = gtilde
    w1, w2, w3 = omega
    return np.array([
        w3 * g12 - w2 * g13,
        w1 * g13 - w3 * (g11 + 1.0),
        w2 * (g11 + 1.0) - w1 * g12,
        w3 * (g22 + 1.0) - w2 * g23,
        w1 * g23 - w3 * g21,
        w2 * g21 - w1 * (g22 + 1.0),
        w3 * g32 - w2 * (g33 + 1.0),
        w1 * (g33 + 1.0) - w3 * g31,
        w2 * g31 - w1 * g32,
    ])


def rhs(params: SystemParams, bases, effective: EffectiveInertia,
        state: State, torque) -> StateDerivative:
    """Full state derivative under an applied control torque."""
    moments = velocity_moments(bases, state)
    phi = momentum_rhs(params, effective, moments, state.angular_velocity, torque)
    omega_dot = angular_acceleration(effective, phi)
    return StateDerivative(
        attitude_error=kinematics_rhs(state.attitude_error, state.angular_velocity),
        angular_velocity=omega_dot,
        modal_amplitudes=tuple(r.copy() for r in state.modal_rates),
        modal_rates=tuple(
            modal_acceleration(basis, state.modal_amplitudes[n], omega_dot)
            for n, basis in enumerate(bases)
        ),
    )
