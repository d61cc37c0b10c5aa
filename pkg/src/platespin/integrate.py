"""Deterministic time integration: classical RK4 with optional step-doubling
error control, trajectory recording, and sample observers."""

from dataclasses import dataclass, field

import numpy as np

from .dynamics import State, StateLayout
from .errors import BlowupError, ParameterError, StepSizeError


@dataclass(frozen=True)
class IntegrationConfig:
    """Time-stepping configuration.

    ``mode`` is either ``"fixed"`` (step used verbatim) or ``"adaptive"``
    (step-doubling local error control at relative tolerance ``rtol`` with
    step bounds ``min_step``/``max_step``).  ``sample_every`` decimates the
    recorded samples.  When ``stop_norm_ratio`` is set, integration stops
    early once the state norm falls below that fraction of its initial value.
    ``renormalize_attitude`` re-orthonormalizes the direction-cosine rows
    after every step (off by default so that integrator drift stays visible).
    """

    step: float
    t_final: float
    mode: str = "fixed"
    rtol: float = 1e-8
    min_step: float = 1e-10
    max_step: float = 1.0
    sample_every: int = 1
    stop_norm_ratio: float | None = None
    renormalize_attitude: bool = False

    def __post_init__(self):
        if not self.step > 0:
            raise ParameterError(f"step must be positive, got {self.step}")
        if not self.t_final > 0:
            raise ParameterError(f"t_final must be positive, got {self.t_final}")
        if self.step > self.t_final:
            raise ParameterError(f"step {self.step} exceeds t_final {self.t_final}")
        if self.mode not in ("fixed", "adaptive"):
            raise ParameterError(f"mode must be 'fixed' or 'adaptive', got {self.mode!r}")
        if self.mode == "adaptive":
            if not self.rtol > 0:
                raise ParameterError(f"rtol must be positive, got {self.rtol}")
            if not 0 < self.min_step <= self.max_step:
                raise ParameterError("need 0 < min_step <= max_step")
        if not (isinstance(self.sample_every, int) and self.sample_every >= 1):
            raise ParameterError(f"sample_every must be a positive integer, got {self.sample_every}")
        if self.stop_norm_ratio is not None and not 0 < self.stop_norm_ratio < 1:
            raise ParameterError(f"stop_norm_ratio must lie in (0, 1), got {self.stop_norm_ratio}")


@dataclass
class Trajectory:
    """Recorded samples (t, state, control torque, energy report)."""

    layout: StateLayout
    times: np.ndarray
    states: np.ndarray
    torques: np.ndarray
    energy: np.ndarray  # columns: kinetic, potential, modified, lyapunov, dissipation

    def __len__(self) -> int:
        return len(self.times)

    def state_at(self, i: int) -> State:
        return State.from_vector(self.states[i], self.layout)

    def norms(self) -> np.ndarray:
        """Euclidean norm of the state vector at each sample."""
        return np.linalg.norm(self.states, axis=1)

    def lyapunov_values(self) -> np.ndarray:
        return self.energy[:, 3]

    def dissipation_values(self) -> np.ndarray:
        return self.energy[:, 4]


def step_rk4(rhs_fn, state, dt: float, t: float = 0.0):
    """One classical fourth-order Runge-Kutta step.

    Raises :class:`BlowupError` (tagged with ``t``) when the update is not
    finite.
    """
    k1 = rhs_fn(state)
    k2 = rhs_fn(state + 0.5 * dt * k1)
    k3 = rhs_fn(state + 0.5 * dt * k2)
    k4 = rhs_fn(state + dt * k3)
    new = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(new)):
        raise BlowupError(t, "non-finite state after RK4 step")
    return new


def _orthonormalize_rows(x: np.ndarray) -> None:
    """Gram-Schmidt the reconstructed attitude rows in place."""
    g = x[0:9].reshape(3, 3) + np.eye(3)
    g[0] /= np.linalg.norm(g[0])
    g[1] -= (g[1] @ g[0]) * g[0]
    g[1] /= np.linalg.norm(g[1])
    g[2] = np.cross(g[0], g[1])
    x[0:9] = (g - np.eye(3)).ravel()


def integrate(rhs_fn, initial: State, config: IntegrationConfig,
              observers=(), sample_fn=None) -> Trajectory:
    """Integrate ``xdot = rhs_fn(x)`` from ``initial`` and record samples.

    ``rhs_fn`` operates on flat state vectors.  ``sample_fn(t, x)``, when
    given, returns the pair (torque 3-vector, energy report) stored with
    each sample; observers are then invoked as
    ``observer(t, state, torque, report)`` for every recorded sample.
    """
    layout = StateLayout(n_modes=tuple(len(a) for a in initial.modal_amplitudes))
    x = initial.to_vector()
    norm0 = float(np.linalg.norm(x))

    times, states, torques, reports = [], [], [], []

    def record(t, x):
        if sample_fn is not None:
            torque, report = sample_fn(t, x)
            torque = np.asarray(torque, dtype=float)
            energy_row = np.asarray(report.as_tuple() if hasattr(report, "as_tuple")
                                    else report, dtype=float)
        else:
            torque = np.zeros(3)
            energy_row = np.full(5, np.nan)
        times.append(t)
        states.append(x.copy())
        torques.append(torque)
        reports.append(energy_row)
        if observers:
            state = State.from_vector(x, layout)
            rep = _report_view(energy_row)
            for obs in observers:
                obs(t, state, torque, rep)

    def should_stop(x):
        return (config.stop_norm_ratio is not None
                and float(np.linalg.norm(x)) < config.stop_norm_ratio * norm0)

    record(0.0, x)

    if config.mode == "fixed":
        n_steps = int(round(config.t_final / config.step))
        # honor t_final exactly even when it is not a multiple of the step
        remainder = config.t_final - n_steps * config.step
        if remainder > 1e-12 * config.t_final:
            n_steps += 1
        t = 0.0
        for i in range(1, n_steps + 1):
            dt = min(config.step, config.t_final - t)
            if dt <= 0.0:
                break
            x = step_rk4(rhs_fn, x, dt, t=t)
            t = i * config.step if dt == config.step else config.t_final
            if config.renormalize_attitude:
                _orthonormalize_rows(x)
            if i % config.sample_every == 0 or i == n_steps or t >= config.t_final:
                record(t, x)
                if should_stop(x):
                    break
    else:
        t = 0.0
        dt = min(config.step, config.max_step)
        accepted = 0
        while t < config.t_final - 1e-12 * config.t_final:
            dt = min(dt, config.t_final - t)
            full = step_rk4(rhs_fn, x, dt, t=t)
            half = step_rk4(rhs_fn, x, 0.5 * dt, t=t)
            two_half = step_rk4(rhs_fn, half, 0.5 * dt, t=t + 0.5 * dt)
            err = float(np.linalg.norm(two_half - full)) / 15.0
            tol = config.rtol * max(float(np.linalg.norm(two_half)), 1.0)
            if err <= tol:
                x = two_half
                t += dt
                accepted += 1
                if config.renormalize_attitude:
                    _orthonormalize_rows(x)
                if accepted % config.sample_every == 0 or t >= config.t_final - 1e-12:
                    record(t, x)
                    if should_stop(x):
                        break
            elif dt <= config.min_step * (1.0 + 1e-12):
                raise StepSizeError(t, dt)
            growth = 0.9 * (tol / err) ** 0.2 if err > 0 else 2.0
            dt = float(np.clip(dt * min(max(growth, 0.2), 5.0),
                               config.min_step, config.max_step))

    return Trajectory(
        layout=layout,
        times=np.asarray(times),
        states=np.asarray(states),
        torques=np.asarray(torques),
        energy=np.asarray(reports),
    )


def _report_view(row: np.ndarray):
    from .energy import EnergyReport

    return EnergyReport(kinetic=row[0], potential=row[1], modified_energy=row[2],
                        lyapunov=row[3], dissipation_rate=row[4])
