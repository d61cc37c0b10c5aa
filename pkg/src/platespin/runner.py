"""Run execution: closed-loop simulation, CSV emission, plot script, summaries.

The per-sample CSV schema is fixed:

    t, g11..g33, w1, w2, w3, q..., qdot..., f1, f2, f3, T, U, E, V, Vdot, normX

with one column per modal coordinate (named ``q<plate>_<m>_<n>``), numbers
printed with 17 significant digits, and byte-identical output when re-running
the same fixed-step configuration.  The ``w1..w3`` columns carry the angular
velocity, matching the state-vector order; plate deflections at any point can
be reconstructed from the ``q`` columns via
:func:`platespin.modal.eval_displacement`.
"""

import os
from dataclasses import dataclass, replace

import numpy as np

from . import control
from .config import RunConfig
from .dynamics import State, state_layout
from .energy import EnergyMonitor
from .errors import IntegrationError
from .integrate import Trajectory, integrate
from .modal import build_basis
from .params import effective_inertia


@dataclass(frozen=True)
class RunSummary:
    """Headline numbers of one closed-loop run.

    ``time_to_threshold`` is the first sample time at which the state norm
    drops to 5% of its initial value (``None`` when the run never gets
    there).  ``max_decay_residual`` is the largest |Vdot + k |w|^2| observed,
    i.e. how far the certified decay identity strays along the trajectory.
    """

    k: float
    final_norm: float
    time_to_threshold: float | None
    max_torque: float
    max_decay_residual: float
    max_orthogonality_drift: float


def _with_damping(config: RunConfig, k: float) -> RunConfig:
    gains = replace(config.params.gains, damping=float(k))
    return replace(config, params=replace(config.params, gains=gains))


def simulate(config: RunConfig, observers=()) -> Trajectory:
    """Integrate the closed loop described by ``config`` and return samples."""
    params = config.params
    bases = tuple(build_basis(p, g) for p, g in zip(params.plates, config.mode_grids))
    effective = effective_inertia(params)
    kernel = control.make_closed_loop_kernel(params, bases, effective)
    monitor = EnergyMonitor(params, bases, effective)
    layout = state_layout(bases)

    def sample_fn(t, x):
        state = State.from_vector(x, layout)
        torque = control.feedback(params, bases, effective, state).components
        return torque, monitor.report(x)

    return integrate(kernel, config.initial, config.integration,
                     observers=observers, sample_fn=sample_fn)


def summarize(trajectory: Trajectory, k: float) -> RunSummary:
    norms = trajectory.norms()
    threshold = 0.05 * norms[0]
    below = np.nonzero(norms <= threshold)[0]
    time_to = float(trajectory.times[below[0]]) if below.size else None

    omega = trajectory.states[:, 9:12]
    residual = np.abs(trajectory.dissipation_values() + k * np.sum(omega**2, axis=1))

    rows = trajectory.states[:, 0:9].reshape(-1, 3, 3) + np.eye(3)
    drift = np.abs(np.linalg.norm(rows, axis=2) - 1.0)

    return RunSummary(
        k=float(k),
        final_norm=float(norms[-1]),
        time_to_threshold=time_to,
        max_torque=float(np.abs(trajectory.torques).max()),
        max_decay_residual=float(residual.max()),
        max_orthogonality_drift=float(drift.max()),
    )


def _mode_column_names(config: RunConfig):
    names = []
    for plate_index, grid in enumerate(config.mode_grids, start=1):
        names.extend(f"{plate_index}_{mi.m}_{mi.n}" for mi in grid)
    return names


def csv_header(config: RunConfig) -> str:
    modes = _mode_column_names(config)
    columns = (["t"]
               + [f"g{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)]
               + ["w1", "w2", "w3"]
               + [f"q{name}" for name in modes]
               + [f"qdot{name}" for name in modes]
               + ["f1", "f2", "f3", "T", "U", "E", "V", "Vdot", "normX"])
    return ",".join(columns)


def norm_column_index(config: RunConfig) -> int:
    """1-based CSV column of normX (for plot scripts)."""
    n_total = sum(len(g) for g in config.mode_grids)
    return 22 + 2 * n_total


def write_csv(path, config: RunConfig, trajectory: Trajectory) -> None:
    norms = trajectory.norms()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_header(config) + "\n")
        for i in range(len(trajectory)):
            values = np.concatenate([
                [trajectory.times[i]],
                trajectory.states[i],
                trajectory.torques[i],
                trajectory.energy[i],
                [norms[i]],
            ])
            fh.write(",".join(f"{v:.17g}" for v in values) + "\n")


def write_plot_script(path, config: RunConfig, csv_files, ks) -> None:
    """Emit a gnuplot script rendering ||X(t)|| for each gain."""
    col = norm_column_index(config)
    lines = [
        "# gnuplot script: Euclidean state norm per damping gain",
        "set datafile separator ','",
        "set key top right",
        "set xlabel 't'",
        "set ylabel '||X(t)||'",
        "set logscale y",
    ]
    plots = ", \\\n     ".join(
        f"'{os.path.basename(f)}' using 1:{col} with lines title 'k={k:g}'"
        for f, k in zip(csv_files, ks)
    )
    lines.append("plot " + plots)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _csv_path(config: RunConfig, k: float) -> str:
    return os.path.join(config.output_dir, f"{config.csv_prefix}_k{k:g}.csv")


def run(config: RunConfig, k: float | None = None, write: bool = True) -> RunSummary:
    """Single closed-loop run at gain ``k`` (default: the configured damping).

    Writes the per-sample CSV and, when enabled, a single-curve plot script.
    """
    k = config.params.gains.damping if k is None else float(k)
    config = _with_damping(config, k)
    trajectory = simulate(config)
    summary = summarize(trajectory, k)
    if write:
        os.makedirs(config.output_dir, exist_ok=True)
        csv_file = _csv_path(config, k)
        write_csv(csv_file, config, trajectory)
        if config.emit_plot:
            write_plot_script(os.path.join(config.output_dir, "plot.gp"),
                              config, [csv_file], [k])
    return summary


def sweep(config: RunConfig, k_values, write: bool = True):
    """Independent runs over a list of damping gains sharing the initial state.

    Per-gain failures are isolated: successful runs still produce artifacts,
    and a single :class:`IntegrationError` reporting every failed gain is
    raised afterwards.  Returns the list of summaries (order follows
    ``k_values``).
    """
    k_values = [float(k) for k in k_values]
    if not k_values or any(k <= 0 for k in k_values):
        raise ValueError(f"gain sweep must be a non-empty list of positive values, got {k_values}")
    summaries = []
    csv_files = []
    failures = []
    if write:
        os.makedirs(config.output_dir, exist_ok=True)
    for k in k_values:
        try:
            cfg = _with_damping(config, k)
            trajectory = simulate(cfg)
            summaries.append(summarize(trajectory, k))
            if write:
                csv_file = _csv_path(config, k)
                write_csv(csv_file, cfg, trajectory)
                csv_files.append(csv_file)
        except IntegrationError as exc:
            failures.append((k, exc))
    if write and config.emit_plot and csv_files:
        done_ks = [s.k for s in summaries]
        write_plot_script(os.path.join(config.output_dir, "plot.gp"),
                          config, csv_files, done_ks)
    if failures:
        details = "; ".join(f"k={k:g}: {exc}" for k, exc in failures)
        raise IntegrationError(f"{len(failures)} of {len(k_values)} runs failed: {details}")
    return summaries


def format_summary(summary: RunSummary) -> str:
    reach = ("t(5%)=%.3f" % summary.time_to_threshold
             if summary.time_to_threshold is not None else "t(5%)=n/a")
    return (f"k={summary.k:g}: final ||X||={summary.final_norm:.3e}, {reach}, "
            f"max|f|={summary.max_torque:.3e}, "
            f"max|Vdot+k|w|^2|={summary.max_decay_residual:.3e}, "
            f"max row-norm drift={summary.max_orthogonality_drift:.3e}")
