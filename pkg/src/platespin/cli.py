"""Command-line entry point.

    platespin --config run.cfg [--k 1,5] [--t-final 60] [--dt 1e-3]
              [--modes "1,1;1,2"] [--out DIR] [--no-plot]
    platespin --scenario fig2 [...]

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O error.
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import runner, scenarios
from .config import RunConfig, load_config
from .dynamics import State
from .errors import ConfigError, IntegrationError, ParameterError, SingularInertiaError
from .modal import ModeIndex


def _parse_gains(text):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"--k expects comma-separated numbers, got {text!r}") from None
    if not values or any(v <= 0 for v in values):
        raise ConfigError(f"--k expects positive gains, got {text!r}")
    return values


def _parse_modes(text):
    pairs = []
    for chunk in text.split(";"):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ConfigError(f"--modes expects 'm,n;m,n' pairs, got {text!r}")
        try:
            pairs.append(ModeIndex(int(parts[0]), int(parts[1])))
        except (ValueError, ParameterError):
            raise ConfigError(f"--modes expects positive integer pairs, got {text!r}") from None
    if len(set(pairs)) != len(pairs):
        raise ConfigError(f"--modes contains duplicate mode indices: {text!r}")
    return tuple(pairs)


def _apply_overrides(config: RunConfig, args) -> RunConfig:
    integration = config.integration
    if args.dt is not None:
        integration = replace(integration, step=args.dt)
    if args.t_final is not None:
        integration = replace(integration, t_final=args.t_final)
    if integration is not config.integration:
        config = replace(config, integration=integration)
    if args.out is not None:
        config = replace(config, output_dir=args.out)
    if args.no_plot:
        config = replace(config, emit_plot=False)
    if args.modes is not None:
        grid = _parse_modes(args.modes)
        old = config.initial
        if any(np.any(a != 0.0) for a in old.modal_amplitudes + old.modal_rates):
            print("note: --modes resets the initial modal coordinates to zero",
                  file=sys.stderr)
        initial = State(
            attitude_error=old.attitude_error,
            angular_velocity=old.angular_velocity,
            modal_amplitudes=(np.zeros(len(grid)), np.zeros(len(grid))),
            modal_rates=(np.zeros(len(grid)), np.zeros(len(grid))),
        )
        config = replace(config, mode_grids=(grid, grid), initial=initial)
    return config


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="platespin",
        description="Closed-loop attitude stabilization of a rigid body with "
                    "two elastic plates: simulate, sweep gains, emit CSV and "
                    "a gnuplot script of ||X(t)||.")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", metavar="PATH", help="run configuration file")
    source.add_argument("--scenario", choices=["fig2"],
                        help="embedded preset scenario")
    parser.add_argument("--k", metavar="LIST",
                        help="comma-separated damping gains (overrides the config)")
    parser.add_argument("--t-final", type=float, metavar="T", help="integration horizon")
    parser.add_argument("--dt", type=float, metavar="H", help="fixed integration step")
    parser.add_argument("--modes", metavar="GRID",
                        help="mode grid 'm,n;m,n' applied to both plates "
                             "(resets initial modal coordinates)")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--no-plot", action="store_true", help="skip the plot script")
    args = parser.parse_args(argv)

    try:
        if args.scenario == "fig2":
            config = scenarios.fig2_run_config()
        else:
            config = load_config(args.config)
        config = _apply_overrides(config, args)

        if args.k is not None:
            ks = _parse_gains(args.k)
        elif config.k_sweep:
            ks = list(config.k_sweep)
        else:
            ks = [config.params.gains.damping]

        if len(ks) == 1:
            summaries = [runner.run(config, k=ks[0])]
        else:
            summaries = runner.sweep(config, ks)
    except (ConfigError, SingularInertiaError, ParameterError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4

    for summary in summaries:
        print(runner.format_summary(summary))

    ordered = sorted(summaries, key=lambda s: s.k)
    times = [s.time_to_threshold for s in ordered]
    if all(t is not None for t in times) and len(times) > 1:
        if any(t_next >= t_prev for t_prev, t_next in zip(times, times[1:])):
            print("warning: time to the 5% norm threshold is not strictly "
                  "decreasing in k over this sweep", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
