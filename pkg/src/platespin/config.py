"""Run configuration: flat INI files with validated, line-attributed errors.

Sections: [body], [plate1], [plate2], [gains], [integration], [initial],
[output].  Vectors are comma-separated; matrices and mode lists separate rows
with semicolons (e.g. ``modes = 1,1; 2,1``).  Every invariant violation is
reported as a :class:`ConfigError` carrying the file, line, and key.
"""

import configparser
import re
from dataclasses import dataclass

import numpy as np

from .dynamics import State
from .errors import ConfigError, ParameterError
from .integrate import IntegrationConfig
from .modal import ModeIndex
from .params import (BodyInertia, Gains, PlateSpec, SystemParams,
                     effective_inertia, stiffness_from_material)

_REQUIRED = object()

_KNOWN_KEYS = {
    "body": {"inertia", "frozen_inertia"},
    "plate1": {"length_x1", "length_x2", "offset", "area_density", "stiffness",
               "young", "poisson", "thickness", "modes"},
    "plate2": {"length_x1", "length_x2", "offset", "area_density", "stiffness",
               "young", "poisson", "thickness", "modes"},
    "gains": {"damping", "attitude", "sweep"},
    "integration": {"step", "t_final", "mode", "rtol", "min_step", "max_step",
                    "sample_every", "stop_norm_ratio", "renormalize"},
    "initial": {"attitude_rows", "gtilde", "omega", "q1", "q2", "qdot1", "qdot2"},
    "output": {"directory", "csv_prefix", "plot"},
}


@dataclass(frozen=True)
class RunConfig:
    """Fully validated inputs for one simulation run (or gain sweep)."""

    params: SystemParams
    mode_grids: tuple
    initial: State
    integration: IntegrationConfig
    k_sweep: tuple | None
    output_dir: str
    csv_prefix: str
    emit_plot: bool


class _Loader:
    def __init__(self, path):
        self.path = str(path)
        parser = configparser.ConfigParser()
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}", path=self.path) from exc
        try:
            parser.read_string(text, source=self.path)
        except configparser.Error as exc:
            raise ConfigError(f"malformed config file: {exc}", path=self.path) from exc
        self.parser = parser
        self.lines = {}
        self.section_lines = {}
        section = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            header = re.match(r"\[([^\]]+)\]", stripped)
            if header:
                section = header.group(1).strip().lower()
                self.section_lines.setdefault(section, lineno)
                continue
            if not stripped or stripped.startswith(("#", ";")) or section is None:
                continue
            key = re.split(r"[=:]", stripped, maxsplit=1)[0].strip().lower()
            if key:
                self.lines.setdefault((section, key), lineno)

    def line(self, section, key=None):
        if key is not None and (section, key) in self.lines:
            return self.lines[(section, key)]
        return self.section_lines.get(section)

    def error(self, message, section, key=None):
        return ConfigError(message, path=self.path, line=self.line(section, key),
                           key=f"{section}.{key}" if key else section)

    def check_known_keys(self):
        for section in self.parser.sections():
            name = section.lower()
            if name not in _KNOWN_KEYS:
                raise self.error(f"unknown section [{section}]", name)
            for key in self.parser[section]:
                if key.lower() not in _KNOWN_KEYS[name]:
                    raise self.error(f"unknown key '{key}'", name, key.lower())

    def has(self, section, key):
        return self.parser.has_option(section, key)

    def raw(self, section, key, default=_REQUIRED):
        if not self.parser.has_section(section):
            if default is not _REQUIRED:
                return default
            raise ConfigError(f"missing section [{section}]", path=self.path)
        if not self.parser.has_option(section, key):
            if default is not _REQUIRED:
                return default
            raise self.error(f"missing required key '{key}'", section, key)
        return self.parser.get(section, key)

    def floatval(self, section, key, default=_REQUIRED):
        raw = self.raw(section, key, default)
        if raw is default and default is not _REQUIRED:
            return default
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise self.error(f"expected a number, got {raw!r}", section, key) from None

    def intval(self, section, key, default=_REQUIRED):
        raw = self.raw(section, key, default)
        if raw is default and default is not _REQUIRED:
            return default
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise self.error(f"expected an integer, got {raw!r}", section, key) from None

    def boolval(self, section, key, default=_REQUIRED):
        raw = self.raw(section, key, default)
        if isinstance(raw, bool):
            return raw
        lowered = str(raw).strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise self.error(f"expected a boolean, got {raw!r}", section, key)

    def vector(self, section, key, size, default=_REQUIRED):
        raw = self.raw(section, key, default)
        if not isinstance(raw, str):
            return raw
        try:
            values = [float(v) for v in raw.split(",")]
        except ValueError:
            raise self.error(f"expected comma-separated numbers, got {raw!r}",
                             section, key) from None
        if size is not None and len(values) != size:
            raise self.error(f"expected {size} values, got {len(values)}", section, key)
        return np.array(values)

    def rows(self, section, key, shape, default=_REQUIRED):
        raw = self.raw(section, key, default)
        if not isinstance(raw, str):
            return raw
        try:
            rows = [[float(v) for v in row.split(",")] for row in raw.split(";")]
        except ValueError:
            raise self.error(f"expected semicolon-separated rows of numbers, got {raw!r}",
                             section, key) from None
        arr = np.array(rows)
        if arr.shape != shape:
            raise self.error(f"expected shape {shape}, got {arr.shape}", section, key)
        return arr

    def modes(self, section, key, default="1,1"):
        raw = self.raw(section, key, default)
        pairs = []
        for chunk in str(raw).split(";"):
            parts = chunk.split(",")
            if len(parts) != 2:
                raise self.error(f"expected 'm,n' pairs separated by ';', got {raw!r}",
                                 section, key)
            try:
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise self.error(f"mode indices must be integers, got {chunk!r}",
                                 section, key) from None
        try:
            grid = tuple(ModeIndex(m, n) for m, n in pairs)
        except ParameterError as exc:
            raise self.error(str(exc), section, key) from None
        if len(set(grid)) != len(grid):
            raise self.error(f"duplicate mode indices: {raw!r}", section, key)
        return grid


def _load_plate(loader: _Loader, section: str):
    has_stiffness = loader.has(section, "stiffness")
    has_material = any(loader.has(section, k) for k in ("young", "poisson", "thickness"))
    if has_stiffness and has_material:
        raise loader.error("give either 'stiffness' or the material triple "
                           "young/poisson/thickness, not both", section, "stiffness")
    area_density = loader.floatval(section, "area_density")
    if has_material:
        try:
            stiffness = stiffness_from_material(
                young=loader.floatval(section, "young"),
                poisson=loader.floatval(section, "poisson"),
                thickness=loader.floatval(section, "thickness"),
                density=area_density,
            )
        except ParameterError as exc:
            raise loader.error(str(exc), section, "young") from None
    else:
        stiffness = loader.floatval(section, "stiffness")
    try:
        plate = PlateSpec(
            length_x1=loader.floatval(section, "length_x1"),
            length_x2=loader.floatval(section, "length_x2"),
            offset=loader.vector(section, "offset", 3),
            area_density=area_density,
            stiffness=stiffness,
        )
    except ParameterError as exc:
        key = next((k for k in _KNOWN_KEYS[section] if k in str(exc)), None)
        raise loader.error(str(exc), section, key) from None
    return plate, loader.modes(section, "modes")


def _load_initial(loader: _Loader, mode_grids) -> State:
    section = "initial"
    has_rows = loader.has(section, "attitude_rows") if loader.parser.has_section(section) else False
    has_gtilde = loader.has(section, "gtilde") if loader.parser.has_section(section) else False
    if has_rows and has_gtilde:
        raise loader.error("give either 'attitude_rows' or 'gtilde', not both",
                           section, "attitude_rows")
    if has_rows:
        g = loader.rows(section, "attitude_rows", (3, 3))
        gram = g @ g.T
        if not np.allclose(gram, np.eye(3), rtol=0.0, atol=1e-12):
            raise loader.error("attitude rows must be orthonormal to 1e-12",
                               section, "attitude_rows")
        if np.linalg.det(g) < 0.0:
            raise loader.error("attitude rows must form a right-handed triple",
                               section, "attitude_rows")
        gtilde = (g - np.eye(3)).ravel()
    elif has_gtilde:
        gtilde = loader.vector(section, "gtilde", 9)
        rows = gtilde.reshape(3, 3) + np.eye(3)
        norms = np.linalg.norm(rows, axis=1)
        if not np.allclose(norms, 1.0, rtol=0.0, atol=1e-9):
            raise loader.error(
                f"reconstructed attitude rows must have unit norm, got {norms}",
                section, "gtilde")
    else:
        gtilde = np.zeros(9)

    omega = loader.vector(section, "omega", 3, default=np.zeros(3))
    amplitudes = []
    rates = []
    for n, grid in enumerate(mode_grids, start=1):
        count = len(grid)
        q = loader.vector(section, f"q{n}", None, default=np.zeros(count))
        qd = loader.vector(section, f"qdot{n}", None, default=np.zeros(count))
        if len(q) != count:
            raise loader.error(f"expected {count} values (one per mode)", section, f"q{n}")
        if len(qd) != count:
            raise loader.error(f"expected {count} values (one per mode)", section, f"qdot{n}")
        amplitudes.append(np.asarray(q, dtype=float))
        rates.append(np.asarray(qd, dtype=float))
    return State(attitude_error=gtilde, angular_velocity=omega,
                 modal_amplitudes=tuple(amplitudes), modal_rates=tuple(rates))


def load_config(path) -> RunConfig:
    """Parse and fully validate a run configuration file."""
    loader = _Loader(path)
    loader.check_known_keys()

    try:
        body = BodyInertia(principal=loader.vector("body", "inertia", 3))
    except ParameterError as exc:
        raise loader.error(str(exc), "body", "inertia") from None

    override = None
    if loader.parser.has_section("body") and loader.has("body", "frozen_inertia"):
        override = loader.rows("body", "frozen_inertia", (3, 3))

    plate1, grid1 = _load_plate(loader, "plate1")
    plate2, grid2 = _load_plate(loader, "plate2")

    try:
        gains = Gains(damping=loader.floatval("gains", "damping"),
                      attitude=loader.vector("gains", "attitude", 3))
    except ParameterError as exc:
        key = "damping" if "damping" in str(exc) else "attitude"
        raise loader.error(str(exc), "gains", key) from None

    try:
        params = SystemParams(body=body, plates=(plate1, plate2), gains=gains,
                              frozen_inertia_override=override)
    except ParameterError as exc:
        raise loader.error(str(exc), "body", "frozen_inertia") from None

    # fail loudly on a singular effective mass matrix at load time
    effective_inertia(params)

    sweep = None
    if loader.has("gains", "sweep"):
        sweep_vals = loader.vector("gains", "sweep", None)
        if len(sweep_vals) == 0 or not np.all(np.asarray(sweep_vals) > 0):
            raise loader.error("sweep must be a non-empty list of positive gains",
                               "gains", "sweep")
        sweep = tuple(float(v) for v in sweep_vals)

    stop_ratio = loader.floatval("integration", "stop_norm_ratio", default=None)
    try:
        integration = IntegrationConfig(
            step=loader.floatval("integration", "step"),
            t_final=loader.floatval("integration", "t_final"),
            mode=str(loader.raw("integration", "mode", default="fixed")).strip().lower(),
            rtol=loader.floatval("integration", "rtol", default=1e-8),
            min_step=loader.floatval("integration", "min_step", default=1e-10),
            max_step=loader.floatval("integration", "max_step", default=1.0),
            sample_every=loader.intval("integration", "sample_every", default=1),
            stop_norm_ratio=stop_ratio,
            renormalize_attitude=loader.boolval("integration", "renormalize", default=False),
        )
    except ParameterError as exc:
        raise loader.error(str(exc), "integration") from None

    initial = _load_initial(loader, (grid1, grid2))

    return RunConfig(
        params=params,
        mode_grids=(grid1, grid2),
        initial=initial,
        integration=integration,
        k_sweep=sweep,
        output_dir=str(loader.raw("output", "directory", default="out")),
        csv_prefix=str(loader.raw("output", "csv_prefix", default="run")),
        emit_plot=loader.boolval("output", "plot", default=True),
    )
