"""Exception types raised by the platespin package."""


class PlateSpinError(Exception):
    """Base class for all package errors."""


class ParameterError(PlateSpinError):
    """A physical parameter is outside its admissible domain."""


class SingularInertiaError(PlateSpinError):
    """The effective mass matrix is singular (or numerically too close to it)."""


class LayoutError(PlateSpinError):
    """State, basis, or amplitude shapes do not match each other."""


class DomainError(PlateSpinError):
    """A spatial point lies outside the plate rectangle."""


class ConfigError(PlateSpinError):
    """A run configuration file is missing keys, ill-typed, or violates an invariant."""

    def __init__(self, message, path=None, line=None, key=None):
        self.path = path
        self.line = line
        self.key = key
        prefix = ""
        if path is not None:
            prefix = f"{path}:" if line is None else f"{path}:{line}:"
        if key is not None:
            prefix += f" [{key}]"
        super().__init__(f"{prefix} {message}".strip())


class IntegrationError(PlateSpinError):
    """Base class for time-integration failures."""


class BlowupError(IntegrationError):
    """The state or its derivative became non-finite at time ``t``."""

    def __init__(self, t, message="non-finite value encountered"):
        self.t = t
        super().__init__(f"{message} at t={t!r}")


class StepSizeError(IntegrationError):
    """Adaptive stepping could not meet the tolerance above the minimum step."""

    def __init__(self, t, step, message="step size fell below the allowed minimum"):
        self.t = t
        self.step = step
        super().__init__(f"{message} at t={t!r} (step={step!r})")
