"""Sine eigenbasis of a simply supported rectangular plate.

Basis functions are products of sines,

    W_mn(x1, x2) = sin(m pi x1 / l1) * sin(n pi x2 / l2),

which satisfy the simply-supported boundary conditions (zero displacement and
zero normal curvature) and are eigenfunctions of the Laplacian with eigenvalue
lam = (m pi / l1)^2 + (n pi / l2)^2; the biharmonic operator therefore acts as
lam^2 on each mode.

Besides the eigenvalues, the basis carries the two first-moment coupling
integrals per mode,

    p1 = int (x1 + d1) W dx,    p2 = int (x2 + d2) W dx,

which weight the inertial coupling between base rotation and plate bending.
Both plates use the same formulas with their own geometry; the mirrored frame
of the second plate does not flip the sign pattern (the double sign reversal
of its coordinates and displacement cancels out).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LayoutError, ParameterError
from .params import PlateSpec


@dataclass(frozen=True, order=True)
class ModeIndex:
    """Half-wave counts (m, n) along x1 and x2; both start at 1."""

    m: int
    n: int

    def __post_init__(self):
        if not (isinstance(self.m, int) and isinstance(self.n, int)):
            raise ParameterError(f"mode indices must be integers, got ({self.m!r}, {self.n!r})")
        if self.m < 1 or self.n < 1:
            raise ParameterError(f"mode indices must be >= 1, got ({self.m}, {self.n})")


def mode_grid(m_max: int, n_max: int) -> tuple:
    """Row-major rectangular mode grid: (1,1), (1,2), ..., (m_max, n_max)."""
    return tuple(ModeIndex(m, n) for m in range(1, m_max + 1) for n in range(1, n_max + 1))


def sine_moment(length: float, m: int) -> float:
    """int_0^l sin(m pi x / l) dx = l (1 - (-1)^m) / (m pi)."""
    return length * (1.0 - (-1.0) ** m) / (m * np.pi)


def sine_first_moment(length: float, m: int) -> float:
    """int_0^l x sin(m pi x / l) dx = l^2 (-1)^(m+1) / (m pi)."""
    return length**2 * (-1.0) ** (m + 1) / (m * np.pi)


@dataclass(frozen=True)
class ModalBasis:
    """Eigenvalues and coupling integrals for a fixed mode grid on one plate.

    The mode ordering is exactly the order of ``modes`` (row-major when built
    via :func:`mode_grid`) and fixes the layout of the amplitude coordinates
    everywhere downstream.
    """

    plate: PlateSpec
    modes: tuple
    laplace_eigenvalue: np.ndarray
    norm_factor: float
    p1: np.ndarray
    p2: np.ndarray

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def biharmonic_eigenvalue(self) -> np.ndarray:
        """Eigenvalue of the squared Laplacian per mode: lam^2."""
        return self.laplace_eigenvalue**2


def build_basis(plate: PlateSpec, modes) -> ModalBasis:
    """Build the sine basis for ``plate`` on the given duplicate-free mode list."""
    modes = tuple(modes)
    if not modes:
        raise LayoutError("mode grid must not be empty")
    if len(set(modes)) != len(modes):
        raise LayoutError(f"duplicate mode indices in grid: {modes}")
    l1, l2 = plate.length_x1, plate.length_x2
    d1, d2 = plate.offset[0], plate.offset[1]

    lam = np.array([(mi.m * np.pi / l1) ** 2 + (mi.n * np.pi / l2) ** 2 for mi in modes])
    p1 = np.array([
        (sine_first_moment(l1, mi.m) + d1 * sine_moment(l1, mi.m)) * sine_moment(l2, mi.n)
        for mi in modes
    ])
    p2 = np.array([
        sine_moment(l1, mi.m) * (sine_first_moment(l2, mi.n) + d2 * sine_moment(l2, mi.n))
        for mi in modes
    ])
    return ModalBasis(
        plate=plate,
        modes=modes,
        laplace_eigenvalue=lam,
        norm_factor=l1 * l2 / 4.0,
        p1=p1,
        p2=p2,
    )


def mode_shape(basis: ModalBasis, index: int, x1, x2):
    """Evaluate basis function ``index`` at points (x1, x2) (vectorized)."""
    mi = basis.modes[index]
    l1, l2 = basis.plate.length_x1, basis.plate.length_x2
    return np.sin(mi.m * np.pi * np.asarray(x1) / l1) * np.sin(mi.n * np.pi * np.asarray(x2) / l2)


def eval_displacement(basis: ModalBasis, amplitudes, point) -> float:
    """Transverse displacement at ``point`` for the given modal amplitudes.

    ``point`` must lie inside the plate rectangle (boundary included, where
    the displacement is exactly zero).
    """
    amplitudes = np.asarray(amplitudes, dtype=float)
    if amplitudes.shape != (basis.n_modes,):
        raise LayoutError(
            f"expected {basis.n_modes} amplitudes, got shape {amplitudes.shape}"
        )
    x1, x2 = float(point[0]), float(point[1])
    l1, l2 = basis.plate.length_x1, basis.plate.length_x2
    if not (0.0 <= x1 <= l1 and 0.0 <= x2 <= l2):
        raise DomainError(f"point ({x1}, {x2}) outside plate rectangle [0,{l1}]x[0,{l2}]")
    total = 0.0
    for amp, mi in zip(amplitudes, basis.modes):
        total += amp * np.sin(mi.m * np.pi * x1 / l1) * np.sin(mi.n * np.pi * x2 / l2)
    return float(total)
