"""Physical parameters of the body-plus-plates system and its effective inertia.

The carrier is a rigid body with principal moments of inertia I1, I2, I3.
Two rectangular plates are attached; plate n occupies the rectangle
[0, l1n] x [0, l2n] in its own frame, whose origin sits at offset
(d1n, d2n, d3n) from the body's fixed point.

``frozen_inertia`` evaluates the inertia tensor J of the system with the
plates treated as rigid laminae (closed-form rectangle moments).
``effective_inertia`` assembles the mass matrix M that multiplies the angular
acceleration once the plate accelerations have been eliminated from the
momentum balance, together with its closed-form inverse and determinant.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, SingularInertiaError


def _as_vector(value, size, name):
    arr = np.asarray(value, dtype=float)
    if arr.shape != (size,):
        raise ParameterError(f"{name} must be a {size}-vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class PlateSpec:
    """Geometry, mass, and stiffness of one rectangular plate.

    ``stiffness`` stores the squared stiffness parameter a^2 that multiplies
    the biharmonic term of the plate equation (derive it from material data
    with :func:`stiffness_from_material` if needed).
    """

    length_x1: float
    length_x2: float
    offset: np.ndarray
    area_density: float
    stiffness: float

    def __post_init__(self):
        object.__setattr__(self, "offset", _as_vector(self.offset, 3, "offset"))
        for name in ("length_x1", "length_x2", "area_density", "stiffness"):
            value = getattr(self, name)
            if not value > 0:
                raise ParameterError(f"PlateSpec.{name} must be strictly positive, got {value}")
            object.__setattr__(self, name, float(value))

    @property
    def area(self) -> float:
        return self.length_x1 * self.length_x2


@dataclass(frozen=True)
class BodyInertia:
    """Principal moments of inertia of the rigid carrier body."""

    principal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "principal", _as_vector(self.principal, 3, "principal"))
        if not np.all(self.principal > 0):
            raise ParameterError(
                f"principal moments of inertia must be strictly positive, got {self.principal}"
            )


@dataclass(frozen=True)
class Gains:
    """Feedback gains: angular-rate damping k and attitude weights alpha_i."""

    damping: float
    attitude: np.ndarray

    def __post_init__(self):
        if not self.damping > 0:
            raise ParameterError(f"damping gain must be strictly positive, got {self.damping}")
        object.__setattr__(self, "damping", float(self.damping))
        object.__setattr__(self, "attitude", _as_vector(self.attitude, 3, "attitude"))
        if not np.all(self.attitude > 0):
            raise ParameterError(
                f"attitude gains must be strictly positive, got {self.attitude}"
            )


@dataclass(frozen=True)
class SystemParams:
    """Complete parameter set: body, exactly two plates, and feedback gains.

    ``frozen_inertia_override`` replaces the geometric frozen-plate tensor J
    with a caller-supplied symmetric matrix.  This exists to reproduce runs
    that state J directly (e.g. "J is the identity") even when that value is
    inconsistent with the plate geometry; leave it ``None`` to compute J from
    the plates.
    """

    body: BodyInertia
    plates: tuple
    gains: Gains
    frozen_inertia_override: np.ndarray | None = None

    def __post_init__(self):
        plates = tuple(self.plates)
        if len(plates) != 2 or not all(isinstance(p, PlateSpec) for p in plates):
            raise ParameterError("SystemParams requires exactly two PlateSpec instances")
        object.__setattr__(self, "plates", plates)
        if self.frozen_inertia_override is not None:
            J = np.asarray(self.frozen_inertia_override, dtype=float)
            if J.shape != (3, 3):
                raise ParameterError("frozen_inertia_override must be a 3x3 matrix")
            if not np.allclose(J, J.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(J).max())):
                raise ParameterError("frozen_inertia_override must be symmetric")
            object.__setattr__(self, "frozen_inertia_override", 0.5 * (J + J.T))


@dataclass(frozen=True)
class EffectiveInertia:
    """Frozen-plate tensor J, effective mass matrix M, its inverse, and det M.

    M is the coefficient matrix of the angular acceleration in the momentum
    balance after the plate accelerations have been substituted out:

        M = [[I1 + S, 0,      J13     ],
             [0,      I2 + S, J23     ],
             [J13,    J23,    I3 + J33]],   S = sum_n rho_n d3n^2 l1n l2n.
    """

    frozen: np.ndarray
    mass_matrix: np.ndarray
    inverse: np.ndarray
    determinant: float


def stiffness_from_material(young: float, poisson: float, thickness: float,
                            density: float) -> float:
    """Plate stiffness parameter a^2 = E h^3 / (12 rho (1 - nu^2)).

    ``density`` is the area density of the plate.
    """
    if not young > 0:
        raise ParameterError(f"Young's modulus must be positive, got {young}")
    if not density > 0:
        raise ParameterError(f"area density must be positive, got {density}")
    if not thickness > 0:
        raise ParameterError(f"thickness must be positive, got {thickness}")
    if not abs(poisson) < 1:
        raise ParameterError(f"Poisson ratio must satisfy |nu| < 1, got {poisson}")
    return young * thickness**3 / (12.0 * density * (1.0 - poisson**2))


def rectangle_moments(plate: PlateSpec) -> dict:
    """Closed-form monomial moments of (x1 + d1), (x2 + d2) over the rectangle.

    Keys: ``area``, ``m1`` = int(x1+d1), ``m2`` = int(x2+d2),
    ``m11`` = int(x1+d1)^2, ``m22`` = int(x2+d2)^2, ``m12`` = int(x1+d1)(x2+d2).
    """
    l1, l2 = plate.length_x1, plate.length_x2
    d1, d2 = plate.offset[0], plate.offset[1]
    area = l1 * l2
    return {
        "area": area,
        "m1": area * (l1 / 2.0 + d1),
        "m2": area * (l2 / 2.0 + d2),
        "m11": area * (l1**2 / 3.0 + l1 * d1 + d1**2),
        "m22": area * (l2**2 / 3.0 + l2 * d2 + d2**2),
        "m12": area * (l1 / 2.0 + d1) * (l2 / 2.0 + d2),
    }


def frozen_inertia(plates) -> np.ndarray:
    """Inertia tensor J of the system with both plates frozen rigid.

    Each entry is a polynomial moment of the plate rectangle, accumulated over
    both plates; all six independent entries are evaluated in closed form.
    """
    J = np.zeros((3, 3))
    for plate in plates:
        rho = plate.area_density
        d3 = plate.offset[2]
        mom = rectangle_moments(plate)
        J[0, 0] += rho * (mom["m22"] + d3**2 * mom["area"])
        J[1, 1] += rho * (mom["m11"] + d3**2 * mom["area"])
        J[2, 2] += rho * (mom["m11"] + mom["m22"])
        J[0, 1] -= rho * mom["m12"]
        J[0, 2] -= rho * d3 * mom["m1"]
        J[1, 2] -= rho * d3 * mom["m2"]
    J[1, 0] = J[0, 1]
    J[2, 0] = J[0, 2]
    J[2, 1] = J[1, 2]
    return J


def effective_inertia(params: SystemParams, singular_rtol: float = 1e-12) -> EffectiveInertia:
    """Assemble M, its closed-form inverse, and determinant D.

    The inverse uses the explicit cofactor expressions valid for the
    M structure above (M12 = M21 = 0).  Raises
    :class:`SingularInertiaError` when |D| falls below
    ``singular_rtol * ||M||^3``.
    """
    if params.frozen_inertia_override is not None:
        J = params.frozen_inertia_override.copy()
    else:
        J = frozen_inertia(params.plates)

    I1, I2, I3 = params.body.principal
    S = sum(p.area_density * p.offset[2] ** 2 * p.area for p in params.plates)
    B1 = I1 + S
    B2 = I2 + S
    B3 = I3 + J[2, 2]
    J13, J23 = J[0, 2], J[1, 2]

    M = np.array([
        [B1, 0.0, J13],
        [0.0, B2, J23],
        [J13, J23, B3],
    ])

    D = B1 * B2 * B3 - B1 * J23**2 - B2 * J13**2
    scale = float(np.linalg.norm(M, 2))
    if abs(D) <= singular_rtol * scale**3:
        raise SingularInertiaError(
            f"effective mass matrix is singular: det={D!r}, threshold={singular_rtol * scale**3!r}"
        )

    inverse = np.array([
        [(B2 * B3 - J23**2) / D, J13 * J23 / D, -B2 * J13 / D],
        [J13 * J23 / D, (B1 * B3 - J13**2) / D, -B1 * J23 / D],
        [-B2 * J13 / D, -B1 * J23 / D, B1 * B2 / D],
    ])
    return EffectiveInertia(frozen=J, mass_matrix=M, inverse=inverse, determinant=D)
