"""Problem definitions shared by every solver.

A radial anharmonic oscillator is ``V(r) = a2 r^2 + a3 g r^3 + ... + am g^(m-2) r^m``
in ``D`` dimensions. Coefficients are stored in the g-power form so that the
harmonic limit ``g = 0`` needs no division by ``g``.
"""

import math
from typing import Protocol

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator

from anharmonic_cli.utils.errors import InvalidInputError

FloatArray = npt.NDArray[np.float64]


class Potential(Protocol):
    """Anything with a dimension and monomial coefficients of r^2 ... r^m."""

    @property
    def dimension(self) -> float: ...

    @property
    def radial_coefficients(self) -> tuple[float, ...]: ...

    def value(self, r: npt.ArrayLike) -> FloatArray: ...


def _polynomial_value(coefficients: tuple[float, ...], r: npt.ArrayLike) -> FloatArray:
    # coefficients[0] multiplies r^2
    radius = np.asarray(r, dtype=float)
    result = np.zeros_like(radius)

    for coefficient in reversed(coefficients):
        result = (result + coefficient) * radius

    return result * radius


class Conventions(BaseModel):
    model_config = ConfigDict(frozen=True)

    hbar: float = Field(default=1.0, gt=0)
    mass: float = Field(default=0.5, gt=0)

    @property
    def kinetic_factor(self) -> float:
        return self.hbar**2 / (2 * self.mass)


class PotentialSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    dimension: float = Field(gt=0)
    coupling: float = Field(ge=0)
    coefficients: tuple[float, ...]

    @field_validator("coefficients")
    @classmethod
    def _check_coefficients(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if len(value) < 2:
            raise ValueError("coefficients must list a2 ... am with m >= 3")

        if value[0] <= 0:
            raise ValueError("a2 must be positive")

        if value[-1] <= 0:
            raise ValueError("the leading coefficient am must be positive")

        return value

    @classmethod
    def cubic(cls, dimension: float, coupling: float) -> "PotentialSpec":
        return cls(dimension=dimension, coupling=coupling, coefficients=(1.0, 1.0))

    @property
    def degree(self) -> int:
        return len(self.coefficients) + 1

    @property
    def radial_coefficients(self) -> tuple[float, ...]:
        return tuple(
            a * self.coupling ** (k - 2)
            for k, a in enumerate(self.coefficients, start=2)
        )

    def coefficient(self, k: int) -> float:
        """a_k with a_k = 0 outside 2..m."""
        if 2 <= k <= self.degree:
            return self.coefficients[k - 2]

        return 0.0

    def value(self, r: npt.ArrayLike) -> FloatArray:
        return _polynomial_value(self.radial_coefficients, r)

    def with_coupling(self, coupling: float) -> "PotentialSpec":
        return self.model_copy(update={"coupling": coupling})


class ScaledPotential(BaseModel):
    """Polynomial potential given directly by its r^k coefficients.

    Used for Symanzik-scaled problems where the r^2 term may vanish
    (the pure cubic W = r^3).
    """

    model_config = ConfigDict(frozen=True)

    dimension: float = Field(gt=0)
    coefficients: tuple[float, ...]

    @field_validator("coefficients")
    @classmethod
    def _check_coefficients(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not value or value[-1] <= 0:
            raise ValueError("the leading coefficient must be positive")

        if any(c < 0 for c in value):
            raise ValueError("coefficients must be non-negative")

        return value

    @property
    def degree(self) -> int:
        return len(self.coefficients) + 1

    @property
    def radial_coefficients(self) -> tuple[float, ...]:
        return self.coefficients

    def value(self, r: npt.ArrayLike) -> FloatArray:
        return _polynomial_value(self.coefficients, r)


class StateLabel(BaseModel):
    """Quantum numbers (n_r, l).

    For D = 1 only l = 0 is allowed and ``radial_quantum_number`` is the
    excitation number n of the full-line problem.
    """

    model_config = ConfigDict(frozen=True)

    radial_quantum_number: int = Field(default=0, ge=0)
    angular_momentum: int = Field(default=0, ge=0)

    @classmethod
    def parse(cls, value: str) -> "StateLabel":
        try:
            n_r, ell = (int(part) for part in value.split(","))
        except ValueError as e:
            raise InvalidInputError(
                f"Invalid state {value!r}, expected 'n_r,l' such as '0,1'"
            ) from e

        if n_r < 0 or ell < 0:
            raise InvalidInputError(f"Invalid state {value!r}, quantum numbers are >= 0")

        return cls(radial_quantum_number=n_r, angular_momentum=ell)

    def __str__(self) -> str:
        return f"{self.radial_quantum_number},{self.angular_momentum}"


class EffectiveState(BaseModel):
    """A state mapped onto a nodeless-or-nodal problem in D_eff = D + 2l.

    ``dimension`` stays the space dimension, used by the trial phase;
    weights and kinetic terms use ``effective_dimension``.
    """

    model_config = ConfigDict(frozen=True)

    dimension: float
    radial_nodes: int
    angular_momentum: int

    @property
    def effective_dimension(self) -> float:
        return self.dimension + 2 * self.angular_momentum

    @property
    def is_nodeless(self) -> bool:
        return self.radial_nodes == 0


def reduce_state(dimension: float, state: StateLabel) -> EffectiveState:
    if dimension == 1:
        if state.angular_momentum != 0:
            raise InvalidInputError("For D = 1 only l = 0 is admitted")

        # the odd full-line states are x e^{-phi}: a D = 1 problem with l = 1
        n = state.radial_quantum_number
        return EffectiveState(dimension=1, radial_nodes=n // 2, angular_momentum=n % 2)

    return EffectiveState(
        dimension=dimension,
        radial_nodes=state.radial_quantum_number,
        angular_momentum=state.angular_momentum,
    )


def evaluate_potential(spec: PotentialSpec, r: float) -> float:
    if not math.isfinite(r):
        raise InvalidInputError("r must be finite")

    return float(spec.value(r))


def effective_coupling(
    spec: PotentialSpec, conventions: Conventions | None = None
) -> float:
    conventions = conventions or Conventions()

    return conventions.kinetic_factor**0.25 * spec.coupling


def strong_effective_coupling(
    spec: PotentialSpec, conventions: Conventions | None = None
) -> float:
    conventions = conventions or Conventions()

    if spec.coupling <= 0:
        raise InvalidInputError("The strong-coupling constant needs g > 0")

    m = spec.degree
    gamma = spec.coupling ** (4 / (m + 2))

    return conventions.kinetic_factor ** (1 / (m + 2)) * gamma


def degeneracy(dimension: int, angular_momentum: int) -> int:
    if dimension < 2:
        raise InvalidInputError("The degeneracy count needs D >= 2")

    if angular_momentum < 0:
        raise InvalidInputError("l must be non-negative")

    if angular_momentum == 0:
        return 1

    ell, d = angular_momentum, dimension
    numerator = (2 * ell + d - 2) * math.factorial(ell + d - 3)

    return numerator // (math.factorial(ell) * math.factorial(d - 2))

