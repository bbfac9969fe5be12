"""The cubic Approximant.

    Phi_t = N(r) / S + 1/2 log S + D log(1 + S),
    N = a0 + a1 g r + a2 r^2 + a3 g r^3,    S = sqrt(1 + b3 g r),

with ``a3 = (2/5) sqrt(b3)`` fixing the large-r behaviour and
``a1 = b3 (2 a0 - D - 1) / 4`` removing the linear term at the origin, so
``(a0, a2, b3)`` are the free parameters. States with radial nodes carry a
polynomial ``P(r^2)`` in front of ``exp(-Phi_t)``.

States with angular momentum l are handled in the effective dimension
``D + 2 l``; the phase keeps the space dimension D.
"""

import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from numpy.polynomial import polynomial
from pydantic import BaseModel, ConfigDict, Field

from anharmonic_cli.core import EffectiveState, FloatArray
from anharmonic_cli.nonlinearization import (
    WeightedGrid,
    ZeroOrder,
    inverse_problem,
    standard_grid,
)
from anharmonic_cli.quadrature import RadialGrid
from anharmonic_cli.utils.errors import ConstraintError, InvalidInputError

logger = logging.getLogger(__name__)

MAX_RADIAL_NODES = 2
ORTHOGONALITY_MARGIN = 20.0


class ApproximantParams(BaseModel):
    """Free parameters and context of one trial function.

    ``state`` is ``(n_r, l)`` of the reduced problem and ``poly`` the
    coefficients of ``P(r^2)``, constant term first; empty for nodeless states.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    dimension: float = Field(alias="D", gt=0)
    coupling: float = Field(alias="g", ge=0)
    a0: float
    a2: float = Field(gt=0)
    b3: float = Field(ge=0)
    state: tuple[int, int] = (0, 0)
    poly: tuple[float, ...] = ()

    @classmethod
    def initial(
        cls, dimension: float, coupling: float, state: EffectiveState | None = None
    ) -> "ApproximantParams":
        n_r, ell = (state.radial_nodes, state.angular_momentum) if state else (0, 0)

        return cls(
            D=dimension,
            g=coupling,
            a0=(dimension + 1) / 2,
            a2=0.5,
            b3=1.0,
            state=(n_r, ell),
        )

    @property
    def a1(self) -> float:
        return self.b3 * (2 * self.a0 - self.dimension - 1) / 4

    @property
    def a3(self) -> float:
        return 0.4 * self.b3**0.5

    @property
    def effective_dimension(self) -> float:
        return self.dimension + 2 * self.state[1]

    @property
    def radial_nodes(self) -> int:
        return self.state[0]

    def with_free(self, a0: float, a2: float, b3: float) -> "ApproximantParams":
        return self.model_copy(update={"a0": a0, "a2": a2, "b3": b3, "poly": ()})

    def with_factor(self, factor: "ExcitedFactor") -> "ApproximantParams":
        return self.model_copy(update={"poly": factor.coefficients})


def phase_derivatives(
    params: ApproximantParams, r: npt.ArrayLike
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """``Phi_t``, ``Phi_t'`` and ``Phi_t''``."""
    radius = np.asarray(r, dtype=float)
    g, d = params.coupling, params.dimension
    c = params.b3 * g

    s = np.sqrt(1 + c * radius)
    ds = c / (2 * s)
    d2s = -(c**2) / (4 * s**3)

    n = params.a0 + (params.a1 * g + (params.a2 + params.a3 * g * radius) * radius) * radius
    dn = params.a1 * g + (2 * params.a2 + 3 * params.a3 * g * radius) * radius
    d2n = 2 * params.a2 + 6 * params.a3 * g * radius

    value = n / s + 0.25 * np.log1p(c * radius) + d * np.log1p(s)
    first = dn / s - n * ds / s**2 + 0.5 * ds / s + d * ds / (1 + s)
    second = (
        d2n / s
        - 2 * dn * ds / s**2
        - n * d2s / s**2
        + 2 * n * ds**2 / s**3
        + 0.5 * (d2s / s - ds**2 / s**2)
        + d * (d2s / (1 + s) - ds**2 / (1 + s) ** 2)
    )

    return value, first, second


def phase(params: ApproximantParams, r: npt.ArrayLike) -> FloatArray:
    return phase_derivatives(params, r)[0]


def factor_values(
    params: ApproximantParams, r: npt.ArrayLike
) -> tuple[FloatArray, FloatArray]:
    """``P(r^2)`` and its r-derivative; ``(1, 0)`` for nodeless states."""
    radius = np.asarray(r, dtype=float)

    if not params.poly:
        return np.ones_like(radius), np.zeros_like(radius)

    x = radius * radius
    coefficients = np.asarray(params.poly, dtype=float)

    return (
        polynomial.polyval(x, coefficients),
        2 * radius * polynomial.polyval(x, polynomial.polyder(coefficients)),
    )


def wavefunction(params: ApproximantParams, r: npt.ArrayLike) -> FloatArray:
    """``P(r^2) exp(-Phi_t)``, without the ``r^l`` prefactor."""
    values, _ = factor_values(params, r)
    return values * np.exp(-phase(params, r))


def log_weight(params: ApproximantParams, r: npt.ArrayLike) -> FloatArray:
    """``(D_eff - 1) log r - 2 Phi_t``."""
    radius = np.asarray(r, dtype=float)
    d_eff = params.effective_dimension

    if d_eff == 1:
        return -2 * phase(params, radius)

    with np.errstate(divide="ignore"):
        return (d_eff - 1) * np.log(radius) - 2 * phase(params, radius)


def trial_grid(
    params: ApproximantParams,
    *,
    margin: float = 12.0,
    panels: int = 128,
    panel_order: int = 16,
) -> RadialGrid:
    return standard_grid(
        lambda r: log_weight(params, r),
        margin=margin,
        panels=panels,
        panel_order=panel_order,
    )


def zero_order(params: ApproximantParams) -> ZeroOrder:
    if params.poly:
        raise InvalidInputError("Only nodeless trial functions serve as zero order")

    return inverse_problem(
        lambda r: phase_derivatives(params, r)[0],
        lambda r: phase_derivatives(params, r)[1],
        lambda r: phase_derivatives(params, r)[2],
        params.effective_dimension,
    )


class ExcitedFactor(BaseModel):
    model_config = ConfigDict(frozen=True)

    radial_nodes: int
    angular_momentum: int
    coefficients: tuple[float, ...]
    nodes: tuple[float, ...]
    residuals: tuple[float, ...] = ()


def _overlap_row(
    params: ApproximantParams, lower: ApproximantParams, grid: RadialGrid | None
) -> FloatArray:
    """``int r^(2j) P_k(r^2) exp(-Phi - Phi_k) r^(D_eff - 1) dr`` for j = 0 ... n_r."""
    d_eff = params.effective_dimension

    def combined(r: FloatArray) -> FloatArray:
        return 0.5 * (log_weight(params, r) + log_weight(lower, r))

    grid = grid or standard_grid(combined, margin=ORTHOGONALITY_MARGIN)
    weighted = WeightedGrid.from_log_weight(grid, combined(grid.r), d_eff)

    lower_factor, _ = factor_values(lower, grid.r)
    x = grid.r**2

    return np.array(
        [
            weighted.integral(x**j * lower_factor)
            for j in range(params.radial_nodes + 1)
        ]
    )


def excited_factor_solve(
    params: ApproximantParams,
    lower_states: Sequence[ApproximantParams],
    *,
    grid: RadialGrid | None = None,
) -> ExcitedFactor:
    """``P(r^2)`` with leading coefficient 1, orthogonal to every lower state."""
    n_r, ell = params.state

    if not 1 <= n_r <= MAX_RADIAL_NODES:
        raise InvalidInputError(f"Radial excitations must satisfy 1 <= n_r <= {MAX_RADIAL_NODES}")

    if len(lower_states) != n_r:
        raise InvalidInputError(f"State ({n_r}, {ell}) needs the {n_r} lower states")

    for k, lower in enumerate(lower_states):
        if lower.state != (k, ell) or lower.dimension != params.dimension:
            raise InvalidInputError(f"Lower state {k} does not belong to the same family")

    overlaps = np.vstack([_overlap_row(params, lower, grid) for lower in lower_states])

    try:
        solution = np.linalg.solve(overlaps[:, :n_r], -overlaps[:, n_r])
    except np.linalg.LinAlgError as e:
        raise ConstraintError("Orthogonality conditions are singular") from e

    coefficients = np.append(solution, 1.0)
    roots = polynomial.polyroots(coefficients)

    if np.any(np.abs(roots.imag) > 1e-10 * (1 + np.abs(roots.real))) or np.any(
        roots.real <= 0
    ):
        raise ConstraintError(
            f"P(r^2) must have real positive roots in r^2, found {roots.tolist()}"
        )

    residuals = np.abs(overlaps @ coefficients) / (np.abs(overlaps) @ np.abs(coefficients))

    return ExcitedFactor(
        radial_nodes=n_r,
        angular_momentum=ell,
        coefficients=tuple(float(c) for c in coefficients),
        nodes=tuple(float(v) for v in np.sqrt(np.sort(roots.real))),
        residuals=tuple(float(v) for v in residuals),
    )
