"""Corrections to a known zero-order wavefunction.

For ``Psi_0 = exp(-Phi)`` with ``y_0 = Phi'`` and weight ``w = r^(D-1) Psi_0^2``
the n-th correction to the logarithmic derivative obeys

    (w y_n)' = (E_n - Q_n) w,    Q_1 = V_1,    Q_n = -sum_k y_k y_(n-k),

so ``E_n`` is the w-average of ``Q_n`` and ``y_n`` a running integral divided
by ``w``. Integrals run from the left up to the peak of ``w`` and from the
right beyond it, which keeps the division stable where ``w`` is tiny.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import cache

import numpy as np
import numpy.typing as npt
from scipy.optimize import brentq

from anharmonic_cli.core import FloatArray
from anharmonic_cli.quadrature import RadialGrid
from anharmonic_cli.utils.errors import InvalidInputError, SingularityError

logger = logging.getLogger(__name__)

RadialFunction = Callable[[FloatArray], FloatArray]

# exp(-69) ~ 1e-30 of the peak weight
LOG_WEIGHT_DROP = 69.0
MAX_PT_ORDER = 8
GRID_R_MIN = 1e-10
SCAN_RADII = np.geomspace(1e-6, 1e6, 721)


def _as_radius(r: npt.ArrayLike) -> FloatArray:
    return np.asarray(r, dtype=float)


@dataclass(frozen=True)
class ZeroOrder:
    """Zero-order phase, its derivatives and the potential it solves exactly.

    ``dimension`` is the effective dimension of the radial weight.
    """

    phase: RadialFunction
    derivative: RadialFunction
    second_derivative: RadialFunction
    energy: float
    dimension: float
    curvature: float

    def wavefunction(self, r: npt.ArrayLike) -> FloatArray:
        return np.exp(-self.phase(_as_radius(r)))

    def log_weight(self, r: npt.ArrayLike) -> FloatArray:
        radius = _as_radius(r)

        if self.dimension == 1:
            return -2 * self.phase(radius)

        with np.errstate(divide="ignore"):
            return (self.dimension - 1) * np.log(radius) - 2 * self.phase(radius)

    def potential(self, r: npt.ArrayLike) -> FloatArray:
        """``V_t = E_0 + Phi'^2 - Phi'' - (D - 1) Phi' / r``."""
        radius = _as_radius(r)
        y = self.derivative(radius)

        safe = np.where(radius > 0, radius, 1.0)
        over_r = np.where(radius > 0, y / safe, self.curvature)

        return self.energy + y * y - self.second_derivative(radius) - (
            self.dimension - 1
        ) * over_r


def inverse_problem(
    phase: RadialFunction,
    derivative: RadialFunction,
    second_derivative: RadialFunction,
    dimension: float,
    *,
    gauge: float | None = None,
) -> ZeroOrder:
    """The potential for which ``exp(-phase)`` is an exact eigenfunction.

    Without an explicit ``gauge`` the energy is ``D Phi''(0)``, which makes
    the induced potential vanish at the origin.
    """
    if dimension <= 0:
        raise InvalidInputError("dimension must be positive")

    curvature = float(second_derivative(np.zeros(1))[0])
    if not np.isfinite(curvature):
        raise SingularityError("Phi'' is not finite at r = 0")

    small = np.array([1e-8, 1e-6])
    ratios = derivative(small) / small
    if not np.all(np.isfinite(ratios)) or np.any(
        np.abs(ratios - curvature) > 1e-2 * (1 + abs(curvature))
    ):
        raise SingularityError("Phi'/r does not extend continuously to r = 0")

    zero = ZeroOrder(
        phase=phase,
        derivative=derivative,
        second_derivative=second_derivative,
        energy=dimension * curvature if gauge is None else gauge,
        dimension=dimension,
        curvature=curvature,
    )

    # raises when Psi_0 is not normalizable
    weight_extent(zero.log_weight)

    return zero


def harmonic_zero_order(dimension: float) -> ZeroOrder:
    """``Phi = r^2 / 2``: ``V_t = r^2`` with ``E_0 = D``."""
    return inverse_problem(
        lambda r: 0.5 * r * r,
        lambda r: np.asarray(r, dtype=float),
        lambda r: np.ones_like(r, dtype=float),
        dimension,
    )


def perturbation_splitting(target: RadialFunction, zero: ZeroOrder) -> RadialFunction:
    """``V_1 = V - V_t``."""

    def perturbation(r: FloatArray) -> FloatArray:
        return np.asarray(target(r), dtype=float) - zero.potential(r)

    return perturbation


def weight_extent(
    log_weight: RadialFunction, drop: float = LOG_WEIGHT_DROP
) -> tuple[float, float]:
    """Radius of the weight's maximum and where it has fallen by ``exp(-drop)``."""
    with np.errstate(all="ignore"):
        values = np.asarray(log_weight(SCAN_RADII), dtype=float)

    values = np.where(np.isfinite(values), values, -np.inf)
    peak = int(np.argmax(values))
    top = values[peak]

    if not np.isfinite(top):
        raise SingularityError("The weight r^(D-1) Psi^2 vanishes on the whole scan")

    level = top - drop
    below = np.nonzero(values[peak:] < level)[0]

    if below.size == 0:
        raise SingularityError("The weight r^(D-1) Psi^2 does not decay: not normalizable")

    index = peak + int(below[0])
    r_max = brentq(
        lambda r: float(log_weight(np.array([r]))[0]) - level,
        SCAN_RADII[index - 1],
        SCAN_RADII[index],
        xtol=1e-12,
    )

    return float(SCAN_RADII[peak]), float(r_max)


def standard_grid(
    log_weight: RadialFunction,
    *,
    margin: float = 0.0,
    panels: int = 128,
    panel_order: int = 16,
) -> RadialGrid:
    _, r_max = weight_extent(log_weight, LOG_WEIGHT_DROP + margin)
    logger.debug("Standard grid up to r_max=%.6g (%s panels)", r_max, panels)

    return RadialGrid.build(
        r_max, panels=panels, panel_order=panel_order, r_min=GRID_R_MIN
    )


@dataclass(frozen=True)
class WeightedGrid:
    """A radial grid with the weight ``exp(log_weight - log_scale)`` sampled on it."""

    grid: RadialGrid
    density: FloatArray
    log_scale: float
    dimension: float
    peak_radius: float

    @classmethod
    def from_log_weight(
        cls, grid: RadialGrid, log_weight: FloatArray, dimension: float
    ) -> "WeightedGrid":
        peak = int(np.argmax(log_weight))
        scale = float(log_weight[peak])

        return cls(
            grid=grid,
            density=np.exp(log_weight - scale),
            log_scale=scale,
            dimension=dimension,
            peak_radius=float(grid.r[peak]),
        )

    @classmethod
    def for_zero_order(
        cls,
        zero: ZeroOrder,
        *,
        margin: float = 0.0,
        panels: int = 128,
        panel_order: int = 16,
    ) -> "WeightedGrid":
        grid = standard_grid(
            zero.log_weight, margin=margin, panels=panels, panel_order=panel_order
        )
        return cls.from_log_weight(grid, zero.log_weight(grid.r), zero.dimension)

    @property
    def r(self) -> FloatArray:
        return self.grid.r

    def head(self, values: FloatArray) -> float:
        # w ~ r^(D-1) below the first node
        return float(values[0] * self.density[0] * self.grid.r_min / self.dimension)

    def integral(self, values: npt.ArrayLike) -> float:
        sampled = np.broadcast_to(np.asarray(values, dtype=float), self.r.shape)

        return self.grid.integrate(sampled * self.density) + self.head(sampled)

    def mean(self, values: npt.ArrayLike) -> float:
        return self.integral(values) / self.integral(1.0)


def correction_step(
    weighted: WeightedGrid, q: FloatArray
) -> tuple[float, FloatArray]:
    """``E_n`` and ``y_n`` sampled on the grid for a given ``Q_n``."""
    energy = weighted.mean(q)
    integrand = (energy - q) * weighted.density

    head = float(integrand[0] * weighted.grid.r_min / weighted.dimension)
    left = head + weighted.grid.cumulative(integrand)
    right = -weighted.grid.tail(integrand)

    flux = np.where(weighted.r < weighted.peak_radius, left, right)

    return energy, flux / weighted.density


@dataclass(frozen=True)
class CorrectionSet:
    zero_energy: float
    energies: tuple[float, ...]
    r: FloatArray
    y0: FloatArray
    corrections: tuple[FloatArray, ...]
    density: FloatArray

    @property
    def order(self) -> int:
        return len(self.energies)

    @property
    def partial_sums(self) -> tuple[float, ...]:
        return tuple(
            self.zero_energy + sum(self.energies[:n]) for n in range(self.order + 1)
        )

    def boundary_flux(self, n: int) -> tuple[float, float]:
        """``y_n w`` at the first and last grid node."""
        flux = self.corrections[n - 1] * self.density
        return float(flux[0]), float(flux[-1])

    def ratio(self) -> FloatArray:
        """``|y_1 / y_0|``."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.abs(self.corrections[0] / self.y0)


def run_pt(
    zero: ZeroOrder,
    perturbation: RadialFunction,
    order: int,
    *,
    weighted: WeightedGrid | None = None,
    margin: float = 0.0,
    panels: int = 128,
    panel_order: int = 16,
) -> CorrectionSet:
    if not 1 <= order <= MAX_PT_ORDER:
        raise InvalidInputError(f"PT order must be in [1, {MAX_PT_ORDER}]")

    weighted = weighted or WeightedGrid.for_zero_order(
        zero, margin=margin, panels=panels, panel_order=panel_order
    )
    r = weighted.r

    energies: list[float] = []
    corrections: list[FloatArray] = []

    for n in range(1, order + 1):
        if n == 1:
            q = np.asarray(perturbation(r), dtype=float)
        else:
            q = -sum(
                (corrections[k - 1] * corrections[n - k - 1] for k in range(1, n)),
                np.zeros_like(r),
            )

        energy, y = correction_step(weighted, q)
        energies.append(energy)
        corrections.append(y)

    logger.debug("PT corrections up to order %s: %s", order, energies)

    return CorrectionSet(
        zero_energy=zero.energy,
        energies=tuple(energies),
        r=r,
        y0=zero.derivative(r),
        corrections=tuple(corrections),
        density=weighted.density,
    )


@dataclass(frozen=True)
class FirstOrderResponse:
    energy: float
    correction: FloatArray


def first_order_response(
    weighted: WeightedGrid, perturbation: RadialFunction
) -> FirstOrderResponse:
    energy, y = correction_step(weighted, np.asarray(perturbation(weighted.r), dtype=float))
    return FirstOrderResponse(energy=energy, correction=y)


def mixed_second_order(
    weighted: WeightedGrid, first: FirstOrderResponse, second: FirstOrderResponse
) -> float:
    """Energy coefficient of ``lambda_a lambda_b`` for two simultaneous perturbations."""
    return -2 * weighted.mean(first.correction * second.correction)


@cache
def weak_coupling_energies(dimension: float, order: int) -> tuple[float, ...]:
    """eps_1 ... eps_N of ``E = D + eps_1 g + eps_2 g^2 + ...`` for ``r^2 + g r^3``."""
    zero = harmonic_zero_order(dimension)
    perturbation = perturbation_splitting(lambda r: r**2 + r**3, zero)

    corrections = run_pt(zero, perturbation, order, margin=20.0)

    return corrections.energies


@dataclass(frozen=True)
class DeviationMetrics:
    max_relative_deviation: float
    r: FloatArray
    ratio: FloatArray | None
    compared_points: int = 0
    compared_radius: float | None = None


def normalized_wavefunction(
    zero: ZeroOrder, r: npt.ArrayLike, *, weighted: WeightedGrid | None = None
) -> FloatArray:
    """``Psi_0`` scaled to unit norm under ``r^(D-1) dr``."""
    weighted = weighted or WeightedGrid.for_zero_order(zero, margin=10.0)
    log_norm = weighted.log_scale + np.log(weighted.integral(1.0))

    return np.exp(-zero.phase(_as_radius(r)) - 0.5 * log_norm)


def deviation_metrics(
    zero: ZeroOrder,
    r: npt.ArrayLike,
    reference: npt.ArrayLike,
    *,
    corrections: CorrectionSet | None = None,
    resolved: npt.ArrayLike | None = None,
    threshold: float = 1e-10,
) -> DeviationMetrics:
    """Largest ``|Psi_0 / Psi_ref - 1|`` where the reference exceeds ``threshold`` of its peak.

    ``resolved`` further restricts the comparison to the points where the
    reference itself is converged; NaN when no point is left.
    """
    radius = _as_radius(r)
    psi_ref = np.abs(np.asarray(reference, dtype=float))

    if radius.shape != psi_ref.shape:
        raise InvalidInputError("r and the reference wavefunction differ in shape")

    mask = psi_ref > threshold * psi_ref.max()

    if resolved is not None:
        resolved = np.asarray(resolved, dtype=bool)
        if resolved.shape != mask.shape:
            raise InvalidInputError("The resolved mask and the reference differ in shape")
        mask &= resolved

    deviation, compared_radius = math.nan, None

    if mask.any():
        trial = normalized_wavefunction(zero, radius[mask])
        deviation = float(np.max(np.abs(trial / psi_ref[mask] - 1)))
        compared_radius = float(radius[mask].max())
    else:
        logger.warning("No reference point is left to compare the trial function with")

    return DeviationMetrics(
        max_relative_deviation=deviation,
        r=corrections.r if corrections else radius,
        ratio=corrections.ratio() if corrections else None,
        compared_points=int(mask.sum()),
        compared_radius=compared_radius,
    )
