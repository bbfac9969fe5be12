"""Strong-coupling expansion ``E = g^(2/5) (eps~_0 + eps~_1 g^(-4/5) + ...)``.

After the Symanzik scaling the cubic problem becomes ``W = w^3 + lambda^ w^2``
with ``lambda^ = g^(-4/5)``; eps~_0 is the ground state of ``w^3`` and eps~_1
the first-order response to ``w^2``.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel
from scipy.optimize import minimize_scalar
from scipy.special import gamma

from anharmonic_cli.approximant import ApproximantParams, zero_order
from anharmonic_cli.config import Settings
from anharmonic_cli.core import (
    EffectiveState,
    FloatArray,
    PotentialSpec,
    ScaledPotential,
)
from anharmonic_cli.mesh import solve_state
from anharmonic_cli.nonlinearization import (
    WeightedGrid,
    ZeroOrder,
    first_order_response,
    inverse_problem,
    mixed_second_order,
    perturbation_splitting,
    run_pt,
)
from anharmonic_cli.quadrature import integrate_radial
from anharmonic_cli.utils.errors import InvalidInputError, SingularityError
from anharmonic_cli.variational import corrected_energies, minimize

logger = logging.getLogger(__name__)

MAX_SIMPLE_ORDER = 6
CUBIC_POWER = 1.5
# g_k = 6 k / N, k = 1 ... N: moderate coupling, where both limits matter
FIT_WINDOW = 6.0
FIT_POINTS = 25
CHECK_RANGE = (0.01, 100.0)
RESPONSE_MARGIN = 20.0


@dataclass(frozen=True)
class SymanzikScaling:
    gamma: float
    potential: ScaledPotential
    energy_factor: float

    @property
    def coupling_hat(self) -> float:
        """Coefficient of the subleading power, ``g^(-4/5)`` for the cubic."""
        return 1 / self.gamma


def symanzik_scale(spec: PotentialSpec) -> SymanzikScaling:
    """``W = a_m r^m + a_(m-1) r^(m-1) / gamma + ... + a_2 r^2 / gamma^(m-2)``.

    Energies of the original problem are ``g^(2(m-2)/(m+2))`` times those of W.
    """
    if spec.coupling <= 0:
        raise InvalidInputError("The Symanzik scaling needs g > 0")

    m = spec.degree
    scale = spec.coupling ** (4 / (m + 2))
    coefficients = tuple(
        a * scale ** (k - m) for k, a in enumerate(spec.coefficients, start=2)
    )

    return SymanzikScaling(
        gamma=scale,
        potential=ScaledPotential(dimension=spec.dimension, coefficients=coefficients),
        energy_factor=spec.coupling ** (2 * (m - 2) / (m + 2)),
    )


def pure_cubic(dimension: float) -> ScaledPotential:
    return ScaledPotential(dimension=dimension, coefficients=(0.0, 1.0))


class StrongCoefficients(BaseModel):
    epsilon01: float
    epsilon10: float


def _gamma_ratio(numerator: float, denominator: float) -> float:
    if numerator <= 0 or denominator <= 0:
        raise SingularityError(
            f"Gamma function pole: arguments {numerator:.6g}, {denominator:.6g} must be positive"
        )

    return float(gamma(numerator) / gamma(denominator))


def general_strong_coefficients(
    dimension: float, power: float, coefficient: float = 1.0
) -> StrongCoefficients:
    """Closed forms for ``W = a w^(2p)`` about ``Phi = sqrt(a) w^(p+1) / (p+1)``.

    ``epsilon01`` is the first correction to eps~_0 and ``epsilon10`` the
    expectation value of ``w^2``.
    """
    if power <= 0.5:
        raise InvalidInputError("The power p must exceed 1/2")

    if coefficient <= 0:
        raise InvalidInputError("The coefficient a must be positive")

    p, d, a = power, dimension, coefficient

    epsilon01 = (
        a ** (1 / (p + 1))
        * (p + d - 1)
        * ((p + 1) / 2) ** ((p - 1) / (p + 1))
        * _gamma_ratio((d + p - 1) / (p + 1), d / (p + 1))
    )
    epsilon10 = ((p + 1) / (2 * math.sqrt(a))) ** (2 / (p + 1)) * _gamma_ratio(
        (d + 2) / (p + 1), d / (p + 1)
    )

    return StrongCoefficients(epsilon01=epsilon01, epsilon10=epsilon10)


def simple_trial_moment(
    dimension: float, exponent: float, power: float = CUBIC_POWER
) -> float:
    """``<w^exponent>`` in ``exp(-2 w^(p+1) / (p+1))`` by mapped Gauss-Laguerre."""
    scale = ((power + 1) / 2) ** (1 / (power + 1))

    def weight(w: FloatArray) -> FloatArray:
        return np.exp(-2 * w ** (power + 1) / (power + 1))

    # w^exponent w^(D-1) is the radial measure in D + exponent dimensions
    moment = integrate_radial(weight, dimension + exponent, scale, power=power + 1)
    norm = integrate_radial(weight, dimension, scale, power=power + 1)

    return moment.value / norm.value


def simple_zero_order(dimension: float, power: float = CUBIC_POWER) -> ZeroOrder:
    """``Phi = w^(p+1) / (p+1)``, exact for ``w^(2p) - (p + D - 1) w^(p-1)``."""
    return inverse_problem(
        lambda w: w ** (power + 1) / (power + 1),
        lambda w: w**power,
        lambda w: power * w ** (power - 1),
        dimension,
    )


class SimplePipeline(BaseModel):
    dimension: float
    corrections: tuple[float, ...]
    partial_sums: tuple[float, ...]
    closed_form: float


def epsilon0_simple_pipeline(
    dimension: float, order: int = MAX_SIMPLE_ORDER
) -> SimplePipeline:
    """Partial sums of eps~_0 about the simple trial ``exp(-(2/5) w^(5/2))``."""
    if not 0 <= order <= MAX_SIMPLE_ORDER:
        raise InvalidInputError(f"Order must be in [0, {MAX_SIMPLE_ORDER}]")

    closed_form = general_strong_coefficients(dimension, CUBIC_POWER).epsilon01
    zero = simple_zero_order(dimension)

    if order == 0:
        return SimplePipeline(
            dimension=dimension,
            corrections=(),
            partial_sums=(zero.energy,),
            closed_form=closed_form,
        )

    corrections = run_pt(
        zero,
        perturbation_splitting(lambda w: w**3, zero),
        order,
        margin=RESPONSE_MARGIN,
    )
    logger.debug("Simple-trial eps~_0 corrections: %s", corrections.energies)

    return SimplePipeline(
        dimension=dimension,
        corrections=corrections.energies,
        partial_sums=corrections.partial_sums,
        closed_form=closed_form,
    )


class LeadingCoefficient(BaseModel):
    variational: float
    correction: float
    corrected: float
    params: ApproximantParams


def epsilon0_approximant(
    dimension: float, *, settings: Settings | None = None
) -> LeadingCoefficient:
    """eps~_0 from the Approximant optimized on ``W = r^3`` plus its second correction."""
    potential = pure_cubic(dimension)
    state = EffectiveState(dimension=dimension, radial_nodes=0, angular_momentum=0)

    result = minimize(potential, state, settings=settings)
    result = corrected_energies(result, potential, order=2, settings=settings)
    assert result.e2 is not None

    return LeadingCoefficient(
        variational=result.energy,
        correction=result.e2,
        corrected=result.energy + result.e2,
        params=result.params,
    )


class SubleadingCoefficient(BaseModel):
    crude: float
    simple_correction: float
    simple_corrected: float
    first: float
    correction: float
    refined: float


def _response_pair(zero: ZeroOrder) -> tuple[float, float]:
    weighted = WeightedGrid.for_zero_order(zero, margin=RESPONSE_MARGIN)

    mismatch_response = first_order_response(
        weighted, perturbation_splitting(lambda w: w**3, zero)
    )
    square_response = first_order_response(weighted, lambda w: w**2)

    return (
        square_response.energy,
        mixed_second_order(weighted, mismatch_response, square_response),
    )


def epsilon1(
    dimension: float,
    *,
    params: ApproximantParams | None = None,
    settings: Settings | None = None,
) -> SubleadingCoefficient:
    """eps~_1 as ``<w^2>`` plus its mixed correction, about two zero orders.

    About the simple trial the mixed term is the first correction to the crude
    estimate; about the Approximant optimized on ``w^3`` it refines ``<w^2>``.
    """
    crude = simple_trial_moment(dimension, 2.0)
    _, simple_correction = _response_pair(simple_zero_order(dimension))

    if params is None:
        params = epsilon0_approximant(dimension, settings=settings).params

    first, correction = _response_pair(zero_order(params))

    return SubleadingCoefficient(
        crude=crude,
        simple_correction=simple_correction,
        simple_corrected=crude + simple_correction,
        first=first,
        correction=correction,
        refined=first + correction,
    )


class StrongExpansion(BaseModel):
    dimension: float
    epsilon0: float
    epsilon1: float
    leading: LeadingCoefficient
    subleading: SubleadingCoefficient
    simple: SimplePipeline
    epsilon0_mesh: float | None = None
    provenance: dict[str, str]

    def energy(self, coupling: float) -> float:
        """``g^(2/5) (eps~_0 + eps~_1 g^(-4/5))``."""
        return coupling**0.4 * (self.epsilon0 + self.epsilon1 * coupling**-0.8)


def strong_expansion(
    dimension: float,
    *,
    order: int = MAX_SIMPLE_ORDER,
    verify: bool = False,
    settings: Settings | None = None,
) -> StrongExpansion:
    settings = settings or Settings.get()
    leading = epsilon0_approximant(dimension, settings=settings)
    subleading = epsilon1(dimension, params=leading.params, settings=settings)

    mesh_value = None
    if verify:
        state = EffectiveState(dimension=dimension, radial_nodes=0, angular_momentum=0)
        mesh_value, _, _ = solve_state(
            pure_cubic(dimension), state, settings.mesh_size, settings.mesh_kind
        )

    return StrongExpansion(
        dimension=dimension,
        epsilon0=leading.corrected,
        epsilon1=subleading.refined,
        leading=leading,
        subleading=subleading,
        simple=epsilon0_simple_pipeline(dimension, order),
        epsilon0_mesh=mesh_value,
        provenance={
            "epsilon0": "Approximant on W = r^3, variational plus second correction",
            "epsilon1": "<w^2> about the optimal Approximant plus mixed correction",
            "simple": "corrections about exp(-(2/5) w^(5/2))",
            "epsilon0_mesh": f"{settings.mesh_kind} mesh, N = {settings.mesh_size}",
        },
    )


class InterpolationFit(BaseModel):
    dimension: float
    a: float
    b: float
    max_relative_error: float
    couplings: tuple[float, ...]
    energies: tuple[float, ...]
    fitted: tuple[float, ...]
    range_error: float | None = None


def interpolation(
    dimension: float, a: float, b: float, coupling: float | FloatArray
) -> float | FloatArray:
    """``D (1 + a g + b^5 g^2)^(1/5)``."""
    return dimension * (1 + a * coupling + b**5 * coupling**2) ** 0.2


def interpolation_samples(
    dimension: float,
    *,
    count: int = FIT_POINTS,
    settings: Settings | None = None,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Mesh ground-state energies on ``count`` equally spaced couplings in ``(0, 6]``."""
    settings = settings or Settings.get()
    state = EffectiveState(dimension=dimension, radial_nodes=0, angular_momentum=0)
    couplings = FIT_WINDOW * np.arange(1, count + 1) / count

    energies = [
        solve_state(
            PotentialSpec.cubic(dimension, float(g)),
            state,
            settings.mesh_size,
            settings.mesh_kind,
        )[0]
        for g in couplings
    ]

    return tuple(float(g) for g in couplings), tuple(energies)


def fit_interpolation(
    dimension: float,
    couplings: Sequence[float],
    energies: Sequence[float],
    epsilon0: float,
) -> InterpolationFit:
    """Least-squares ``a`` with ``b = eps~_0 / D`` fixed.

    Residuals are absolute, ``E_fit - E``; the reported error is relative.
    """
    if len(couplings) != len(energies) or not couplings:
        raise InvalidInputError("Couplings and energies must be non-empty and aligned")

    g = np.asarray(couplings, dtype=float)
    e = np.asarray(energies, dtype=float)
    b = epsilon0 / dimension

    def chi2(a: float) -> float:
        return float(np.sum((interpolation(dimension, a, b, g) - e) ** 2))

    result = minimize_scalar(
        chi2, bounds=(0.0, 50.0), method="bounded", options={"xatol": 1e-10}
    )
    a = float(result.x)
    fitted = np.asarray(interpolation(dimension, a, b, g), dtype=float)

    return InterpolationFit(
        dimension=dimension,
        a=a,
        b=b,
        max_relative_error=float(np.max(np.abs(fitted / e - 1))),
        couplings=tuple(float(v) for v in g),
        energies=tuple(float(v) for v in e),
        fitted=tuple(float(v) for v in fitted),
    )


def range_error(
    fit: InterpolationFit,
    *,
    count: int = FIT_POINTS,
    settings: Settings | None = None,
) -> float:
    """Largest relative error of the fit against the mesh on a log grid over ``[0.01, 100]``."""
    settings = settings or Settings.get()
    state = EffectiveState(dimension=fit.dimension, radial_nodes=0, angular_momentum=0)
    couplings = np.geomspace(*CHECK_RANGE, count)

    energies = np.array(
        [
            solve_state(
                PotentialSpec.cubic(fit.dimension, float(g)),
                state,
                settings.mesh_size,
                settings.mesh_kind,
            )[0]
            for g in couplings
        ]
    )
    fitted = interpolation(fit.dimension, fit.a, fit.b, couplings)

    return float(np.max(np.abs(fitted / energies - 1)))


def implied_epsilon2(
    dimension: float,
    couplings: Sequence[float],
    epsilon0: float,
    epsilon1: float,
    *,
    settings: Settings | None = None,
) -> tuple[float, ...]:
    """``g^(6/5) (E_mesh - g^(2/5) (eps~_0 + eps~_1 g^(-4/5)))`` per coupling."""
    settings = settings or Settings.get()
    state = EffectiveState(dimension=dimension, radial_nodes=0, angular_momentum=0)
    values = []

    for g in couplings:
        energy, _, _ = solve_state(
            PotentialSpec.cubic(dimension, g),
            state,
            settings.mesh_size,
            settings.mesh_kind,
        )
        values.append(g**1.2 * (energy - g**0.4 * (epsilon0 + epsilon1 * g**-0.8)))

    return tuple(values)

