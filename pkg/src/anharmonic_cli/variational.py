import logging
import math
from collections.abc import Callable, Sequence

import numpy as np
from pydantic import BaseModel
from scipy.optimize import minimize as scipy_minimize

from anharmonic_cli.approximant import (
    ApproximantParams,
    ExcitedFactor,
    excited_factor_solve,
    factor_values,
    log_weight,
    phase_derivatives,
    trial_grid,
    zero_order,
)
from anharmonic_cli.config import Settings
from anharmonic_cli.core import EffectiveState, Potential, PotentialSpec
from anharmonic_cli.nonlinearization import (
    CorrectionSet,
    WeightedGrid,
    perturbation_splitting,
    run_pt,
)
from anharmonic_cli.quadrature import RadialGrid
from anharmonic_cli.utils.errors import (
    AnharmonicError,
    ConvergenceError,
    InvalidInputError,
)

logger = logging.getLogger(__name__)

A0_BOUNDS = (-5.0, 5.0)
A2_BOUNDS = (1e-6, 10.0)
B3_BOUNDS = (0.0, 50.0)
A2_SCALE = 0.5
MAX_ITERATIONS = 4000
POLISH_XTOL = 1e-10
POLISH_FTOL = 1e-14


class OptimizerDiagnostics(BaseModel):
    iterations: int = 0
    evaluations: int = 0
    restarts: int = 0
    simplex_size: float = 0.0
    converged: bool = True


class VariationalResult(BaseModel):
    params: ApproximantParams
    energy: float
    e2: float | None = None
    e3: float | None = None
    nodes: tuple[float, ...] = ()
    diagnostics: OptimizerDiagnostics = OptimizerDiagnostics()

    @property
    def corrected(self) -> float | None:
        """``E_var + E_2``."""
        return None if self.e2 is None else self.energy + self.e2

    @property
    def corrected3(self) -> float | None:
        if self.e2 is None or self.e3 is None:
            return None

        return self.energy + self.e2 + self.e3


def trial_coupling(potential: Potential) -> float:
    # scaled potentials such as W = r^3 use the g = 1 trial
    return potential.coupling if isinstance(potential, PotentialSpec) else 1.0


def rayleigh_quotient(
    params: ApproximantParams,
    potential: Potential,
    *,
    grid: RadialGrid | None = None,
    settings: Settings | None = None,
) -> float:
    """``int [(P' - P Phi')^2 + V P^2] w / int P^2 w`` with ``w = r^(D_eff-1) e^(-2 Phi)``.

    The centrifugal term is absorbed by the effective dimension.
    """
    if grid is None:
        settings = settings or Settings.get()
        grid = trial_grid(
            params, panels=settings.grid_panels, panel_order=settings.panel_order
        )

    r = grid.r
    weighted = WeightedGrid.from_log_weight(
        grid, log_weight(params, r), params.effective_dimension
    )
    _, dphi, _ = phase_derivatives(params, r)
    f, df = factor_values(params, r)

    kinetic = (df - f * dphi) ** 2
    numerator = weighted.integral(kinetic + np.asarray(potential.value(r)) * f * f)
    denominator = weighted.integral(f * f)

    return numerator / denominator


def _scaled(params: ApproximantParams) -> np.ndarray:
    return np.array([params.a0, params.a2 / A2_SCALE, params.b3 / (1 + params.coupling)])


def _unscaled(base: ApproximantParams, x: Sequence[float]) -> ApproximantParams:
    return base.with_free(
        float(x[0]), float(x[1]) * A2_SCALE, float(x[2]) * (1 + base.coupling)
    )


def _bounds(coupling: float) -> list[tuple[float, float]]:
    return [
        A0_BOUNDS,
        (A2_BOUNDS[0] / A2_SCALE, A2_BOUNDS[1] / A2_SCALE),
        (B3_BOUNDS[0] / (1 + coupling), B3_BOUNDS[1] / (1 + coupling)),
    ]


def _initial_simplex(
    x: np.ndarray, step: float, bounds: list[tuple[float, float]]
) -> np.ndarray:
    simplex = np.tile(x, (len(x) + 1, 1))

    for i, (low, high) in enumerate(bounds):
        # step inwards when the vertex would leave the box
        delta = step if x[i] + step <= high else -step
        simplex[i + 1, i] = min(max(x[i] + delta, low), high)

    return simplex


def _with_factor(
    params: ApproximantParams,
    lower: Sequence[ApproximantParams],
    grid: RadialGrid | None,
) -> tuple[ApproximantParams, ExcitedFactor | None]:
    if params.radial_nodes == 0:
        return params, None

    factor = excited_factor_solve(params, lower, grid=grid)
    return params.with_factor(factor), factor


def _objective(
    base: ApproximantParams,
    potential: Potential,
    lower_states: Sequence[ApproximantParams],
    grid: RadialGrid,
) -> Callable[[np.ndarray], float]:
    def objective(point: np.ndarray) -> float:
        try:
            params, _ = _with_factor(_unscaled(base, point), lower_states, grid)
            value = rayleigh_quotient(params, potential, grid=grid)
        except (AnharmonicError, np.linalg.LinAlgError, FloatingPointError):
            return math.inf

        return value if math.isfinite(value) else math.inf

    return objective


def minimize(
    potential: Potential,
    state: EffectiveState,
    *,
    initial: ApproximantParams | None = None,
    lower_states: Sequence[ApproximantParams] = (),
    settings: Settings | None = None,
) -> VariationalResult:
    """Optimal ``(a0, a2, b3)`` by Nelder-Mead with deterministic restarts.

    Works in ``(a0, a2 / 0.5, b3 / (1 + g))``; every restart starts from the
    previous optimum on a grid built for it, and a bounded Powell pass with
    tight tolerances polishes the last optimum. For nodal states the
    polynomial factor is fixed by orthogonality at every evaluation.
    """
    settings = settings or Settings.get()
    coupling = trial_coupling(potential)

    if state.dimension != potential.dimension:
        raise InvalidInputError("State and potential disagree on the dimension")

    base = ApproximantParams.initial(state.dimension, coupling, state)
    if initial is not None:
        base = base.with_free(initial.a0, initial.a2, initial.b3)

    bounds = _bounds(coupling)
    x = np.clip(_scaled(base), [b[0] for b in bounds], [b[1] for b in bounds])
    diagnostics = OptimizerDiagnostics()

    for attempt in range(settings.optimizer_restarts + 1):
        grid = trial_grid(
            _unscaled(base, x),
            panels=settings.grid_panels,
            panel_order=settings.panel_order,
        )

        with np.errstate(all="ignore"):
            result = scipy_minimize(
                _objective(base, potential, lower_states, grid),
                x,
                method="Nelder-Mead",
                bounds=bounds,
                options={
                    "xatol": settings.optimizer_xatol,
                    "fatol": settings.optimizer_fatol,
                    "maxiter": MAX_ITERATIONS,
                    "maxfev": 2 * MAX_ITERATIONS,
                    "initial_simplex": _initial_simplex(x, 0.1 / (attempt + 1), bounds),
                },
            )

        x = np.asarray(result.x, dtype=float)
        simplex = np.asarray(result.final_simplex[0])
        diagnostics = OptimizerDiagnostics(
            iterations=diagnostics.iterations + int(result.nit),
            evaluations=diagnostics.evaluations + int(result.nfev),
            restarts=attempt,
            simplex_size=float(np.max(np.abs(simplex - simplex[0]))),
            converged=bool(result.success),
        )
        logger.debug(
            "Nelder-Mead pass %s: E=%.12f x=%s (%s evaluations)",
            attempt,
            result.fun,
            x,
            result.nfev,
        )

    grid = trial_grid(
        _unscaled(base, x), panels=settings.grid_panels, panel_order=settings.panel_order
    )
    objective = _objective(base, potential, lower_states, grid)
    start = objective(x)

    with np.errstate(all="ignore"):
        polished = scipy_minimize(
            objective,
            x,
            method="Powell",
            bounds=bounds,
            options={
                "xtol": POLISH_XTOL,
                "ftol": POLISH_FTOL,
                "maxfev": 2 * MAX_ITERATIONS,
            },
        )

    diagnostics = diagnostics.model_copy(
        update={"evaluations": diagnostics.evaluations + int(polished.nfev)}
    )
    if math.isfinite(polished.fun) and polished.fun < start:
        logger.debug("Powell polish: E %.15f -> %.15f", start, polished.fun)
        x = np.asarray(polished.x, dtype=float)

    params, factor = _with_factor(_unscaled(base, x), lower_states, None)
    energy = rayleigh_quotient(params, potential, settings=settings)

    if not math.isfinite(energy):
        raise ConvergenceError(
            "The Rayleigh quotient is not finite at the best point",
            best=tuple(float(v) for v in x),
            value=energy,
        )

    if not diagnostics.converged:
        logger.warning(
            "Simplex did not meet the tolerances for state %s; keeping the best point",
            params.state,
        )

    return VariationalResult(
        params=params,
        energy=energy,
        nodes=factor.nodes if factor else (),
        diagnostics=diagnostics,
    )


def correction_profile(
    result: VariationalResult,
    potential: Potential,
    order: int = 3,
    *,
    settings: Settings | None = None,
) -> CorrectionSet:
    """Corrections about the optimal trial function taken as zero order."""
    if result.params.radial_nodes > 0:
        raise InvalidInputError(
            "Corrections are only available for nodeless states (n_r = 0)"
        )

    settings = settings or Settings.get()
    zero = zero_order(result.params)

    return run_pt(
        zero,
        perturbation_splitting(potential.value, zero),
        order,
        panels=settings.grid_panels,
        panel_order=settings.panel_order,
    )


def corrected_energies(
    result: VariationalResult,
    potential: Potential,
    order: int = 3,
    *,
    settings: Settings | None = None,
) -> VariationalResult:
    if order < 2:
        raise InvalidInputError("Corrected energies start at second order")

    corrections = correction_profile(result, potential, order, settings=settings)

    return result.model_copy(
        update={
            "e2": corrections.energies[1],
            "e3": corrections.energies[2] if order >= 3 else None,
        }
    )


def solve_variational(
    potential: Potential,
    state: EffectiveState,
    *,
    initial: ApproximantParams | None = None,
    settings: Settings | None = None,
) -> VariationalResult:
    """Minimize a state, solving the lower states of its family first."""
    settings = settings or Settings.get()
    lower: list[ApproximantParams] = []

    for k in range(state.radial_nodes):
        below = EffectiveState(
            dimension=state.dimension,
            radial_nodes=k,
            angular_momentum=state.angular_momentum,
        )
        lower.append(
            minimize(potential, below, lower_states=lower[:k], settings=settings).params
        )

    return minimize(
        potential, state, initial=initial, lower_states=lower, settings=settings
    )
