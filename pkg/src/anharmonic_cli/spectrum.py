"""One record per (D, g, state): variational energy, corrections and the mesh check."""

import logging
import math
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from pydantic import BaseModel, Field

from anharmonic_cli.approximant import ApproximantParams, zero_order
from anharmonic_cli.config import Settings
from anharmonic_cli.core import EffectiveState, PotentialSpec, StateLabel, reduce_state
from anharmonic_cli.mesh import (
    MeshSolution,
    resolved_wavefunction,
    solve_state as mesh_solve,
    state_index,
)
from anharmonic_cli.nonlinearization import CorrectionSet, deviation_metrics
from anharmonic_cli.utils.errors import AnharmonicError
from anharmonic_cli.variational import (
    VariationalResult,
    correction_profile,
    solve_variational,
)

logger = logging.getLogger(__name__)


class OptimalParams(BaseModel):
    a0: float
    a2: float
    b3: float
    a1: float
    a3: float

    @classmethod
    def from_params(cls, params: ApproximantParams) -> "OptimalParams":
        return cls(a0=params.a0, a2=params.a2, b3=params.b3, a1=params.a1, a3=params.a3)


class SpectralResult(BaseModel):
    dimension: float
    coupling: float
    state: str
    e_var: float | None = None
    e2: float | None = None
    e3: float | None = None
    e_corrected: float | None = None
    e_corrected3: float | None = None
    e_mesh: float | None = None
    nodes: tuple[float, ...] = ()
    max_relative_deviation: float | None = None
    params: OptimalParams | None = None
    error: str | None = None
    timings: dict[str, float] = Field(default_factory=dict, exclude=True)

    @property
    def failed(self) -> bool:
        return self.error is not None


RESULT_COLUMNS = (
    "dimension",
    "coupling",
    "state",
    "e_var",
    "e2",
    "e3",
    "e_corrected",
    "e_corrected3",
    "e_mesh",
    "nodes",
    "max_relative_deviation",
    "params.a0",
    "params.a2",
    "params.b3",
    "params.a1",
    "params.a3",
    "error",
)


@dataclass(frozen=True)
class StateRun:
    """A record together with the arrays behind it, for the profile exports."""

    result: SpectralResult
    effective: EffectiveState | None = None
    variational: VariationalResult | None = None
    corrections: CorrectionSet | None = None
    mesh: MeshSolution | None = None


def run_state(
    dimension: float,
    coupling: float,
    state: StateLabel,
    *,
    orders: int | None = None,
    verify: bool = False,
    initial: ApproximantParams | None = None,
    settings: Settings | None = None,
) -> StateRun:
    settings = settings or Settings.get()
    orders = settings.pt_order if orders is None else orders
    record = SpectralResult(dimension=dimension, coupling=coupling, state=str(state))
    timings: dict[str, float] = {}

    variational: VariationalResult | None = None
    corrections: CorrectionSet | None = None
    solution: MeshSolution | None = None
    effective: EffectiveState | None = None

    try:
        effective = reduce_state(dimension, state)
        potential = PotentialSpec.cubic(dimension, coupling)

        start = time.monotonic()
        variational = solve_variational(
            potential, effective, initial=initial, settings=settings
        )
        timings["variational"] = time.monotonic() - start

        record = record.model_copy(
            update={
                "e_var": variational.energy,
                "nodes": variational.nodes,
                "params": OptimalParams.from_params(variational.params),
            }
        )

        if effective.is_nodeless and orders >= 2:
            start = time.monotonic()
            corrections = correction_profile(
                variational, potential, orders, settings=settings
            )
            timings["corrections"] = time.monotonic() - start

            e2 = corrections.energies[1]
            e3 = corrections.energies[2] if orders >= 3 else None
            record = record.model_copy(
                update={
                    "e2": e2,
                    "e3": e3,
                    "e_corrected": variational.energy + e2,
                    "e_corrected3": None if e3 is None else variational.energy + e2 + e3,
                }
            )

        if verify:
            start = time.monotonic()
            e_mesh, solution, _ = mesh_solve(
                potential, effective, settings.mesh_size, settings.mesh_kind
            )
            timings["mesh"] = time.monotonic() - start
            record = record.model_copy(update={"e_mesh": e_mesh})

            if effective.is_nodeless:
                index = state_index(settings.mesh_kind, effective)
                resolved = (
                    None
                    if settings.mesh_kind == "hermite"
                    else resolved_wavefunction(solution, potential, index).resolved
                )
                metrics = deviation_metrics(
                    zero_order(variational.params),
                    solution.r,
                    solution.wavefunctions[:, index],
                    resolved=resolved,
                )
                deviation = metrics.max_relative_deviation
                record = record.model_copy(
                    update={
                        "max_relative_deviation": deviation
                        if math.isfinite(deviation)
                        else None
                    }
                )
    except AnharmonicError as e:
        logger.debug("Record D=%s g=%s state=%s failed: %s", dimension, coupling, state, e)
        record = record.model_copy(update={"error": f"{e.code}: {e.message}"})

    record = record.model_copy(update={"timings": timings})

    return StateRun(
        result=record,
        effective=effective,
        variational=variational,
        corrections=corrections,
        mesh=solution,
    )


def _chain(
    dimension: float,
    couplings: Sequence[float],
    state: StateLabel,
    *,
    orders: int | None,
    verify: bool,
    settings: Settings,
) -> list[StateRun]:
    # each optimization starts from the optimum at the previous g
    runs: list[StateRun] = []
    initial: ApproximantParams | None = None

    for coupling in couplings:
        run = run_state(
            dimension,
            coupling,
            state,
            orders=orders,
            verify=verify,
            initial=initial,
            settings=settings,
        )
        runs.append(run)

        if run.variational is not None:
            initial = run.variational.params

    return runs


def sweep(
    dimensions: Sequence[float],
    couplings: Sequence[float],
    states: Sequence[StateLabel],
    *,
    orders: int | None = None,
    verify: bool = False,
    settings: Settings | None = None,
    jobs: int | None = None,
) -> list[StateRun]:
    """Every (D, state, g) combination, ordered by D, then state, then g."""
    settings = settings or Settings.get()
    jobs = jobs or settings.jobs
    chains = [(d, s) for d in dimensions for s in states]

    def work(chain: tuple[float, StateLabel]) -> list[StateRun]:
        d, s = chain
        return _chain(d, couplings, s, orders=orders, verify=verify, settings=settings)

    if jobs == 1 or len(chains) == 1:
        results = [work(chain) for chain in chains]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(work, chains))

    return [run for chain in results for run in chain]
