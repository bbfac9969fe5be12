import pytest

from anharmonic_cli.approximant import ApproximantParams, zero_order
from anharmonic_cli.config import Settings
from anharmonic_cli.core import EffectiveState, PotentialSpec, StateLabel, reduce_state
from anharmonic_cli.mesh import solve_state
from anharmonic_cli.nonlinearization import perturbation_splitting, run_pt
from anharmonic_cli.reference import TABLE_I, TABLE_IV
from anharmonic_cli.utils.errors import InvalidInputError
from anharmonic_cli.variational import (
    corrected_energies,
    correction_profile,
    minimize,
    rayleigh_quotient,
    solve_variational,
)


def test_rayleigh_quotient_of_the_exact_harmonic_ground_state() -> None:
    params = ApproximantParams.initial(3, 0.0)

    assert rayleigh_quotient(params, PotentialSpec.cubic(3, 0.0)) == pytest.approx(
        3.0, rel=1e-12
    )


def test_rayleigh_quotient_is_an_upper_bound() -> None:
    params = ApproximantParams(D=1, g=1.0, a0=1.0, a2=0.5, b3=1.0)
    exact = TABLE_I[(1, 1.0)].e_corrected
    assert exact is not None

    assert rayleigh_quotient(params, PotentialSpec.cubic(1, 1.0)) > exact


def test_minimize_rejects_mismatched_dimensions() -> None:
    with pytest.raises(InvalidInputError):
        minimize(
            PotentialSpec.cubic(2, 1.0),
            EffectiveState(dimension=3, radial_nodes=0, angular_momentum=0),
        )


def test_corrected_energies_need_second_order(settings: Settings) -> None:
    result = minimize(
        PotentialSpec.cubic(1, 0.0),
        EffectiveState(dimension=1, radial_nodes=0, angular_momentum=0),
        settings=settings,
    )

    assert result.energy == pytest.approx(1.0, abs=1e-9)

    with pytest.raises(InvalidInputError):
        corrected_energies(result, PotentialSpec.cubic(1, 0.0), order=1)


@pytest.mark.slow
@pytest.mark.parametrize(("dimension", "coupling"), [(1, 0.1), (3, 1.0), (6, 10.0)])
def test_ground_state_matches_reference(
    dimension: int, coupling: float, settings: Settings
) -> None:
    potential = PotentialSpec.cubic(dimension, coupling)
    state = reduce_state(dimension, StateLabel())
    cell = TABLE_I[(dimension, coupling)]
    assert cell.minus_e2 is not None

    result = corrected_energies(
        minimize(potential, state, settings=settings), potential, settings=settings
    )

    assert result.energy == pytest.approx(cell.e_var, abs=5e-7)
    assert result.e2 == pytest.approx(-cell.minus_e2, abs=5e-8)
    assert result.corrected == pytest.approx(cell.e_corrected, abs=5e-8)
    assert result.e3 is not None
    assert abs(result.e3) <= 5e-9
    assert result.diagnostics.evaluations > 0


@pytest.mark.slow
@pytest.mark.parametrize(
    ("dimension", "coupling"), [(2, 0.1), (3, 1.0), (6, 1.0), (6, 10.0)]
)
def test_nodal_state_matches_reference(
    dimension: int, coupling: float, settings: Settings
) -> None:
    potential = PotentialSpec.cubic(dimension, coupling)
    state = EffectiveState(dimension=dimension, radial_nodes=1, angular_momentum=0)
    cell = TABLE_IV[(dimension, coupling)]

    result = solve_variational(potential, state, settings=settings)

    assert result.energy == pytest.approx(cell.e_var, abs=5e-7)
    assert result.nodes == pytest.approx((cell.node,), abs=1e-5)

    with pytest.raises(InvalidInputError):
        correction_profile(result, potential)


@pytest.mark.parametrize(("dimension", "coupling"), [(1, 1.0), (3, 10.0)])
def test_first_correction_completes_the_rayleigh_quotient(
    dimension: int, coupling: float, settings: Settings
) -> None:
    potential = PotentialSpec.cubic(dimension, coupling)
    params = ApproximantParams(D=dimension, g=coupling, a0=1.2, a2=0.6, b3=0.8)
    zero = zero_order(params)

    corrections = run_pt(
        zero,
        perturbation_splitting(potential.value, zero),
        1,
        panels=settings.grid_panels,
        panel_order=settings.panel_order,
    )

    assert corrections.partial_sums[1] == pytest.approx(
        rayleigh_quotient(params, potential, settings=settings), rel=1e-10
    )


@pytest.mark.slow
@pytest.mark.parametrize(("dimension", "coupling"), [(1, 0.1), (6, 10.0)])
def test_second_order_moves_toward_the_mesh_energy(
    dimension: int, coupling: float, settings: Settings
) -> None:
    potential = PotentialSpec.cubic(dimension, coupling)
    state = reduce_state(dimension, StateLabel())

    result = corrected_energies(
        minimize(potential, state, settings=settings), potential, settings=settings
    )
    e_mesh, _, _ = solve_state(
        potential, state, settings.mesh_size, settings.mesh_kind
    )

    assert result.e2 is not None
    assert result.e2 <= 0
    assert result.corrected is not None
    assert abs(result.corrected - e_mesh) < abs(result.energy - e_mesh)

