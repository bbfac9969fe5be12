import math

import numpy as np
import pytest

from anharmonic_cli.config import MeshKind
from anharmonic_cli.core import EffectiveState, PotentialSpec, StateLabel, reduce_state
from anharmonic_cli.mesh import (
    build,
    resolved_wavefunction,
    scale_scan,
    solve_state,
    state_index,
)
from anharmonic_cli.reference import TABLE_I, TABLE_II
from anharmonic_cli.utils.errors import InvalidInputError


def _state(dimension: float, n_r: int = 0, ell: int = 0) -> EffectiveState:
    return EffectiveState(dimension=dimension, radial_nodes=n_r, angular_momentum=ell)


@pytest.mark.parametrize(
    ("kind", "state", "expected"),
    [
        ("laguerre", _state(3), 3.0),
        ("laguerre", _state(3, 1, 0), 7.0),
        ("laguerre", _state(3, 0, 1), 5.0),
        ("laguerre", _state(1), 1.0),
        ("laguerre_regularized", _state(3), 3.0),
        ("hermite", _state(1, 0, 1), 3.0),
    ],
)
def test_harmonic_spectrum(
    kind: MeshKind, state: EffectiveState, expected: float
) -> None:
    spec = PotentialSpec.cubic(state.dimension, 0.0)

    energy, solution, scan = solve_state(spec, state, 30, kind)

    assert energy == pytest.approx(expected, abs=1e-8)
    assert solution.energies[state_index(kind, state)] == energy
    assert len(scan.scales) == len(scan.energies)


@pytest.mark.parametrize("kind", ["laguerre", "laguerre_regularized"])
def test_cubic_ground_state_matches_reference(kind: MeshKind) -> None:
    cell = TABLE_I[(3, 1.0)]

    energy, _, scan = solve_state(PotentialSpec.cubic(3, 1.0), _state(3), 50, kind)

    assert energy == pytest.approx(cell.e_corrected, abs=1e-8)
    assert scan.stability < 1e-6


def test_one_dimensional_states_by_parity() -> None:
    spec = PotentialSpec.cubic(1, 0.1)

    ground, _, _ = solve_state(spec, reduce_state(1, StateLabel()))
    excited, _, _ = solve_state(
        spec, reduce_state(1, StateLabel(radial_quantum_number=1))
    )

    assert ground == pytest.approx(TABLE_I[(1, 0.1)].e_corrected, abs=1e-8)
    assert excited == pytest.approx(TABLE_II[(1, 0.1)].e_corrected, abs=1e-8)


def test_mesh_wavefunction_is_normalized() -> None:
    _, solution, _ = solve_state(PotentialSpec.cubic(3, 0.0), _state(3), 30)
    basis = solution.basis

    # the Gauss weights of the mesh already carry r^(D-1)
    norm = np.sum(basis.weights * basis.scale**3 * solution.wavefunctions[:, 0] ** 2)

    assert norm == pytest.approx(1.0, rel=1e-10)


def test_regularized_mesh_refuses_even_one_dimensional_states() -> None:
    with pytest.raises(InvalidInputError):
        build("laguerre_regularized", 20, 1.0, 1)


def test_hermite_mesh_covers_one_dimension_only() -> None:
    with pytest.raises(InvalidInputError):
        build("hermite", 20, 1.0, 3)


def test_scan_needs_room_for_the_state() -> None:
    with pytest.raises(InvalidInputError):
        scale_scan(PotentialSpec.cubic(3, 1.0), _state(3, 1, 0), 6)


@pytest.mark.parametrize("kind", ["laguerre", "laguerre_regularized"])
def test_off_node_values_reproduce_the_samples(kind: MeshKind) -> None:
    _, solution, _ = solve_state(PotentialSpec.cubic(3, 1.0), _state(3), 30, kind)

    np.testing.assert_allclose(
        solution.evaluate(0, solution.r), solution.wavefunctions[:, 0], rtol=1e-10
    )


@pytest.mark.parametrize("kind", ["laguerre", "laguerre_regularized"])
def test_off_node_values_of_the_harmonic_ground_state(kind: MeshKind) -> None:
    _, solution, _ = solve_state(PotentialSpec.cubic(3, 0.0), _state(3), 40, kind)
    r = np.linspace(0.2, 3.0, 15)

    exact = math.sqrt(2 / math.gamma(1.5)) * np.exp(-(r**2) / 2)

    np.testing.assert_allclose(solution.evaluate(0, r), exact, atol=1e-5)


def test_off_node_values_need_a_half_line_mesh() -> None:
    spec = PotentialSpec.cubic(1, 0.1)
    _, solution, _ = solve_state(spec, _state(1), 30, "hermite")

    with pytest.raises(InvalidInputError):
        solution.evaluate(0, [0.5])

    with pytest.raises(InvalidInputError):
        resolved_wavefunction(solution, spec, 0)


def test_resolved_nodes_of_the_harmonic_ground_state() -> None:
    spec = PotentialSpec.cubic(3, 0.0)
    _, solution, _ = solve_state(spec, _state(3))

    resolved = resolved_wavefunction(solution, spec, 0)

    assert resolved.resolved.shape == solution.r.shape
    # the innermost nodes sit in the bulk of the state
    assert resolved.resolved[:5].all()
    np.testing.assert_array_equal(resolved.psi, solution.wavefunctions[:, 0])
