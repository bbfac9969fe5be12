import math

import numpy as np
import pytest
from pydantic import ValidationError

from anharmonic_cli.core import (
    Conventions,
    PotentialSpec,
    ScaledPotential,
    StateLabel,
    degeneracy,
    effective_coupling,
    evaluate_potential,
    reduce_state,
    strong_effective_coupling,
)
from anharmonic_cli.utils.errors import InvalidInputError


def test_cubic_potential_value() -> None:
    spec = PotentialSpec.cubic(3, 0.5)

    assert spec.degree == 3
    assert spec.radial_coefficients == (1.0, 0.5)
    assert evaluate_potential(spec, 2.0) == pytest.approx(4.0 + 0.5 * 8.0)
    np.testing.assert_allclose(spec.value([0.0, 1.0]), [0.0, 1.5])


def test_general_potential_uses_coupling_powers() -> None:
    spec = PotentialSpec(dimension=2, coupling=0.1, coefficients=(1.0, 0.0, 2.0))

    assert spec.degree == 4
    assert spec.coefficient(4) == 2.0
    assert spec.coefficient(5) == 0.0
    assert spec.radial_coefficients == pytest.approx((1.0, 0.0, 2.0 * 0.01))


def test_harmonic_limit_is_allowed() -> None:
    spec = PotentialSpec.cubic(1, 0.0)

    assert evaluate_potential(spec, 3.0) == pytest.approx(9.0)


def test_potential_rejects_non_positive_leading_coefficient() -> None:
    with pytest.raises(ValidationError):
        PotentialSpec(dimension=1, coupling=1.0, coefficients=(1.0, 0.0))


def test_potential_rejects_negative_coupling() -> None:
    with pytest.raises(ValidationError):
        PotentialSpec.cubic(1, -1.0)


def test_evaluate_rejects_non_finite_radius() -> None:
    with pytest.raises(InvalidInputError):
        evaluate_potential(PotentialSpec.cubic(1, 1.0), math.inf)


def test_with_coupling_keeps_coefficients() -> None:
    spec = PotentialSpec.cubic(2, 1.0).with_coupling(3.0)

    assert spec.coupling == 3.0
    assert spec.coefficients == (1.0, 1.0)


def test_scaled_potential_allows_missing_quadratic_term() -> None:
    cubic = ScaledPotential(dimension=3, coefficients=(0.0, 1.0))

    assert cubic.degree == 3
    assert float(cubic.value(2.0)) == pytest.approx(8.0)


@pytest.mark.parametrize(
    ("value", "expected"),
    [("0,0", (0, 0)), ("2,1", (2, 1)), (" 1 , 3 ", (1, 3))],
)
def test_state_label_parse(value: str, expected: tuple[int, int]) -> None:
    label = StateLabel.parse(value)

    assert (label.radial_quantum_number, label.angular_momentum) == expected
    assert str(label) == f"{expected[0]},{expected[1]}"


@pytest.mark.parametrize("value", ["0", "a,b", "1,2,3", "-1,0"])
def test_state_label_parse_rejects_invalid_values(value: str) -> None:
    with pytest.raises(InvalidInputError):
        StateLabel.parse(value)


@pytest.mark.parametrize(
    ("n", "nodes", "ell"), [(0, 0, 0), (1, 0, 1), (2, 1, 0), (3, 1, 1)]
)
def test_reduce_state_one_dimension_uses_parity(n: int, nodes: int, ell: int) -> None:
    state = reduce_state(1, StateLabel(radial_quantum_number=n))

    assert state.radial_nodes == nodes
    assert state.angular_momentum == ell
    assert state.effective_dimension == 1 + 2 * ell


def test_reduce_state_one_dimension_rejects_angular_momentum() -> None:
    with pytest.raises(InvalidInputError):
        reduce_state(1, StateLabel(radial_quantum_number=0, angular_momentum=1))


def test_reduce_state_higher_dimension() -> None:
    state = reduce_state(3, StateLabel(radial_quantum_number=1, angular_momentum=2))

    assert state.dimension == 3
    assert state.effective_dimension == 7
    assert not state.is_nodeless


def test_effective_couplings_default_units() -> None:
    spec = PotentialSpec.cubic(1, 2.0)

    assert Conventions().kinetic_factor == 1.0
    assert effective_coupling(spec) == pytest.approx(2.0)
    assert strong_effective_coupling(spec) == pytest.approx(2.0**0.8)


def test_strong_effective_coupling_rejects_zero_coupling() -> None:
    with pytest.raises(InvalidInputError):
        strong_effective_coupling(PotentialSpec.cubic(1, 0.0))


@pytest.mark.parametrize(
    ("dimension", "ell", "expected"), [(3, 0, 1), (3, 1, 3), (3, 2, 5), (2, 3, 2)]
)
def test_degeneracy(dimension: int, ell: int, expected: int) -> None:
    assert degeneracy(dimension, ell) == expected


def test_degeneracy_rejects_one_dimension() -> None:
    with pytest.raises(InvalidInputError):
        degeneracy(1, 0)
