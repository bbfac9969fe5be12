import numpy as np
import pytest
from pydantic import ValidationError

from anharmonic_cli.approximant import (
    ApproximantParams,
    excited_factor_solve,
    phase_derivatives,
    wavefunction,
    zero_order,
)
from anharmonic_cli.core import EffectiveState
from anharmonic_cli.utils.errors import InvalidInputError


def test_initial_parameters_remove_the_linear_term() -> None:
    params = ApproximantParams.initial(3, 0.1)

    assert params.a0 == 2.0
    assert params.a1 == 0.0
    assert params.a3 == pytest.approx(0.4)
    assert params.state == (0, 0)


def test_parameters_accept_short_aliases() -> None:
    params = ApproximantParams(D=2, g=1.0, a0=1.0, a2=0.6, b3=4.0)

    assert params.dimension == 2
    assert params.a1 == pytest.approx(4.0 * (2 - 3) / 4)
    assert params.a3 == pytest.approx(0.8)


def test_parameters_reject_non_positive_a2() -> None:
    with pytest.raises(ValidationError):
        ApproximantParams(D=1, g=1.0, a0=1.0, a2=0.0, b3=1.0)


def test_effective_dimension_includes_angular_momentum() -> None:
    state = EffectiveState(dimension=3, radial_nodes=0, angular_momentum=2)
    params = ApproximantParams.initial(3, 1.0, state)

    assert params.effective_dimension == 7


@pytest.mark.parametrize("coupling", [0.1, 1.0, 10.0])
def test_phase_derivatives_match_finite_differences(coupling: float) -> None:
    params = ApproximantParams(D=2, g=coupling, a0=1.3, a2=0.7, b3=1.9)
    r = np.array([0.05, 0.4, 1.0, 2.5])
    h = 1e-5

    value, first, second = phase_derivatives(params, r)
    plus = phase_derivatives(params, r + h)
    minus = phase_derivatives(params, r - h)

    np.testing.assert_allclose(
        first, (plus[0] - minus[0]) / (2 * h), rtol=1e-7, atol=1e-9
    )
    np.testing.assert_allclose(
        second, (plus[1] - minus[1]) / (2 * h), rtol=1e-6, atol=1e-8
    )
    assert np.all(np.isfinite(value))


def test_harmonic_limit_is_exact() -> None:
    zero = zero_order(ApproximantParams.initial(3, 0.0))
    r = np.array([0.0, 0.3, 1.7])

    assert zero.energy == pytest.approx(3.0)
    np.testing.assert_allclose(zero.potential(r), r**2, atol=1e-12)


def test_induced_potential_vanishes_at_the_origin() -> None:
    zero = zero_order(ApproximantParams(D=1, g=1.0, a0=1.1, a2=0.55, b3=2.0))

    assert zero.potential(np.array([0.0]))[0] == pytest.approx(0.0, abs=1e-12)


def test_zero_order_refuses_nodal_trials() -> None:
    params = ApproximantParams.initial(2, 1.0).model_copy(update={"poly": (-1.0, 1.0)})

    with pytest.raises(InvalidInputError):
        zero_order(params)


def test_excited_factor_is_orthogonal_to_the_ground_state() -> None:
    ground = ApproximantParams.initial(3, 0.1)
    excited = ApproximantParams.initial(
        3, 0.1, EffectiveState(dimension=3, radial_nodes=1, angular_momentum=0)
    )

    factor = excited_factor_solve(excited, [ground])

    assert factor.coefficients[-1] == 1.0
    assert len(factor.nodes) == 1
    assert factor.nodes[0] > 0
    assert max(factor.residuals) < 1e-10

    with_factor = excited.with_factor(factor)
    node = np.array([factor.nodes[0]])
    assert wavefunction(with_factor, node)[0] == pytest.approx(0.0, abs=1e-10)


def test_excited_factor_needs_every_lower_state() -> None:
    excited = ApproximantParams.initial(
        3, 0.1, EffectiveState(dimension=3, radial_nodes=2, angular_momentum=0)
    )

    with pytest.raises(InvalidInputError):
        excited_factor_solve(excited, [ApproximantParams.initial(3, 0.1)])
