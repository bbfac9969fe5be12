import math

import pytest

from anharmonic_cli.core import PotentialSpec
from anharmonic_cli.series import semiclassical_phases
from anharmonic_cli.utils.errors import InvalidInputError, SingularityError


def test_leading_phase_closed_form() -> None:
    phases = semiclassical_phases(PotentialSpec.cubic(1, 1.0), 0, 3.0)

    # u = 3, w = 2: (2/15)(3u - 2) w^3 + 4/15
    assert phases.values == pytest.approx((116 / 15,))
    assert phases.references == (0.0,)


def test_first_phase_vanishes() -> None:
    phases = semiclassical_phases(PotentialSpec.cubic(2, 0.5), 2, 1.0)

    assert phases.values[1] == 0.0


@pytest.mark.parametrize("dimension", [1.0, 3.0])
def test_closed_forms_agree_with_quadrature(dimension: float) -> None:
    spec = PotentialSpec.cubic(dimension, 0.5)
    energies = [dimension, -0.7, 0.4]

    closed = semiclassical_phases(
        spec, 4, 4.0, energies=energies, method="closed_form"
    )
    integrated = semiclassical_phases(
        spec, 4, 4.0, energies=energies, method="quadrature"
    )

    assert closed.values == pytest.approx(integrated.values, rel=1e-8, abs=1e-12)
    assert closed.references == (0.0, 0.0, 0.0, 2.0, 2.0)


def test_singular_phases_are_refused_at_the_origin() -> None:
    with pytest.raises(SingularityError):
        semiclassical_phases(
            PotentialSpec.cubic(1, 1.0), 3, 0.0, energies=[1.0, -0.5, 0.1]
        )


@pytest.mark.parametrize(
    ("coupling", "n_max", "r"), [(0.0, 1, 1.0), (1.0, 5, 1.0), (1.0, 1, -1.0)]
)
def test_invalid_phase_requests(coupling: float, n_max: int, r: float) -> None:
    with pytest.raises(InvalidInputError):
        semiclassical_phases(PotentialSpec.cubic(1, coupling), n_max, r)


def test_closed_form_needs_the_cubic_potential() -> None:
    spec = PotentialSpec(dimension=1, coupling=1.0, coefficients=(1.0, 0.0, 1.0))

    with pytest.raises(InvalidInputError):
        semiclassical_phases(spec, 2, 1.0, method="closed_form")


@pytest.mark.parametrize("method", ["closed_form", "quadrature"])
@pytest.mark.parametrize("r", [0.4, 2.5])
def test_leading_phase_grows_with_the_local_momentum(method: str, r: float) -> None:
    spec = PotentialSpec.cubic(2, 0.7)
    h = 1e-5

    upper = semiclassical_phases(spec, 0, r + h, method=method).values[0]
    lower = semiclassical_phases(spec, 0, r - h, method=method).values[0]

    assert (upper - lower) / (2 * h) == pytest.approx(
        math.sqrt(float(spec.value(r))), rel=1e-7
    )
