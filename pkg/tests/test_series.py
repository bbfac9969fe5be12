import math
from fractions import Fraction

import pytest

from anharmonic_cli.core import PotentialSpec
from anharmonic_cli.series import (
    RationalSeries,
    c2_closed_form,
    c_recurrences,
    correction_expansions,
    gb_strong_corrections,
    gb_weak_corrections,
    rb_large_v_series,
    rb_small_v_series,
    strong_small_u_series,
)
from anharmonic_cli.series.bloch import evaluate_weak
from anharmonic_cli.series.rational import exact, taylor_shift
from anharmonic_cli.utils.errors import InvalidInputError


def test_exact_reads_decimal_literals() -> None:
    assert exact(0.1) == Fraction(1, 10)
    assert exact(3) == Fraction(3)


def test_geometric_series_division() -> None:
    series = 1 / RationalSeries.from_coefficients([1, -1], order=5)

    assert series.is_exact
    assert [series[k] for k in range(5)] == [1, 1, 1, 1, 1]


def test_square_root_of_one_plus_x() -> None:
    root = RationalSeries.from_coefficients([1, 1], order=4).sqrt()

    assert root.coefficients == (
        Fraction(1),
        Fraction(1, 2),
        Fraction(-1, 8),
        Fraction(1, 16),
    )


def test_products_keep_the_smaller_known_order() -> None:
    a = RationalSeries.from_coefficients([1, 1], order=3)
    b = RationalSeries.from_coefficients([1, 1], order=5)

    assert (a * a).coefficients == (1, 2, 1)
    assert (a + b).order == 3

    with pytest.raises(IndexError):
        (a * b)[3]


def test_differentiate_and_integrate() -> None:
    square = RationalSeries.monomial(2, 4)

    assert square.differentiate().to_lines() == ["1\t2/1"]
    assert square.differentiate().integrate().to_lines() == ["2\t1/1"]


def test_integrating_an_inverse_power_fails() -> None:
    with pytest.raises(InvalidInputError):
        RationalSeries.monomial(-1, 3).integrate()


def test_to_lines_mixes_rationals_and_floats() -> None:
    series = RationalSeries.from_coefficients([Fraction(1, 2), 0, 0.25])

    assert series.to_lines() == ["0\t1/2", "2\t0.25"]


def test_taylor_shift() -> None:
    shifted = taylor_shift([0, 0, 1], 1, 3)

    assert [shifted[k] for k in range(3)] == [1, 2, 1]


def test_c0_recurrence() -> None:
    assert c_recurrences(4).c0 == (
        Fraction(1, 2),
        Fraction(-1, 8),
        Fraction(1, 16),
        Fraction(-5, 128),
    )


def test_c2_recurrence_matches_closed_form() -> None:
    recurrences = c_recurrences(15)

    for n, value in enumerate(recurrences.c2, start=1):
        assert value == c2_closed_form(n), n


def test_c_recurrences_rejects_out_of_range_order() -> None:
    with pytest.raises(InvalidInputError):
        c_recurrences(0)


def test_weak_z2_at_origin() -> None:
    table = gb_weak_corrections(PotentialSpec.cubic(3, 1.0), [3], 2)

    assert table.taylor(2)[0] == Fraction(1)
    assert table.value(1) == 0.0


@pytest.mark.parametrize("u", [0.3, 1.0, 4.0])
def test_weak_corrections_match_closed_forms(u: float) -> None:
    spec = PotentialSpec.cubic(2, 1.0)
    energies = [2.0, -0.75]
    table = gb_weak_corrections(spec, energies, 3, about=u, order=6)

    for n in range(4):
        assert table.value(n) == pytest.approx(
            table.closed_form(n, u, energies), rel=1e-10, abs=1e-12
        ), n

    assert evaluate_weak(spec, energies, 3, u) == pytest.approx(
        table.closed_form(3, u, energies), rel=1e-10
    )


def test_closed_forms_stop_at_the_third_correction() -> None:
    cubic = gb_weak_corrections(
        PotentialSpec.cubic(1, 1.0), [1.0, -0.5, 0.2], 4, about=1.0
    )
    quartic = gb_weak_corrections(
        PotentialSpec(dimension=1, coupling=1.0, coefficients=(1.0, 0.0, 1.0)),
        [1.0],
        2,
        about=1.0,
    )

    with pytest.raises(InvalidInputError):
        cubic.closed_form(4, 1.0, [1.0, -0.5, 0.2])

    with pytest.raises(InvalidInputError):
        quartic.closed_form(2, 1.0)


def test_weak_corrections_need_enough_energies() -> None:
    with pytest.raises(InvalidInputError):
        gb_weak_corrections(PotentialSpec.cubic(1, 1.0), [1], 4)


def test_strong_corrections_low_orders() -> None:
    spec = PotentialSpec.cubic(3, 1.0)
    table = gb_strong_corrections(spec, [Fraction(3), Fraction(1), Fraction(2)], 2)

    assert table.strong[0].to_lines() == ["1\t1/1"]
    assert table.strong[1].to_lines() == ["1\t1/3"]
    assert table.strong[2][1] == Fraction(2, 3)
    assert table.strong[2][3] == Fraction(1, 5)


@pytest.mark.parametrize("dimension", [1, 3])
def test_strong_corrections_skip_even_powers_of_u(dimension: int) -> None:
    energies = [Fraction(n + 2, 3) for n in range(13)]
    table = gb_strong_corrections(PotentialSpec.cubic(dimension, 1.0), energies, 12)

    for n in range(13):
        assert table.alpha(n, 0) == energies[n] / dimension, n
        assert table.alpha(n, 1) == 0, n
        assert table.alpha(n, 3) == 0, n


def test_strong_alpha_two_sums_products_of_lower_energies() -> None:
    energies = [Fraction(3), Fraction(-1, 2), Fraction(1, 4), Fraction(2)]
    table = gb_strong_corrections(PotentialSpec.cubic(3, 1.0), energies, 3)

    # sum_k eps~_k eps~_(n-k-2) / (D^2 (D + 2))
    assert table.alpha(2, 2) == Fraction(9, 45)
    assert table.alpha(3, 2) == 2 * Fraction(3) * Fraction(-1, 2) / 45


def test_strong_corrections_resum_to_the_small_u_series() -> None:
    spec = PotentialSpec.cubic(2, 1.0)
    energies = [Fraction(1, n + 1) for n in range(9)]
    lam = Fraction(10**6)
    table = gb_strong_corrections(spec, energies, 8)

    energy = sum(e / lam**n for n, e in enumerate(energies))
    series = strong_small_u_series(spec, energy, lam, 5)

    for j in range(1, 6):
        resummed = sum(table.strong[n][j] / lam**n for n in range(9))
        assert abs(series[j] - resummed) < Fraction(1, 10**40), j


def test_strong_small_u_leading_coefficient() -> None:
    series = strong_small_u_series(PotentialSpec.cubic(2, 1.0), Fraction(3), 1, 3)

    assert series[1] == Fraction(3, 2)


def test_rb_small_v_is_linear_for_the_harmonic_oscillator() -> None:
    series = rb_small_v_series(PotentialSpec.cubic(3, 0.0), 3, 6)

    assert list(series.terms()) == [(1, Fraction(1))]


def test_rb_small_v_cubic_term() -> None:
    series = rb_small_v_series(PotentialSpec.cubic(3, 0.1), 3, 4)

    assert series[1] == 1
    assert series[2] == 0
    assert series[3] == 0
    assert series[4] == Fraction(-1, 60)


def test_rb_large_v_leading_terms() -> None:
    series = rb_large_v_series(PotentialSpec.cubic(1, 1.0))

    assert series.powers == (Fraction(3, 2), Fraction(1, 2), Fraction(-1, 2))
    assert series.coefficients == pytest.approx((1.0, 0.5, -0.125))


def test_rb_large_v_rejects_energy_dependent_terms() -> None:
    with pytest.raises(InvalidInputError):
        rb_large_v_series(PotentialSpec.cubic(1, 1.0), 4)


def test_small_v_correction_expansion() -> None:
    expansions = correction_expansions(1, Fraction(1), 0, 0, "small_v")

    assert set(expansions) == {"Y1", "Y2", "Y3"}
    assert expansions["Y1"].coefficient(4) == Fraction(-1, 4)
    assert expansions["Y1"].coefficient(1) == Fraction(1)


def test_large_v_correction_expansion() -> None:
    expansions = correction_expansions(3, Fraction(1, 2), 0, 0, "large_v")

    assert expansions["Y1"].coefficient(2) == Fraction(1, 2)
    assert expansions["Y1"].coefficient(0) == Fraction(1)
    assert expansions["Y1"].coefficient(-1) == Fraction(-1, 4)


@pytest.mark.parametrize("dimension", [1, 3])
def test_weak_corrections_match_the_large_v_expansion(dimension: int) -> None:
    spec = PotentialSpec.cubic(dimension, 1.0)
    table = gb_weak_corrections(spec, [dimension], 2)
    large = rb_large_v_series(spec)

    for u in (1e2, 1e4):
        assert table.closed_form(0, u) == pytest.approx(large.evaluate(u), rel=1e-6)
        # u Z_2 = (2 D + 1) / 4 - D / (2 sqrt(u)) + O(1 / u)
        assert u * table.closed_form(2, u) + dimension / (2 * math.sqrt(u)) == (
            pytest.approx((2 * dimension + 1) / 4, abs=1 / u)
        )
