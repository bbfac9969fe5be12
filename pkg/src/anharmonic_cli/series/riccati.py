"""Small- and large-v expansions of the Riccati-Bloch logarithmic derivative.

In the scaled variable v the logarithmic derivative y of the wavefunction obeys
``y' + (D - 1) y / v - y^2 = eps - sum_k a_k lambda^(k-2) v^k``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from anharmonic_cli.core import Conventions, PotentialSpec, effective_coupling
from anharmonic_cli.series.rational import RationalSeries, Scalar, ScalarLike, as_scalar, exact
from anharmonic_cli.utils.errors import InvalidInputError

MAX_SMALL_V_ORDER = 30
MAX_LARGE_V_TERMS = 3

Regime = Literal["small_v", "large_v"]


@dataclass(frozen=True)
class DescendingSeries:
    """Finite list of terms ``c v^p`` with rational, possibly half-integer, powers."""

    powers: tuple[Fraction, ...]
    coefficients: tuple[Scalar, ...]

    def evaluate(self, v: float) -> float:
        return math.fsum(
            float(c) * v ** float(p) for p, c in zip(self.powers, self.coefficients)
        )

    def coefficient(self, power: Fraction | int) -> Scalar:
        for p, c in zip(self.powers, self.coefficients):
            if p == power:
                return c

        return Fraction(0)

    def to_lines(self) -> list[str]:
        lines = []

        for power, value in zip(self.powers, self.coefficients):
            if isinstance(value, Fraction):
                lines.append(f"{power}\t{value.numerator}/{value.denominator}")
            else:
                lines.append(f"{power}\t{value!r}")

        return lines


def rb_small_v_series(
    spec: PotentialSpec,
    energy: ScalarLike,
    order: int,
    *,
    coupling: ScalarLike | None = None,
    conventions: Conventions | None = None,
) -> RationalSeries:
    """Taylor series ``y(v) = d_1 v + d_2 v^2 + ...`` known up to ``v^order``.

    Coefficients follow ``(j + D) d_(j+1) = [y^2]_j + delta_j0 eps - a_j lambda^(j-2)``.
    Float inputs are read as the decimals they print as, so the result is exact.
    """
    if not 1 <= order <= MAX_SMALL_V_ORDER:
        raise InvalidInputError(f"Small-v order must be in [1, {MAX_SMALL_V_ORDER}]")

    dimension = exact(spec.dimension)
    eps = exact(energy)
    lam = exact(coupling if coupling is not None else effective_coupling(spec, conventions))

    d: list[Fraction] = [Fraction(0)] * (order + 1)

    for j in range(order):
        square = sum((d[i] * d[j - i] for i in range(1, j)), Fraction(0))
        source = square - exact(spec.coefficient(j)) * lam ** (j - 2) if j >= 2 else square

        if j == 0:
            source += eps

        d[j + 1] = source / (j + dimension)

    return RationalSeries.from_coefficients(d[1:], offset=1, order=order + 1)


def rb_large_v_series(
    spec: PotentialSpec,
    order: int = MAX_LARGE_V_TERMS,
    *,
    conventions: Conventions | None = None,
) -> DescendingSeries:
    """The energy-independent leading terms of y at large v."""
    if not 1 <= order <= MAX_LARGE_V_TERMS:
        raise InvalidInputError(
            f"Only the first {MAX_LARGE_V_TERMS} large-v terms are energy independent"
        )

    m = spec.degree
    lam = effective_coupling(spec, conventions)
    a_m = spec.coefficient(m)
    a_m1 = spec.coefficient(m - 1)
    a_m2 = spec.coefficient(m - 2)
    root = math.sqrt(a_m)

    def lam_power(exponent: float) -> float:
        if lam == 0 and exponent < 0:
            raise InvalidInputError("The large-v expansion needs a non-zero coupling")
        return float(lam**exponent)

    coefficients = (
        root * lam_power((m - 2) / 2),
        a_m1 * lam_power((m - 4) / 2) / (2 * root),
        (4 * a_m * a_m2 - a_m1**2) * lam_power((m - 6) / 2) / (8 * root**3),
    )
    powers = (Fraction(m, 2), Fraction(m - 2, 2), Fraction(m - 4, 2))

    return DescendingSeries(powers=powers[:order], coefficients=coefficients[:order])


def correction_expansions(
    dimension: ScalarLike,
    eps1: ScalarLike,
    eps2: ScalarLike,
    eps3: ScalarLike,
    regime: Regime,
) -> dict[str, DescendingSeries]:
    """First three cubic-oscillator corrections Y_1, Y_2, Y_3 at small or large v.

    Small-v tables use the reduced energies ``eps_n / D``; large-v tables use
    the energies themselves.
    """
    d = as_scalar(dimension)
    e1, e2, e3 = as_scalar(eps1), as_scalar(eps2), as_scalar(eps3)

    if regime == "small_v":
        r1, r2, r3 = e1 / d, e2 / d, e3 / d

        def p(*values: int) -> tuple[Fraction, ...]:
            return tuple(Fraction(v) for v in values)

        return {
            "Y1": DescendingSeries(
                p(1, 3, 4, 5),
                (r1, 2 * r1 / (d + 2), -1 / (d + 3), r1 / ((d + 2) * (d + 4))),
            ),
            "Y2": DescendingSeries(
                p(1, 3, 5, 6),
                (
                    r2,
                    (r1**2 + 2 * r2) / (d + 2),
                    (6 * r1**2 + 4 * r2) / ((d + 2) * (d + 4)),
                    -2 * r1 / ((d + 3) * (d + 5)),
                ),
            ),
            "Y3": DescendingSeries(
                p(1, 3, 5, 6),
                (
                    r3,
                    2 * (r1 * r2 + r3) / (d + 2),
                    2 * (r1**3 + 6 * r1 * r2 + 2 * r3) / ((d + 2) * (d + 4)),
                    -2 * r2 / ((d + 3) * (d + 5)),
                ),
            ),
        }

    if regime == "large_v":
        return {
            "Y1": DescendingSeries(
                (Fraction(2), Fraction(0), Fraction(-1), Fraction(-2)),
                (Fraction(1, 2), (d + 1) / 4, -e1 / 2, (d**2 - 1) / 8),
            ),
            "Y2": DescendingSeries(
                (Fraction(3), Fraction(1), Fraction(0), Fraction(-1), Fraction(-2)),
                (
                    Fraction(-1, 8),
                    -(3 * d + 4) / 16,
                    e1 / 4,
                    -(6 * d**2 + 6 * d + 16 * e2 - 1) / 32,
                    (3 * d - 2) * e1 / 8,
                ),
            ),
            "Y3": DescendingSeries(
                (Fraction(4), Fraction(2), Fraction(1), Fraction(0), Fraction(-1)),
                (
                    Fraction(1, 16),
                    (5 * d + 8) / 32,
                    -3 * e1 / 16,
                    (15 * d**2 + 26 * d + 16 * e2 + 10) / 64,
                    -(15 * d * e1 + 16 * e3) / 32,
                ),
            ),
        }

    raise InvalidInputError(f"Unknown regime {regime!r}")
