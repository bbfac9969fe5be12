"""Generalized Bloch generating functions and the coefficient recurrences.

Weak coupling: in ``u = g r`` the corrections Z_n to the logarithmic
derivative satisfy

    Z_0 = sqrt(V^(u)),  Z_1 = 0,
    Z_n = (u Z'_(n-2) + (D - 1) Z_(n-2) - u sum_(i=2)^(n-2) Z_i Z_(n-i) - u eps_(n-2))
          / (2 u Z_0).

They are evaluated as truncated Taylor jets about a point, exactly when the
inputs are rational. Strong coupling corrections are finite polynomials in u.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from anharmonic_cli.core import PotentialSpec
from anharmonic_cli.series.rational import (
    RationalSeries,
    Scalar,
    ScalarLike,
    as_scalar,
    exact,
    taylor_shift,
)
from anharmonic_cli.utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

DEFAULT_GB_ORDER = 12
MAX_C_RECURRENCE = 50
MAX_STRONG_SMALL_U_ORDER = 8
FLOAT_CANCELLATION = 1e-12


@dataclass(frozen=True)
class LinearInD:
    """``const + slope * D`` with rational coefficients."""

    const: Fraction
    slope: Fraction = Fraction(0)

    def __add__(self, other: "LinearInD") -> "LinearInD":
        return LinearInD(self.const + other.const, self.slope + other.slope)

    def __sub__(self, other: "LinearInD") -> "LinearInD":
        return LinearInD(self.const - other.const, self.slope - other.slope)

    def __neg__(self) -> "LinearInD":
        return LinearInD(-self.const, -self.slope)

    def scale(self, factor: Fraction | int) -> "LinearInD":
        return LinearInD(self.const * factor, self.slope * factor)

    def __call__(self, dimension: ScalarLike) -> Scalar:
        return self.const + self.slope * as_scalar(dimension)

    def __str__(self) -> str:
        return f"({self.slope})*D + ({self.const})"


@dataclass(frozen=True)
class CRecurrences:
    c0: tuple[Fraction, ...]
    c2: tuple[LinearInD, ...]


def c_recurrences(n_max: int) -> CRecurrences:
    """c_0^(n) and c_2^(n) for n = 1 ... n_max, as exact rationals.

    ``c_0^(1) = 1/2``, ``c_0^(n) = -1/2 sum_k c_0^(k) c_0^(n-k)`` and
    ``c_2^(n) = (2n + D)/2 c_0^(n) - sum_k c_0^(k) c_2^(n-k)``.
    """
    if not 1 <= n_max <= MAX_C_RECURRENCE:
        raise InvalidInputError(f"N must be in [1, {MAX_C_RECURRENCE}]")

    c0: list[Fraction] = [Fraction(0), Fraction(1, 2)]
    c2: list[LinearInD] = [LinearInD(Fraction(0))]

    for n in range(2, n_max + 1):
        c0.append(-sum((c0[k] * c0[n - k] for k in range(1, n)), Fraction(0)) / 2)

    for n in range(1, n_max + 1):
        value = LinearInD(n * c0[n], c0[n] / 2)
        for k in range(1, n):
            value = value - c2[n - k].scale(c0[k])
        c2.append(value)

    return CRecurrences(c0=tuple(c0[1:]), c2=tuple(c2[1:]))


def c2_closed_form(n: int) -> LinearInD:
    """``(-1)^(n+1)/2 (1 + D binom(2n, n) / 4^n)``."""
    sign = Fraction((-1) ** (n + 1), 2)
    central = Fraction(math.comb(2 * n, n), 4**n)

    return LinearInD(sign, sign * central)


def cubic_z0(u: float) -> float:
    return u * math.sqrt(1 + u)


def cubic_z2(u: float, dimension: float) -> float:
    if u == 0:
        return (1 + dimension) / 4

    root = math.sqrt(1 + u)
    return (u + 2 * dimension * (1 + u - root)) / (4 * u * (1 + u))


def cubic_z3(u: float, eps1: float) -> float:
    return -eps1 / (2 * u * math.sqrt(1 + u))


@dataclass(frozen=True)
class GeneratingFunctionTable:
    """Z_0 ... Z_N as Taylor jets in ``t = u - about``.

    ``strong`` holds the strong-coupling polynomials when they were built.
    """

    dimension: Scalar
    about: Scalar
    weak: tuple[RationalSeries, ...]
    strong: tuple[RationalSeries, ...] = field(default=())
    degree: int = 3
    potential: tuple[Scalar, ...] = field(default=())

    @property
    def is_cubic(self) -> bool:
        return self.degree == 3 and tuple(float(a) for a in self.potential) == (1.0, 1.0)

    def value(self, n: int) -> float:
        """Z_n at ``u = about``."""
        jet = self.weak[n]
        return float(jet[0]) if jet.order > 0 else math.nan

    def taylor(self, n: int) -> RationalSeries:
        return self.weak[n]

    def closed_form(self, n: int, u: float, energies: Sequence[float] = ()) -> float:
        if not self.is_cubic:
            raise InvalidInputError("Closed forms exist for the cubic oscillator only")

        if n == 0:
            return cubic_z0(u)
        if n == 1:
            return 0.0
        if n == 2:
            return cubic_z2(u, float(self.dimension))
        if n == 3:
            return cubic_z3(u, float(energies[1]))

        raise InvalidInputError("Closed forms are available for n <= 3")

    def alpha(self, n: int, k: int) -> Scalar:
        """Coefficient of ``u^(k+1)`` in the strong correction n, potential term excluded."""
        value = self.strong[n][k + 1] if k + 1 < self.strong[n].order else Fraction(0)

        if n == self.degree and 2 <= k <= self.degree:
            value += self.potential[k - 2] / (self.dimension + k)

        return value


def _potential_coefficients(spec: PotentialSpec) -> tuple[Fraction, ...]:
    return tuple(exact(a) for a in spec.coefficients)


def gb_weak_corrections(
    spec: PotentialSpec,
    energies: Sequence[ScalarLike],
    n_max: int = DEFAULT_GB_ORDER,
    *,
    about: ScalarLike = 0,
    order: int | None = None,
) -> GeneratingFunctionTable:
    """Build Z_0 ... Z_N as jets about ``u = about``.

    ``energies`` are eps_0 ... eps_(N-2) of the weak-coupling expansion with
    ``eps_0 = sqrt(a_2) D``.
    """
    if n_max < 0:
        raise InvalidInputError("N must be non-negative")

    if n_max > DEFAULT_GB_ORDER:
        logger.debug("GB corrections beyond order %s requested", DEFAULT_GB_ORDER)

    if n_max >= 2 and len(energies) < n_max - 1:
        raise InvalidInputError(f"Z_{n_max} needs eps_0 ... eps_{n_max - 2}")

    dimension = exact(spec.dimension)
    potential = _potential_coefficients(spec)
    eps = [as_scalar(e) for e in energies]
    point = as_scalar(about)

    if point < 0:
        raise InvalidInputError("Expansion point must satisfy u >= 0")

    exact_at_origin = point == 0
    jet_order = order or (3 * n_max + 8 if exact_at_origin else n_max + 4)

    v_hat = taylor_shift((0, 0, *potential), point, jet_order + 2)
    u = RationalSeries.from_coefficients([point, 1], order=jet_order + 2)

    z0 = v_hat.sqrt()
    denominator = (u * z0).scale(2)
    z: list[RationalSeries] = [z0, RationalSeries.zero(z0.order)]

    for n in range(2, n_max + 1):
        previous = z[n - 2]
        numerator = u * previous.differentiate() + previous.scale(dimension - 1)

        coupled = RationalSeries.zero(numerator.order)
        for i in range(2, n - 1):
            coupled = coupled + z[i] * z[n - i]

        numerator = numerator - u * coupled - u.scale(eps[n - 2])

        if exact_at_origin:
            numerator = numerator.chop(FLOAT_CANCELLATION)

        z.append(numerator / denominator)

    return GeneratingFunctionTable(
        dimension=dimension,
        about=point,
        weak=tuple(z),
        degree=spec.degree,
        potential=potential,
    )


def evaluate_weak(
    spec: PotentialSpec, energies: Sequence[ScalarLike], n: int, u: float
) -> float:
    """Z_n(u) from a jet built at ``u``."""
    if u <= 0:
        raise InvalidInputError("Pointwise evaluation needs u > 0")

    table = gb_weak_corrections(spec, energies, n, about=float(u), order=n + 3)
    return table.value(n)


def _integral_map(series: RationalSeries, dimension: Scalar, order: int) -> RationalSeries:
    # u^(1-D) int_0^u s^j s^(D-1) ds = u^(j+1) / (j + D)
    values = [Fraction(0)] * order
    for power, value in series.terms():
        if power + 1 < order:
            values[power + 1] += value / (power + dimension)

    return RationalSeries.from_coefficients(values, order=order)


def gb_strong_corrections(
    spec: PotentialSpec,
    energies: Sequence[ScalarLike],
    n_max: int = DEFAULT_GB_ORDER,
) -> GeneratingFunctionTable:
    """Strong-coupling corrections Z~_0 ... Z~_N as exact polynomials in u.

    ``Z~_n = eps~_n u / D + u^(1-D) int_0^u sum_k Z~_k Z~_(n-k-2) s^(D-1) ds
    - delta_(n,m) sum_k a_k u^(k+1) / (D + k)``.
    """
    if len(energies) < n_max + 1:
        raise InvalidInputError(f"Z~_{n_max} needs eps~_0 ... eps~_{n_max}")

    dimension = exact(spec.dimension)
    potential = _potential_coefficients(spec)
    m = spec.degree
    eps = [as_scalar(e) for e in energies]
    # deg Z~_n <= n + 1
    order = n_max + m + 4

    z: list[RationalSeries] = []
    for n in range(n_max + 1):
        total = RationalSeries.monomial(1, order, eps[n] / dimension)

        products = RationalSeries.zero(order)
        for k in range(n - 1):
            products = products + (z[k] * z[n - 2 - k]).truncate(order)
        total = total + _integral_map(products, dimension, order)

        if n == m:
            for k, a_k in enumerate(potential, start=2):
                total = total - RationalSeries.monomial(k + 1, order, a_k / (dimension + k))

        z.append(total)

    return GeneratingFunctionTable(
        dimension=dimension,
        about=Fraction(0),
        weak=(),
        strong=tuple(z),
        degree=m,
        potential=potential,
    )


def strong_small_u_series(
    spec: PotentialSpec,
    energy: ScalarLike,
    coupling: ScalarLike,
    order: int,
) -> RationalSeries:
    """``Z~(u) = e_1 u + e_2 u^2 + ...`` known through ``u^order``.

    ``(j + D) e_(j+1) = lambda~^-2 [Z~^2]_j + delta_j0 eps~ - lambda~^-m a_j``.
    """
    if not 1 <= order <= MAX_STRONG_SMALL_U_ORDER:
        raise InvalidInputError(
            f"Strong small-u order must be in [1, {MAX_STRONG_SMALL_U_ORDER}]"
        )

    lam = as_scalar(coupling)
    if lam == 0:
        raise InvalidInputError("The strong-coupling series needs lambda~ > 0")

    dimension = exact(spec.dimension)
    potential = _potential_coefficients(spec)
    m = spec.degree
    eps = as_scalar(energy)
    e: list[Scalar] = [Fraction(0)] * (order + 1)

    for j in range(order):
        square: Scalar = sum((e[i] * e[j - i] for i in range(1, j)), Fraction(0))
        source: Scalar = square / lam**2

        if j == 0:
            source += eps

        if 2 <= j <= m:
            source -= potential[j - 2] / lam**m

        e[j + 1] = source / (j + dimension)

    return RationalSeries.from_coefficients(e[1:], offset=1, order=order + 1)
