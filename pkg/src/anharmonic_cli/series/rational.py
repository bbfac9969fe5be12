"""Truncated Laurent-Taylor series with exact or floating coefficients.

A series stores the coefficients of ``x^offset ... x^(order-1)``; everything
from ``x^order`` on is unknown. Arithmetic keeps track of how far results
are known, so truncation never silently produces wrong coefficients.
"""

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from anharmonic_cli.utils.errors import InvalidInputError

Scalar = Union[Fraction, float]
ScalarLike = Union[Fraction, float, int]


def as_scalar(value: ScalarLike) -> Scalar:
    if isinstance(value, bool):
        raise InvalidInputError("booleans are not series coefficients")

    if isinstance(value, int):
        return Fraction(value)

    return value


def exact(value: ScalarLike) -> Fraction:
    """The rational a decimal literal denotes: 0.1 -> 1/10, not 2^-55 multiples."""
    if isinstance(value, Fraction):
        return value

    if isinstance(value, int):
        return Fraction(value)

    if not math.isfinite(value):
        raise InvalidInputError(f"Cannot represent {value} exactly")

    return Fraction(repr(value))


def sqrt_scalar(value: Scalar) -> Scalar:
    if value < 0:
        raise InvalidInputError("Square root of a negative leading coefficient")

    if isinstance(value, Fraction):
        numerator = math.isqrt(value.numerator)
        denominator = math.isqrt(value.denominator)

        if numerator**2 == value.numerator and denominator**2 == value.denominator:
            return Fraction(numerator, denominator)

    return math.sqrt(value)


def _is_zero(value: Scalar) -> bool:
    return value == 0


@dataclass(frozen=True)
class RationalSeries:
    coefficients: tuple[Scalar, ...]
    offset: int
    order: int

    def __post_init__(self) -> None:
        if self.offset + len(self.coefficients) != self.order:
            raise InvalidInputError("coefficients must fill offset ... order - 1")

    @classmethod
    def from_coefficients(
        cls,
        coefficients: Iterable[ScalarLike],
        *,
        offset: int = 0,
        order: int | None = None,
    ) -> "RationalSeries":
        values = [as_scalar(c) for c in coefficients]
        top = offset + len(values) if order is None else order

        if top < offset + len(values):
            values = values[: top - offset]
        else:
            values += [Fraction(0)] * (top - offset - len(values))

        return cls(tuple(values), offset, top)._normalized()

    @classmethod
    def constant(cls, value: ScalarLike, order: int) -> "RationalSeries":
        return cls.from_coefficients([value], order=order)

    @classmethod
    def monomial(
        cls, power: int, order: int, coefficient: ScalarLike = 1
    ) -> "RationalSeries":
        return cls.from_coefficients([coefficient], offset=power, order=order)

    @classmethod
    def zero(cls, order: int) -> "RationalSeries":
        return cls((), order, order)

    def _normalized(self) -> "RationalSeries":
        start = 0
        while start < len(self.coefficients) and _is_zero(self.coefficients[start]):
            start += 1

        if start == 0:
            return self

        return RationalSeries(self.coefficients[start:], self.offset + start, self.order)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coefficients)

    @property
    def leading(self) -> Scalar:
        if self.is_zero:
            raise InvalidInputError("The zero series has no leading coefficient")

        return self.coefficients[0]

    def __getitem__(self, power: int) -> Scalar:
        if power >= self.order:
            raise IndexError(f"x^{power} is beyond the truncation order {self.order}")

        if power < self.offset:
            return Fraction(0)

        return self.coefficients[power - self.offset]

    def terms(self) -> Iterator[tuple[int, Scalar]]:
        for index, value in enumerate(self.coefficients):
            if not _is_zero(value):
                yield self.offset + index, value

    def truncate(self, order: int) -> "RationalSeries":
        if order >= self.order:
            return self

        keep = max(order - self.offset, 0)
        return RationalSeries(
            self.coefficients[:keep], min(self.offset, order), order
        )._normalized()

    def chop(self, tolerance: float) -> "RationalSeries":
        """Drop float coefficients below ``tolerance`` times the largest one."""
        if self.is_zero:
            return self

        scale = max(abs(float(c)) for c in self.coefficients)
        values = tuple(
            Fraction(0)
            if isinstance(c, float) and abs(c) <= tolerance * scale
            else c
            for c in self.coefficients
        )

        return RationalSeries(values, self.offset, self.order)._normalized()

    def __neg__(self) -> "RationalSeries":
        return RationalSeries(tuple(-c for c in self.coefficients), self.offset, self.order)

    def __add__(self, other: "RationalSeries | ScalarLike") -> "RationalSeries":
        if not isinstance(other, RationalSeries):
            other = RationalSeries.constant(other, self.order)

        order = min(self.order, other.order)
        start = min(self.offset, other.offset, order)
        values = [self[k] + other[k] for k in range(start, order)]

        return RationalSeries(tuple(values), start, order)._normalized()

    __radd__ = __add__

    def __sub__(self, other: "RationalSeries | ScalarLike") -> "RationalSeries":
        return self + (-other)

    def __rsub__(self, other: ScalarLike) -> "RationalSeries":
        return (-self) + other

    def scale(self, factor: ScalarLike) -> "RationalSeries":
        factor = as_scalar(factor)

        if _is_zero(factor):
            return RationalSeries.zero(self.order)

        return RationalSeries(
            tuple(c * factor for c in self.coefficients), self.offset, self.order
        )

    def shift(self, power: int) -> "RationalSeries":
        """Multiply by ``x^power``."""
        return RationalSeries(self.coefficients, self.offset + power, self.order + power)

    def __mul__(self, other: "RationalSeries | ScalarLike") -> "RationalSeries":
        if not isinstance(other, RationalSeries):
            return self.scale(other)

        order = min(self.order + other.offset, other.order + self.offset)
        start = self.offset + other.offset

        if self.is_zero or other.is_zero or start >= order:
            return RationalSeries.zero(order)

        values: list[Scalar] = []
        for power in range(start, order):
            total: Scalar = Fraction(0)
            for i in range(self.offset, power - other.offset + 1):
                total += self.coefficients[i - self.offset] * other[power - i]
            values.append(total)

        return RationalSeries(tuple(values), start, order)._normalized()

    __rmul__ = __mul__

    def __truediv__(self, other: "RationalSeries | ScalarLike") -> "RationalSeries":
        if not isinstance(other, RationalSeries):
            factor = as_scalar(other)
            if _is_zero(factor):
                raise ZeroDivisionError("Series division by zero")
            return self.scale(1 / factor)

        if other.is_zero:
            raise ZeroDivisionError("Series division by a zero series")

        start = self.offset - other.offset
        order = min(self.order - other.offset, other.order - 2 * other.offset + self.offset)
        length = order - start
        divisor = other.coefficients
        quotient: list[Scalar] = []

        for k in range(length):
            value = self[self.offset + k] if self.offset + k < self.order else Fraction(0)
            for j in range(1, min(k, len(divisor) - 1) + 1):
                value -= divisor[j] * quotient[k - j]
            quotient.append(value / divisor[0])

        return RationalSeries(tuple(quotient), start, order)._normalized()

    def __rtruediv__(self, other: ScalarLike) -> "RationalSeries":
        return RationalSeries.constant(other, self.order - self.offset) / self

    def __pow__(self, exponent: int) -> "RationalSeries":
        if exponent < 0:
            return 1 / (self**-exponent)

        result = RationalSeries.constant(1, self.order - self.offset)
        for _ in range(exponent):
            result = result * self

        return result

    def sqrt(self) -> "RationalSeries":
        if self.is_zero:
            raise InvalidInputError("Square root of the zero series")

        if self.offset % 2:
            raise InvalidInputError("Square root needs an even leading power")

        values = self.coefficients
        root: list[Scalar] = [sqrt_scalar(values[0])]

        for k in range(1, len(values)):
            total = values[k]
            for i in range(1, k):
                total -= root[i] * root[k - i]
            root.append(total / (2 * root[0]))

        start = self.offset // 2
        return RationalSeries(tuple(root), start, start + len(root))

    def differentiate(self) -> "RationalSeries":
        values = tuple(c * (self.offset + k) for k, c in enumerate(self.coefficients))

        return RationalSeries(values, self.offset - 1, self.order - 1)._normalized()

    def integrate(self, constant: ScalarLike = 0) -> "RationalSeries":
        if self.offset <= -1 < self.order and not _is_zero(self[-1]):
            raise InvalidInputError("Cannot integrate an x^-1 term into a series")

        values = tuple(
            Fraction(0) if _is_zero(c) else c / (self.offset + k + 1)
            for k, c in enumerate(self.coefficients)
        )
        integral = RationalSeries(values, self.offset + 1, self.order + 1)._normalized()

        if _is_zero(as_scalar(constant)):
            return integral

        return integral + constant

    def evaluate(self, x: float) -> float:
        return math.fsum(float(c) * x**power for power, c in self.terms())

    def to_float(self) -> "RationalSeries":
        return RationalSeries(
            tuple(float(c) for c in self.coefficients), self.offset, self.order
        )

    def to_lines(self) -> list[str]:
        """``power<TAB>value`` per stored term; rationals as ``num/den``."""
        lines = []

        for power, value in self.terms():
            if isinstance(value, Fraction):
                lines.append(f"{power}\t{value.numerator}/{value.denominator}")
            else:
                lines.append(f"{power}\t{value!r}")

        return lines


def polynomial(coefficients: Sequence[ScalarLike], order: int) -> RationalSeries:
    """``sum c_k x^k`` truncated at ``order``."""
    return RationalSeries.from_coefficients(coefficients, order=order)


def taylor_shift(
    coefficients: Sequence[ScalarLike], about: ScalarLike, order: int
) -> RationalSeries:
    """Coefficients of the polynomial ``sum c_k x^k`` re-expanded in ``t = x - about``."""
    about = as_scalar(about)
    shifted: list[Scalar] = [Fraction(0)] * len(coefficients)

    for k, c in enumerate(coefficients):
        c = as_scalar(c)
        binomial = 1
        for j in range(k + 1):
            # C(k, j) about^(k - j) t^j
            shifted[j] += c * binomial * about ** (k - j)
            binomial = binomial * (k - j) // (j + 1)

    return RationalSeries.from_coefficients(shifted, order=order)
