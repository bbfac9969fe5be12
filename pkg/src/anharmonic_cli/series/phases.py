"""Semiclassical phases G_n(r) = (2M)^(1/2) g^-2 int Z_n(u) du, u = g r."""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

from scipy.integrate import quad

from anharmonic_cli.core import Conventions, PotentialSpec
from anharmonic_cli.nonlinearization import weak_coupling_energies
from anharmonic_cli.series.bloch import evaluate_weak
from anharmonic_cli.utils.errors import InvalidInputError, SingularityError

MAX_PHASE_ORDER = 4
# G_3 and G_4 diverge logarithmically at r = 0 and are measured from g r = 1
SINGULAR_REFERENCE = 1.0

PhaseMethod = Literal["auto", "closed_form", "quadrature"]


@dataclass(frozen=True)
class PhaseValues:
    r: float
    values: tuple[float, ...]
    references: tuple[float, ...]


def _is_cubic(spec: PotentialSpec) -> bool:
    return spec.coefficients == (1.0, 1.0)


def cubic_phase(n: int, w: float, dimension: float, energies: Sequence[float]) -> float:
    """Closed-form G_n without the ``(2M)^(1/2) g^-2`` factor, in ``w = sqrt(1 + g r)``."""
    u = w * w - 1

    if n == 0:
        return 2 * (3 * u - 2) * w**3 / 15

    if n == 1:
        return 0.0

    if n == 2:
        return 0.25 * math.log(1 + u) + dimension * math.log(1 + w)

    if w <= 1:
        raise SingularityError(f"G_{n} is logarithmically singular at r = 0")

    log_ratio = math.log((w - 1) / (w + 1))

    if n == 3:
        return -energies[1] / 2 * log_ratio

    if n == 4:
        k = 1 - 6 * dimension * (dimension + 1)
        rational = (5 + (5 + 12 * dimension) * w + k * (w + 1) * w**2 * (3 * w**2 - 2)) / (
            48 * (w - 1) * (w + 1) ** 2 * w**3
        )
        return rational + (k - 16 * energies[2]) / 32 * log_ratio

    raise InvalidInputError(f"No closed form for G_{n}")


def _required_energies(spec: PotentialSpec, n_max: int) -> list[float]:
    if not _is_cubic(spec):
        raise InvalidInputError(
            "Weak-coupling energies are computed for the cubic oscillator only; "
            "pass them explicitly"
        )

    return [spec.dimension, *weak_coupling_energies(spec.dimension, max(n_max - 2, 1))]


def semiclassical_phases(
    spec: PotentialSpec,
    n_max: int,
    r: float,
    *,
    energies: Sequence[float] | None = None,
    conventions: Conventions | None = None,
    method: PhaseMethod = "auto",
) -> PhaseValues:
    """G_0(r) ... G_N(r), each minus its value at the reference radius.

    G_0 and G_2 are measured from r = 0, G_3 and G_4 from g r = 1.
    """
    conventions = conventions or Conventions()

    if not 0 <= n_max <= MAX_PHASE_ORDER:
        raise InvalidInputError(f"Phase order must be in [0, {MAX_PHASE_ORDER}]")

    if r < 0 or not math.isfinite(r):
        raise InvalidInputError("r must be finite and non-negative")

    g = spec.coupling
    if g <= 0:
        raise InvalidInputError("Semiclassical phases need g > 0")

    if n_max >= 3 and energies is None:
        energies = _required_energies(spec, n_max)

    eps = [float(e) for e in energies or [spec.dimension]]
    use_closed_form = method == "closed_form" or (method == "auto" and _is_cubic(spec))

    if use_closed_form and not _is_cubic(spec):
        raise InvalidInputError("Closed forms exist for the cubic oscillator only")

    prefactor = math.sqrt(2 * conventions.mass) / g**2
    values: list[float] = []
    references: list[float] = []

    for n in range(n_max + 1):
        reference = 0.0 if n in (0, 1, 2) else SINGULAR_REFERENCE / g
        u, u_ref = g * r, g * reference

        if n >= 3 and r == 0:
            raise SingularityError(f"G_{n} is logarithmically singular at r = 0")

        if n == 1:
            value = 0.0
        elif use_closed_form:
            w, w_ref = math.sqrt(1 + u), math.sqrt(1 + u_ref)
            value = prefactor * (
                cubic_phase(n, w, spec.dimension, eps)
                - cubic_phase(n, w_ref, spec.dimension, eps)
            )
        elif n == 0:
            value, _ = quad(
                lambda x: math.sqrt(max(2 * conventions.mass * float(spec.value(x)), 0.0)),
                0.0,
                r,
                epsabs=0,
                epsrel=1e-13,
                limit=200,
            )
        else:
            integral, _ = quad(
                lambda s: evaluate_weak(spec, eps, n, s),
                u_ref,
                u,
                epsabs=0,
                epsrel=1e-12,
                limit=200,
            )
            value = prefactor * integral

        values.append(value)
        references.append(reference)

    return PhaseValues(r=r, values=tuple(values), references=tuple(references))
