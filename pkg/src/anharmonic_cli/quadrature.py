import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import cache
from typing import Literal

import numpy as np
from numpy.polynomial import legendre
from scipy.special import gammaln, roots_genlaguerre

from anharmonic_cli.core import FloatArray
from anharmonic_cli.utils.errors import InvalidInputError, QuadratureError

logger = logging.getLogger(__name__)

MAX_ORDER = 200
ORDER_SCHEDULE = (8, 16, 32, 64, 128, MAX_ORDER)

RuleKind = Literal["gauss_laguerre", "gauss_hermite", "adaptive_panel"]


@dataclass(frozen=True)
class QuadratureRule:
    kind: RuleKind
    nodes: FloatArray
    weights: FloatArray
    alpha: float | None = None

    @property
    def order(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    order: int


def gauss_laguerre(n: int, alpha: float = 0.0) -> QuadratureRule:
    if not 1 <= n <= MAX_ORDER:
        raise InvalidInputError(f"Gauss-Laguerre order must be in [1, {MAX_ORDER}]")

    if alpha <= -1:
        raise InvalidInputError("Gauss-Laguerre needs alpha > -1")

    nodes, weights = roots_genlaguerre(n, alpha)

    # the total weight is Gamma(alpha + 1); large-n tail weights may underflow to 0
    expected = math.exp(gammaln(alpha + 1))
    if (
        not np.all(np.isfinite(nodes))
        or np.any(np.diff(nodes) <= 0)
        or np.any(weights < 0)
        or abs(weights.sum() - expected) > 1e-10 * expected
    ):
        raise QuadratureError(
            f"Gauss-Laguerre root finding failed for n={n}, alpha={alpha}",
            estimate=float(weights.sum()),
            error=abs(float(weights.sum()) - expected),
        )

    return QuadratureRule(
        kind="gauss_laguerre",
        nodes=np.asarray(nodes, dtype=float),
        weights=np.asarray(weights, dtype=float),
        alpha=alpha,
    )


def gauss_hermite(n: int) -> QuadratureRule:
    if not 1 <= n <= MAX_ORDER:
        raise InvalidInputError(f"Gauss-Hermite order must be in [1, {MAX_ORDER}]")

    nodes, weights = np.polynomial.hermite.hermgauss(n)

    return QuadratureRule(kind="gauss_hermite", nodes=nodes, weights=weights)


def gauss_legendre(a: float, b: float, n: int) -> QuadratureRule:
    knots, weights = legendre.leggauss(n)

    return QuadratureRule(
        kind="adaptive_panel",
        nodes=0.5 * (b - a) * knots + 0.5 * (b + a),
        weights=0.5 * (b - a) * weights,
    )


def _mapped_sum(
    f: Callable[[FloatArray], FloatArray],
    rule: QuadratureRule,
    scale: float,
    power: float,
) -> float:
    t = rule.nodes
    # w_i e^{t_i}; weights that underflowed carry no mass
    with np.errstate(over="ignore", invalid="ignore"):
        factors = np.where(
            rule.weights > 0,
            np.exp(np.log(np.maximum(rule.weights, 1e-300)) + t),
            0.0,
        )
    values = np.asarray(f(scale * t ** (1 / power)), dtype=float)

    return float(np.sum(factors * values))


def integrate_radial(
    f: Callable[[FloatArray], FloatArray],
    dimension: float,
    decay_scale: float = 1.0,
    rel_tol: float = 1e-11,
    *,
    power: float = 1.0,
) -> QuadratureResult:
    """Integrate ``f(r) r^(D-1)`` over ``[0, inf)``.

    Uses Gauss-Laguerre in ``t = (r / decay_scale)^power`` so that
    ``exp(-t)`` models the integrand's decay; the order is doubled until
    two successive estimates agree within ``rel_tol``.
    """
    if decay_scale <= 0 or power <= 0:
        raise InvalidInputError("decay_scale and power must be positive")

    if dimension <= 0:
        raise InvalidInputError("dimension must be positive")

    alpha = dimension / power - 1
    prefactor = decay_scale**dimension / power

    previous: float | None = None
    error = math.inf
    estimate = math.nan

    for order in ORDER_SCHEDULE:
        rule = gauss_laguerre(order, alpha)
        estimate = prefactor * _mapped_sum(f, rule, decay_scale, power)

        if previous is not None:
            error = abs(estimate - previous)

            if error <= rel_tol * abs(estimate) or error <= 1e-300:
                logger.debug("Radial quadrature converged at order %s", order)
                return QuadratureResult(value=estimate, error=error, order=order)

        previous = estimate

    raise QuadratureError(
        "Radial quadrature did not converge", estimate=estimate, error=error
    )


@cache
def _panel_matrices(order: int) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Legendre nodes, weights and the spectral integration matrix on [-1, 1].

    Row i of the matrix integrates the interpolant from -1 up to node i.
    """
    nodes, weights = legendre.leggauss(order)
    vandermonde = legendre.legvander(nodes, order - 1)
    antiderivatives = np.column_stack(
        [
            legendre.legval(nodes, legendre.legint(np.eye(order)[j], lbnd=-1))
            for j in range(order)
        ]
    )

    return nodes, weights, antiderivatives @ np.linalg.inv(vandermonde)


@dataclass(frozen=True)
class RadialGrid:
    """Composite Gauss-Legendre grid on ``[r_min, r_max]``.

    Panels grow geometrically from ``r_min`` to ``r_split`` and are uniform
    beyond. ``cumulative`` and ``tail`` give spectrally accurate running
    integrals at every node.
    """

    r: FloatArray
    weights: FloatArray
    edges: FloatArray
    panel_order: int

    @classmethod
    def build(
        cls,
        r_max: float,
        *,
        panels: int = 128,
        panel_order: int = 16,
        r_min: float = 1e-7,
        r_split: float = 0.5,
    ) -> "RadialGrid":
        r_split = min(r_split, r_max / 4)
        geometric = max(int(math.ceil(math.log2(r_split / r_min))), 1)
        uniform = max(panels - geometric, 8)

        edges = np.concatenate(
            [
                np.geomspace(r_min, r_split, geometric + 1),
                np.linspace(r_split, r_max, uniform + 1)[1:],
            ]
        )
        nodes, weights, _ = _panel_matrices(panel_order)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])

        r = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        w = (half[:, None] * weights[None, :]).ravel()

        return cls(r=r, weights=w, edges=edges, panel_order=panel_order)

    @property
    def r_min(self) -> float:
        return float(self.edges[0])

    @property
    def r_max(self) -> float:
        return float(self.edges[-1])

    def integrate(self, values: FloatArray) -> float:
        return float(np.sum(self.weights * values))

    def _panels(self, values: FloatArray) -> FloatArray:
        return values.reshape(-1, self.panel_order)

    def cumulative(self, values: FloatArray) -> FloatArray:
        """Integral from ``r_min`` to each node."""
        _, _, matrix = _panel_matrices(self.panel_order)
        half = 0.5 * np.diff(self.edges)
        panel_values = self._panels(values)

        within = half[:, None] * (panel_values @ matrix.T)
        totals = self._panels(self.weights * values).sum(axis=1)
        offsets = np.concatenate([[0.0], np.cumsum(totals)[:-1]])

        return (offsets[:, None] + within).ravel()

    def tail(self, values: FloatArray) -> FloatArray:
        """Integral from each node to ``r_max``, summed from the right."""
        _, _, matrix = _panel_matrices(self.panel_order)
        half = 0.5 * np.diff(self.edges)
        panel_values = self._panels(values)

        totals = self._panels(self.weights * values).sum(axis=1)
        within = totals[:, None] - half[:, None] * (panel_values @ matrix.T)
        offsets = np.concatenate([np.cumsum(totals[::-1])[::-1][1:], [0.0]])

        return (offsets[:, None] + within).ravel()
