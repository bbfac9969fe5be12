"""Lagrange-mesh eigensolver used as the reference for every other method.

Three meshes share one interface:

* ``laguerre``: Lagrange functions ``P_i(x) exp(-x/2)`` on the roots of
  ``L_N^alpha`` with ``alpha = D_eff - 1``, so the radial weight is built in
  and the kinetic matrix is exact. Serves every D (for D = 1 by parity).
* ``laguerre_regularized``: the reduced function ``u = r^((D_eff-1)/2) Psi``
  on a regularized Laguerre mesh with the centrifugal term
  ``(D_eff - 1)(D_eff - 3) / (4 r^2)``.
* ``hermite``: the full line for D = 1 with ``V(|x|)``.

The potential is diagonal at the nodes (Gauss approximation); ``r = h x``.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel
from scipy.optimize import brentq
from scipy.special import eval_genlaguerre

from anharmonic_cli.config import MeshKind
from anharmonic_cli.core import EffectiveState, FloatArray, Potential
from anharmonic_cli.quadrature import gauss_hermite, gauss_laguerre
from anharmonic_cli.utils.errors import ConvergenceError, InvalidInputError

logger = logging.getLogger(__name__)

MAX_MESH_SIZE = 50
SCAN_POINTS = 25
SCAN_SPREAD = 8.0
PLATEAU_TOLERANCE = 1e-11
SIZE_STEP = 5
TURNING_NODE_FRACTION = 0.7
MESH_RESOLUTION = 5e-5
NODE_MATCH = 1e-12


@dataclass(frozen=True)
class MeshBasis:
    kind: MeshKind
    size: int
    scale: float
    dimension: float
    nodes: FloatArray
    weights: FloatArray
    kinetic: FloatArray
    centrifugal: float = 0.0

    @property
    def r(self) -> FloatArray:
        return self.scale * self.nodes


def _laguerre_kinetic(size: int, alpha: float) -> tuple[FloatArray, FloatArray, FloatArray]:
    rule = gauss_laguerre(size, alpha)
    x, lam = rule.nodes, rule.weights

    # dL_N^alpha/dx = -L_(N-1)^(alpha+1)
    slope = -eval_genlaguerre(size - 1, alpha + 1, x)

    difference = x[:, None] - x[None, :]
    np.fill_diagonal(difference, 1.0)
    derivative = slope[:, None] / (slope[None, :] * difference)
    np.fill_diagonal(derivative, (x - alpha - 1) / (2 * x))

    root = np.sqrt(lam)
    a = root[:, None] * (derivative - 0.5 * np.eye(size)) / root[None, :]

    return x, lam * np.exp(x), a.T @ a


def _regularized_kinetic(size: int) -> tuple[FloatArray, FloatArray, FloatArray]:
    rule = gauss_laguerre(size, 0.0)
    x = rule.nodes

    sign = (-1.0) ** np.add.outer(np.arange(size), np.arange(size))
    difference = x[:, None] - x[None, :]
    np.fill_diagonal(difference, 1.0)

    kinetic = sign * (x[:, None] + x[None, :]) / (np.sqrt(np.outer(x, x)) * difference**2)
    np.fill_diagonal(kinetic, (4 + (4 * size + 2) * x - x**2) / (12 * x**2))

    return x, rule.weights * np.exp(x), kinetic


def _hermite_kinetic(size: int) -> tuple[FloatArray, FloatArray, FloatArray]:
    rule = gauss_hermite(size)
    x = rule.nodes

    sign = (-1.0) ** np.add.outer(np.arange(size), np.arange(size))
    difference = x[:, None] - x[None, :]
    np.fill_diagonal(difference, 1.0)

    kinetic = 2 * sign / difference**2
    np.fill_diagonal(kinetic, (2 * size + 1 - x**2) / 3)

    return x, rule.weights * np.exp(x**2), kinetic


def _lagrange_values(nodes: FloatArray, alpha: float, x: FloatArray) -> FloatArray:
    """``l_i(x) = L_N^alpha(x) / ((x - x_i) L_N^alpha'(x_i))`` as a ``(len(x), N)`` matrix."""
    size = nodes.size
    slope = -eval_genlaguerre(size - 1, alpha + 1, nodes)
    difference = x[:, None] - nodes[None, :]
    hit = np.abs(difference) <= NODE_MATCH * np.maximum(1.0, nodes[None, :])

    with np.errstate(divide="ignore", invalid="ignore"):
        values = eval_genlaguerre(size, alpha, x)[:, None] / (difference * slope[None, :])

    rows, columns = np.nonzero(hit)
    values[rows] = 0.0
    values[rows, columns] = 1.0

    return values


def build(
    kind: MeshKind,
    size: int,
    scale: float,
    dimension: float,
    angular_momentum: int = 0,
) -> MeshBasis:
    if not 1 <= size <= MAX_MESH_SIZE:
        raise InvalidInputError(f"Mesh size must be in [1, {MAX_MESH_SIZE}]")

    if scale <= 0:
        raise InvalidInputError("Mesh scale must be positive")

    if dimension <= 0:
        raise InvalidInputError("The radial reduction needs D > 0")

    d_eff = dimension + 2 * angular_momentum
    centrifugal = 0.0

    if kind == "hermite":
        if dimension != 1 or angular_momentum != 0:
            raise InvalidInputError("The Hermite mesh covers the full line, D = 1 only")
        x, weights, kinetic = _hermite_kinetic(size)
    elif kind == "laguerre":
        x, weights, kinetic = _laguerre_kinetic(size, d_eff - 1)
    elif kind == "laguerre_regularized":
        if d_eff == 1:
            raise InvalidInputError(
                "The regularized mesh forces u(0) = 0 and misses even D = 1 states"
            )
        x, weights, kinetic = _regularized_kinetic(size)
        centrifugal = (d_eff - 1) * (d_eff - 3) / 4
    else:
        raise InvalidInputError(f"Unknown mesh kind {kind!r}")

    return MeshBasis(
        kind=kind,
        size=size,
        scale=scale,
        dimension=d_eff,
        nodes=x,
        weights=weights,
        kinetic=kinetic / scale**2,
        centrifugal=centrifugal,
    )


@dataclass(frozen=True)
class MeshSolution:
    """Eigenvalues and wavefunctions of one mesh.

    ``wavefunctions[:, k]`` samples state k at ``r`` as the reduced function of
    the D_eff problem, normalized under ``r^(D_eff - 1) dr`` on the half-line.
    Hermite states are mapped onto the half-line by parity.
    """

    energies: FloatArray
    r: FloatArray
    wavefunctions: FloatArray
    basis: MeshBasis

    def reduced(self, index: int) -> FloatArray:
        """``u = r^((D_eff - 1)/2) Psi``."""
        power = self.basis.dimension - 1
        if self.basis.kind == "hermite":
            power += 2 * (index % 2)

        return self.r ** (power / 2) * self.wavefunctions[:, index]

    def evaluate(self, index: int, r: npt.ArrayLike) -> FloatArray:
        """State ``index`` anywhere on the half-line from its Lagrange expansion."""
        basis = self.basis
        if basis.kind == "hermite":
            raise InvalidInputError("Off-node values need a half-line mesh")

        x = np.atleast_1d(np.asarray(r, dtype=float)) / basis.scale
        nodes = basis.nodes
        damping = np.exp(-(x[:, None] - nodes[None, :]) / 2)

        if basis.kind == "laguerre":
            values = _lagrange_values(nodes, basis.dimension - 1, x) * damping
            return values @ self.wavefunctions[:, index]

        # u_i (x / x_i) l_i(x) exp(-(x - x_i)/2) on the alpha = 0 roots
        values = _lagrange_values(nodes, 0.0, x) * damping * x[:, None] / nodes[None, :]
        return (values @ self.reduced(index)) / (basis.scale * x) ** (
            (basis.dimension - 1) / 2
        )


def eigenvalues(basis: MeshBasis, potential: Potential, count: int | None = None) -> MeshSolution:
    r = basis.r
    diagonal = np.asarray(potential.value(np.abs(r)), dtype=float)

    if basis.centrifugal:
        diagonal = diagonal + basis.centrifugal / r**2

    hamiltonian = basis.kinetic + np.diag(diagonal)

    try:
        energies, vectors = np.linalg.eigh(hamiltonian)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(
            f"Eigensolver failed on the {basis.kind} mesh", best=(), value=math.nan
        ) from e

    count = count or basis.size
    energies, vectors = energies[:count], vectors[:, :count]

    # one-signed ground state: largest component positive
    signs = np.sign(vectors[np.argmax(np.abs(vectors), axis=0), np.arange(count)])
    vectors = vectors * signs

    samples = vectors / np.sqrt(basis.weights * basis.scale)[:, None]

    if basis.kind == "hermite":
        positive = r > 0
        parity = np.arange(count) % 2
        half = r[positive]
        samples = math.sqrt(2) * samples[positive] / half[:, None] ** parity[None, :]
        r = half
    elif basis.kind == "laguerre":
        samples = samples * basis.scale ** (-(basis.dimension - 1) / 2)
    else:
        samples = samples / r[:, None] ** ((basis.dimension - 1) / 2)

    return MeshSolution(energies=energies, r=r, wavefunctions=samples, basis=basis)


@dataclass(frozen=True)
class ResolvedWavefunction:
    """Mesh samples of one state and the nodes where they are converged."""

    r: FloatArray
    psi: FloatArray
    resolved: npt.NDArray[np.bool_]


def resolved_wavefunction(
    solution: MeshSolution,
    potential: Potential,
    index: int,
    *,
    tolerance: float = MESH_RESOLUTION,
) -> ResolvedWavefunction:
    """Compare state ``index`` with the ``N - 5`` mesh at the same scale, node by node."""
    basis = solution.basis

    if basis.kind == "hermite":
        raise InvalidInputError("Off-node values need a half-line mesh")

    if basis.size - SIZE_STEP <= index:
        raise InvalidInputError(f"Mesh size {basis.size} is too small for state index {index}")

    # basis.dimension is already D_eff
    coarse_basis = build(basis.kind, basis.size - SIZE_STEP, basis.scale, basis.dimension)
    coarse = eigenvalues(coarse_basis, potential, index + 1).evaluate(index, solution.r)
    psi = solution.wavefunctions[:, index]

    if np.dot(coarse, psi) < 0:
        coarse = -coarse

    resolved = np.abs(coarse - psi) <= tolerance * np.abs(psi)
    logger.debug(
        "%s of %s mesh nodes resolved to %.1e", int(resolved.sum()), psi.size, tolerance
    )

    return ResolvedWavefunction(r=solution.r, psi=psi, resolved=resolved)


def _state_basis(
    kind: MeshKind, size: int, scale: float, state: EffectiveState
) -> MeshBasis:
    # the full-line mesh carries both parities itself
    ell = 0 if kind == "hermite" else state.angular_momentum

    return build(kind, size, scale, state.dimension, ell)


def state_index(kind: MeshKind, state: EffectiveState) -> int:
    if kind == "hermite":
        return 2 * state.radial_nodes + state.angular_momentum

    return state.radial_nodes


def default_scale(
    potential: Potential, state: EffectiveState, size: int, kind: MeshKind
) -> float:
    """Put the classical turning point of the state at node ``ceil(0.7 N)``."""
    target = 4 * state.radial_nodes + state.effective_dimension

    def excess(r: float) -> float:
        return float(potential.value(r)) - target

    upper = 1.0
    while excess(upper) < 0:
        upper *= 2

    turning = brentq(excess, 0.0, upper, xtol=1e-12)
    basis = _state_basis(kind, size, 1.0, state)
    node = basis.nodes[math.ceil(TURNING_NODE_FRACTION * size) - 1]

    return float(turning / node)


class ScaleScan(BaseModel):
    scale: float
    energy: float
    stability: float
    plateau: bool
    scales: tuple[float, ...]
    energies: tuple[float, ...]


def _energy(
    kind: MeshKind, size: int, scale: float, potential: Potential, state: EffectiveState
) -> float:
    basis = _state_basis(kind, size, scale, state)
    index = state_index(kind, state)

    return float(eigenvalues(basis, potential, index + 1).energies[index])


def scale_scan(
    potential: Potential,
    state: EffectiveState,
    size: int = MAX_MESH_SIZE,
    kind: MeshKind = "laguerre",
) -> ScaleScan:
    """Scan h over ``[h0/8, 8 h0]`` and keep the most stable eigenvalue.

    Stability adds the change from N - 5 to N points and the largest change
    to a neighbouring h.
    """
    index = state_index(kind, state)
    if size - SIZE_STEP <= index:
        raise InvalidInputError(f"Mesh size {size} is too small for state index {index}")

    h0 = default_scale(potential, state, size, kind)
    scales = np.geomspace(h0 / SCAN_SPREAD, h0 * SCAN_SPREAD, SCAN_POINTS)

    energies = np.array([_energy(kind, size, h, potential, state) for h in scales])
    coarse = np.array([_energy(kind, size - SIZE_STEP, h, potential, state) for h in scales])

    neighbours = np.abs(np.diff(energies))
    adjacent = np.maximum(
        np.concatenate([[np.inf], neighbours]), np.concatenate([neighbours, [np.inf]])
    )
    adjacent[0], adjacent[-1] = neighbours[0], neighbours[-1]
    stability = np.abs(energies - coarse) + adjacent

    best = int(np.argmin(stability))
    plateau = bool(stability[best] < PLATEAU_TOLERANCE)

    if not plateau:
        logger.debug(
            "No plateau for state %s: best stability %.3g at h=%.6g",
            state,
            stability[best],
            scales[best],
        )

    return ScaleScan(
        scale=float(scales[best]),
        energy=float(energies[best]),
        stability=float(stability[best]),
        plateau=plateau,
        scales=tuple(float(h) for h in scales),
        energies=tuple(float(e) for e in energies),
    )


def solve_state(
    potential: Potential,
    state: EffectiveState,
    size: int = MAX_MESH_SIZE,
    kind: MeshKind = "laguerre",
) -> tuple[float, MeshSolution, ScaleScan]:
    """Eigenvalue of ``state`` at the scanned scale, with the full solution."""
    scan = scale_scan(potential, state, size, kind)
    basis = _state_basis(kind, size, scan.scale, state)
    index = state_index(kind, state)
    solution = eigenvalues(basis, potential, index + 1)

    return float(solution.energies[index]), solution, scan
