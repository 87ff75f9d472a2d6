"""Collision-model dynamics.

Two routes compute the same maps:

* the step functions (:func:`markovian_step`, :func:`nonmarkov_step`,
  :func:`sync_step`) build every operator explicitly, including the control
  qubit of each controlled-SWAP, and act on :class:`DensityMatrix` values;
* the runners (:func:`system_states`, :func:`run_single_qubit`,
  :func:`run_sync`, ...) drive whole trajectories through
  :mod:`swapcm.kernels`, which uses the closed-form channel of each coupling.

Tests hold the two routes to agree.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from swapcm import kernels
from swapcm.errors import DimensionMismatchError, RegisterLayoutError
from swapcm.metrics import (
    BLP_INCREMENT_FLOOR,
    PearsonSeries,
    blp_measure,
    blp_running,
    coherence_series,
    entropy_series,
    trace_distance_series,
    windowed_pearson,
)
from swapcm.qcore import (
    MAX_QUBITS,
    BlochVector,
    DensityMatrix,
    PureState,
    bloch_from_density,
    conjugate,
    control_state,
    cswap_unitary,
    density_from_bloch,
    embed_operator,
    free_evolution_unitary,
    named_density,
    partial_trace,
    pswap_unitary,
    pure_from_angles,
    tensor,
    validation_enabled,
)

HALF_PI = math.pi / 2


class CouplingKind(str, enum.Enum):
    COHERENT = "pswap"
    INCOHERENT = "cswap"

    @property
    def coherent(self) -> bool:
        return self is CouplingKind.COHERENT

    @classmethod
    def parse(cls, value) -> "CouplingKind":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        aliases = {"pswap": cls.COHERENT, "coherent": cls.COHERENT, "p": cls.COHERENT,
                   "cswap": cls.INCOHERENT, "incoherent": cls.INCOHERENT, "c": cls.INCOHERENT}
        try:
            return aliases[text]
        except KeyError:
            raise ValueError(f"unknown coupling kind {value!r}; expected 'pswap' or 'cswap'") from None


def _zero() -> DensityMatrix:
    return named_density("zero")


def _plus() -> DensityMatrix:
    return named_density("plus")


@dataclass(frozen=True)
class CollisionModelSpec:
    """Single-qubit collision model. Coupling strengths are in radians."""

    se_kind: CouplingKind
    ee_kind: CouplingKind = CouplingKind.COHERENT
    gamma_se: float = 0.05 * HALF_PI
    gamma_ee: float = 0.0
    n_collisions: int = 1100
    initial_system: DensityMatrix = field(default_factory=_plus)
    env_state: DensityMatrix = field(default_factory=_zero)
    joint_carryover: bool = False

    def __post_init__(self):
        object.__setattr__(self, "se_kind", CouplingKind.parse(self.se_kind))
        object.__setattr__(self, "ee_kind", CouplingKind.parse(self.ee_kind))
        if not (math.isfinite(self.gamma_se) and math.isfinite(self.gamma_ee)):
            raise ValueError("coupling strengths must be finite")
        if int(self.n_collisions) < 1:
            raise ValueError(f"n_collisions must be >= 1, got {self.n_collisions}")
        for name in ("initial_system", "env_state"):
            if getattr(self, name).num_qubits != 1:
                raise DimensionMismatchError(f"{name} must be a single-qubit state")

    @property
    def markovian(self) -> bool:
        return self.gamma_ee == 0.0

    def with_initial(self, rho: DensityMatrix) -> "CollisionModelSpec":
        return replace(self, initial_system=rho)


@dataclass(frozen=True)
class SyncModelSpec:
    """Two system qubits sharing one environment stream; no intra-environment coupling."""

    s1_kind: CouplingKind = CouplingKind.COHERENT
    s2_kind: CouplingKind = CouplingKind.COHERENT
    gamma_se: float = 0.03 * HALF_PI
    omega1: float = 1.0
    omega2: float = 1.0
    dt: float = 0.04
    n_collisions: int = 2500
    initial_pair: DensityMatrix = field(default_factory=lambda: tensor(_plus(), named_density("L")))
    env_state: DensityMatrix = field(default_factory=_zero)
    window_width: int = 100
    window_stride: int = 50

    def __post_init__(self):
        object.__setattr__(self, "s1_kind", CouplingKind.parse(self.s1_kind))
        object.__setattr__(self, "s2_kind", CouplingKind.parse(self.s2_kind))
        for name in ("gamma_se", "omega1", "omega2", "dt"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if int(self.n_collisions) < 1:
            raise ValueError(f"n_collisions must be >= 1, got {self.n_collisions}")
        if self.window_stride < 1 or self.window_width < 2:
            raise ValueError("window_width must be >= 2 and window_stride >= 1")
        if self.window_width > self.n_collisions:
            raise ValueError(f"window_width {self.window_width} exceeds n_collisions {self.n_collisions}")
        if self.initial_pair.num_qubits != 2:
            raise DimensionMismatchError("initial_pair must be a two-qubit state")
        if self.env_state.num_qubits != 1:
            raise DimensionMismatchError("env_state must be a single-qubit state")


@dataclass(frozen=True)
class CarryoverState:
    """Memory handed from one non-Markovian step to the next.

    ``env_marginal`` is the reduced state of the environment qubit that meets
    the system next. ``joint`` is only used with ``joint_carryover=True`` and
    holds the correlated (system, next environment) pair instead.
    """

    env_marginal: DensityMatrix
    joint: DensityMatrix | None = None

    @classmethod
    def initial(cls, spec: CollisionModelSpec, rho_s: DensityMatrix) -> "CarryoverState":
        joint = tensor(rho_s, spec.env_state) if spec.joint_carryover else None
        return cls(spec.env_state, joint)


@dataclass(frozen=True)
class TrajectoryRecord:
    collision: int
    bloch: BlochVector | tuple[BlochVector, BlochVector]
    fidelity_to_env: float
    entropy: float
    coherence: float
    trace_distance: float | None = None
    sigma_x: tuple[float, float] | None = None
    marginal_fidelities: tuple[float, float] | None = None


def _checked(rho: DensityMatrix) -> DensityMatrix:
    if validation_enabled():
        rho.validate()
    return rho


def _normalized(rho: DensityMatrix) -> DensityMatrix:
    # Hermitian part first: an imaginary trace residue also doubles per step
    m = 0.5 * (rho.matrix + rho.matrix.conj().T)
    return DensityMatrix(m / np.trace(m).real)


# ---------------------------------------------------------------------------
# reference (explicit-operator) route


def apply_pair_coupling(kind: CouplingKind, gamma: float, rho: DensityMatrix, a: int, b: int) -> DensityMatrix:
    """Couple qubits ``a`` and ``b`` of ``rho`` with a partial or controlled SWAP.

    The controlled SWAP borrows a fresh control qubit in ``cos g|0> + sin g|1>``,
    appended after the last register qubit and traced out again.
    """
    kind = CouplingKind.parse(kind)
    n = rho.num_qubits
    if a == b or not (0 <= a < n and 0 <= b < n):
        raise RegisterLayoutError(f"invalid coupling pair ({a}, {b}) for a {n}-qubit register")
    if kind.coherent:
        return conjugate(rho, embed_operator(pswap_unitary(gamma), [a, b], n))
    if n + 1 > MAX_QUBITS:
        raise RegisterLayoutError(f"no room for a control qubit in a {n}-qubit register")
    extended = tensor(rho, control_state(gamma).density())
    u = embed_operator(cswap_unitary(), [n, a, b], n + 1)
    return partial_trace(conjugate(extended, u), range(n))


def markovian_step(spec: CollisionModelSpec, rho_s: DensityMatrix) -> DensityMatrix:
    if spec.gamma_ee != 0.0:
        raise ValueError("markovian_step requires gamma_ee = 0; use nonmarkov_step")
    joint = apply_pair_coupling(spec.se_kind, spec.gamma_se, tensor(rho_s, spec.env_state), 0, 1)
    return _checked(partial_trace(joint, [0]))


def nonmarkov_step(spec: CollisionModelSpec, rho_s: DensityMatrix,
                   carry: CarryoverState) -> tuple[DensityMatrix, CarryoverState]:
    """One step on the register (s, e_i, e_{i+1}).

    The register starts as ``rho_s ⊗ carry ⊗ env``; the system-environment
    coupling acts on (s, e_i), then the intra-environment coupling on
    (e_i, e_{i+1}). Both outputs are renormalized to unit trace: the map is
    trace preserving, but the product input doubles trace round-off each step.
    """
    if spec.joint_carryover:
        if carry.joint is None:
            raise ValueError("joint carryover requested but the carryover holds no joint state")
        register = tensor(carry.joint, spec.env_state)
    else:
        register = tensor(rho_s, carry.env_marginal, spec.env_state)
    register = apply_pair_coupling(spec.se_kind, spec.gamma_se, register, 0, 1)
    register = apply_pair_coupling(spec.ee_kind, spec.gamma_ee, register, 1, 2)
    if spec.joint_carryover:
        joint = _normalized(partial_trace(register, [0, 2]))
        return _checked(partial_trace(joint, [0])), CarryoverState(partial_trace(joint, [1]), joint)
    rho_next = _normalized(partial_trace(register, [0]))
    env_next = _normalized(partial_trace(register, [2]))
    return _checked(rho_next), CarryoverState(_checked(env_next))


def sync_step(spec: SyncModelSpec, rho_pair: DensityMatrix) -> DensityMatrix:
    register = tensor(rho_pair, spec.env_state)
    register = apply_pair_coupling(spec.s1_kind, spec.gamma_se, register, 0, 2)
    register = apply_pair_coupling(spec.s2_kind, spec.gamma_se, register, 1, 2)
    register = conjugate(register, embed_operator(free_evolution_unitary(spec.omega1, spec.dt), [0], 3))
    register = conjugate(register, embed_operator(free_evolution_unitary(spec.omega2, spec.dt), [1], 3))
    return _checked(partial_trace(register, [0, 1]))


# ---------------------------------------------------------------------------
# closed-form single-collision oracles


def pswap_collision_oracle(beta: Sequence[float], alpha: Sequence[float], gamma: float,
                           cross_coefficient: float = 1.0) -> BlochVector:
    """System Bloch vector after one partial SWAP with an environment qubit.

    ``cos^2 g beta + sin^2 g alpha + k cos g sin g (beta x alpha)``. Direct
    matrix simulation fixes ``k = 1`` (see :func:`pswap_cross_coefficient`).
    """
    b = np.asarray(beta, dtype=float)
    a = np.asarray(alpha, dtype=float)
    c, s = math.cos(gamma), math.sin(gamma)
    v = c * c * b + s * s * a + cross_coefficient * c * s * np.cross(b, a)
    return BlochVector(*map(float, v))


def cswap_collision_oracle(beta: Sequence[float], alpha: Sequence[float], gamma: float) -> BlochVector:
    """System Bloch vector after one controlled SWAP: ``cos^2 g beta + sin^2 g alpha``."""
    c, s = math.cos(gamma), math.sin(gamma)
    v = c * c * np.asarray(beta, dtype=float) + s * s * np.asarray(alpha, dtype=float)
    return BlochVector(*map(float, v))


def single_collision(kind: CouplingKind, beta: Sequence[float], alpha: Sequence[float], gamma: float) -> BlochVector:
    """Matrix-level single collision of a system (beta) with an environment qubit (alpha)."""
    joint = tensor(density_from_bloch(beta), density_from_bloch(alpha))
    return bloch_from_density(partial_trace(apply_pair_coupling(kind, gamma, joint, 0, 1), [0]))


def pswap_cross_coefficient(beta: Sequence[float], alpha: Sequence[float], gamma: float) -> float:
    """Coefficient ``k`` of ``cos g sin g (beta x alpha)`` recovered from matrix simulation."""
    b = np.asarray(beta, dtype=float)
    a = np.asarray(alpha, dtype=float)
    cross = np.cross(b, a)
    c, s = math.cos(gamma), math.sin(gamma)
    denom = c * s * float(cross @ cross)
    if abs(denom) < 1e-15:
        raise ValueError("beta x alpha or cos g sin g vanishes; the cross term is unobservable")
    sim = single_collision(CouplingKind.COHERENT, b, a, gamma).as_array()
    residual = sim - (c * c * b + s * s * a)
    return float(residual @ cross / denom)


# ---------------------------------------------------------------------------
# kernel-backed runners


def _mode(spec: CollisionModelSpec) -> int:
    if spec.gamma_ee == 0.0:
        return kernels.MARKOVIAN
    return kernels.JOINT_CARRYOVER if spec.joint_carryover else kernels.PRODUCT_CARRYOVER


def system_states(spec: CollisionModelSpec, rho0: DensityMatrix | None = None) -> np.ndarray:
    """``rho_s[0..N]`` as an array of shape ``(N+1, 2, 2)``; index 0 is the initial state."""
    rho0 = spec.initial_system if rho0 is None else rho0
    return kernels.single_trajectory(rho0.matrix, spec.env_state.matrix, spec.se_kind.coherent, spec.gamma_se,
                                     spec.ee_kind.coherent, spec.gamma_ee, spec.n_collisions, _mode(spec))


def bloch_series(rhos: np.ndarray) -> np.ndarray:
    """Bloch components of stacked single-qubit states, shape ``(T, 3)``."""
    rhos = np.asarray(rhos)
    off = rhos[:, 1, 0]
    return np.stack([2.0 * off.real, 2.0 * off.imag, (rhos[:, 0, 0] - rhos[:, 1, 1]).real], axis=1)


def fidelity_series(rhos: np.ndarray, reference: DensityMatrix) -> np.ndarray:
    """Qubit fidelity of each stacked state to ``reference``."""
    rhos = np.asarray(rhos)
    ref = reference.matrix
    overlap = np.einsum("tij,ji->t", rhos, ref).real
    det = np.linalg.det(rhos).real * np.linalg.det(ref).real
    return np.clip(overlap + 2.0 * np.sqrt(np.clip(det, 0.0, None)), 0.0, 1.0)


def run_single_qubit(spec: CollisionModelSpec) -> list[TrajectoryRecord]:
    """Per-collision metrics of the system qubit, for collisions ``0..N``."""
    rhos = system_states(spec)
    bloch = bloch_series(rhos)
    fid = fidelity_series(rhos, spec.env_state)
    ent = entropy_series(rhos)
    coh = coherence_series(rhos)
    return [
        TrajectoryRecord(i, BlochVector(*map(float, bloch[i])), float(fid[i]), float(ent[i]), float(coh[i]))
        for i in range(len(rhos))
    ]


@dataclass(frozen=True)
class DistancePairResult:
    distances: np.ndarray
    nd: float
    running_nd: np.ndarray

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.distances) <= BLP_INCREMENT_FLOOR))


def run_distance_pair(spec: CollisionModelSpec, rho1: DensityMatrix, rho2: DensityMatrix) -> DistancePairResult:
    """Trace distance between two trajectories of the same model, and its BLP measure."""
    d = trace_distance_series(system_states(spec, rho1), system_states(spec, rho2))
    return DistancePairResult(d, blp_measure(d), blp_running(d))


@dataclass(frozen=True)
class BLPOptimum:
    nd_max: float
    theta: float
    phi: float
    rho1: DensityMatrix
    rho2: DensityMatrix
    thetas: np.ndarray
    phis: np.ndarray
    values: np.ndarray


def antipodal_pair(theta: float, phi: float) -> tuple[DensityMatrix, DensityMatrix]:
    return (pure_from_angles(theta, phi).density(),
            pure_from_angles(math.pi - theta, phi + math.pi).density())


def optimize_blp(spec: CollisionModelSpec, n_theta: int = 32, n_phi: int = 64) -> BLPOptimum:
    """Maximize the BLP measure over antipodal pure-state pairs.

    The grid covers the upper hemisphere, ``theta_k = k (pi/2) / n_theta`` for
    ``k = 1..n_theta`` and ``phi_j = 2 pi j / n_phi``. Values within 1e-12 of the
    maximum count as ties and the first such cell (row-major) is returned.
    """
    if n_theta < 1 or n_phi < 1:
        raise ValueError("grid resolution must be at least 1 x 1")
    thetas = HALF_PI * np.arange(1, n_theta + 1) / n_theta
    phis = 2.0 * math.pi * np.arange(n_phi) / n_phi
    values = np.empty((n_theta, n_phi))
    for i, th in enumerate(thetas):
        for j, ph in enumerate(phis):
            values[i, j] = run_distance_pair(spec, *antipodal_pair(th, ph)).nd
    # the model is symmetric under z rotations, so whole phi rows tie up to round-off
    best = float(values.max())
    first = int(np.flatnonzero(values.ravel() >= best - 1e-12 * max(1.0, best))[0])
    i, j = np.unravel_index(first, values.shape)
    rho1, rho2 = antipodal_pair(thetas[i], phis[j])
    return BLPOptimum(best, float(thetas[i]), float(phis[j]), rho1, rho2, thetas, phis, values)


@dataclass(frozen=True)
class SyncResult:
    states: np.ndarray
    sigma_x1: np.ndarray
    sigma_x2: np.ndarray
    pearson: PearsonSeries
    fidelity_s1: np.ndarray
    fidelity_s2: np.ndarray
    fidelity_joint: np.ndarray

    def marginals(self) -> tuple[np.ndarray, np.ndarray]:
        t = self.states.reshape(-1, 2, 2, 2, 2)
        return np.einsum("tabcb->tac", t), np.einsum("tabad->tbd", t)


def _pure_reference(env: DensityMatrix) -> PureState:
    lam, vecs = np.linalg.eigh(env.matrix)
    if abs(lam[-1] - 1.0) > 1e-10:
        raise ValueError("the joint fidelity reference needs a pure environment state")
    v = vecs[:, -1]
    v = v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))]))
    return PureState(v / np.linalg.norm(v))


def sync_states(spec: SyncModelSpec) -> np.ndarray:
    return kernels.sync_trajectory(spec.initial_pair.matrix, spec.env_state.matrix, spec.s1_kind.coherent,
                                   spec.s2_kind.coherent, spec.gamma_se, spec.omega1 * spec.dt,
                                   spec.omega2 * spec.dt, spec.n_collisions)


def run_sync(spec: SyncModelSpec) -> SyncResult:
    """Synchronization run: local sigma_x expectations, windowed Pearson, fidelities."""
    states = sync_states(spec)
    t = states.reshape(-1, 2, 2, 2, 2)
    rho1 = np.einsum("tabcb->tac", t)
    rho2 = np.einsum("tabad->tbd", t)
    sx1 = 2.0 * rho1[:, 1, 0].real
    sx2 = 2.0 * rho2[:, 1, 0].real
    psi = _pure_reference(spec.env_state)
    ref = np.kron(psi.amplitudes, psi.amplitudes)
    fj = np.einsum("i,tij,j->t", ref.conj(), states, ref).real
    return SyncResult(
        states=states,
        sigma_x1=sx1,
        sigma_x2=sx2,
        pearson=windowed_pearson(sx1, sx2, spec.window_width, spec.window_stride),
        fidelity_s1=fidelity_series(rho1, spec.env_state),
        fidelity_s2=fidelity_series(rho2, spec.env_state),
        fidelity_joint=fj,
    )


def sync_records(result: SyncResult) -> list[TrajectoryRecord]:
    rho1, rho2 = result.marginals()
    b1, b2 = bloch_series(rho1), bloch_series(rho2)
    ent = entropy_series(result.states)
    coh = coherence_series(result.states)
    return [
        TrajectoryRecord(
            collision=i,
            bloch=(BlochVector(*map(float, b1[i])), BlochVector(*map(float, b2[i]))),
            fidelity_to_env=float(result.fidelity_joint[i]),
            entropy=float(ent[i]),
            coherence=float(coh[i]),
            sigma_x=(float(result.sigma_x1[i]), float(result.sigma_x2[i])),
            marginal_fidelities=(float(result.fidelity_s1[i]), float(result.fidelity_s2[i])),
        )
        for i in range(len(result.states))
    ]
