"""Dense linear algebra on registers of at most four qubits.

Conventions used everywhere in the package:

* qubit 0 is the leftmost tensor factor and the most significant bit of a
  computational-basis index, so ``|q0 q1 q2>`` has index ``4*q0 + 2*q1 + q2``;
* operators are plain ``numpy`` complex arrays, states are wrapped in the
  small immutable containers below so that they carry their own validation.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from swapcm.errors import (
    DimensionMismatchError,
    NonUnitaryError,
    RegisterLayoutError,
    UnphysicalStateError,
)

MAX_QUBITS = 4


@dataclass(frozen=True)
class Tolerances:
    """Validation thresholds shared by every module."""

    hermitian: float = 1e-12
    trace: float = 1e-12
    min_eigenvalue: float = -1e-10
    bloch_norm: float = 1e-10
    unitary: float = 1e-10
    norm: float = 1e-12


TOL = Tolerances()

IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY4 = np.eye(4, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

for _op in (IDENTITY2, IDENTITY4, PAULI_X, PAULI_Y, PAULI_Z):
    _op.setflags(write=False)


def validation_enabled() -> bool:
    """Whether model steps validate their output (``SWAPCM_VALIDATE=1``)."""
    return os.environ.get("SWAPCM_VALIDATE", "") not in ("", "0")


def _qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or dim != 1 << n:
        raise DimensionMismatchError(f"dimension {dim} is not a power of two")
    return n


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return float(np.sqrt(self.x * self.x + self.y * self.y + self.z * self.z))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over ``num_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        _qubit_count(amps.size)
        if not np.all(np.isfinite(amps)):
            raise UnphysicalStateError("state vector has non-finite amplitudes")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > TOL.norm:
            raise UnphysicalStateError(f"state vector has squared norm {norm2!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return _qubit_count(self.amplitudes.size)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density operator of a register of 1 to 4 qubits.

    Construction only checks shape and finiteness. Physical validity
    (Hermiticity, unit trace, positivity) is checked by :meth:`validate`,
    which is called explicitly by tests and by model steps when
    ``SWAPCM_VALIDATE`` is set.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"density matrix must be square, got shape {m.shape}")
        n = _qubit_count(m.shape[0])
        if n > MAX_QUBITS:
            raise DimensionMismatchError(f"{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
        if not np.all(np.isfinite(m)):
            raise UnphysicalStateError("density matrix has non-finite entries")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def num_qubits(self) -> int:
        return _qubit_count(self.matrix.shape[0])

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and bool(np.array_equal(self.matrix, other.matrix))

    __hash__ = None

    def __repr__(self):
        return f"DensityMatrix(num_qubits={self.num_qubits}, matrix={self.matrix!r})"

    def violations(self, tol: Tolerances = TOL) -> list[str]:
        m = self.matrix
        problems = []
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > tol.hermitian:
            problems.append(f"not Hermitian (max |rho - rho^dag| = {herm:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > tol.trace:
            problems.append(f"trace {tr} differs from 1")
        lam = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
        if lam < tol.min_eigenvalue:
            problems.append(f"minimum eigenvalue {lam:.3e} is negative")
        return problems

    def is_valid(self, tol: Tolerances = TOL) -> bool:
        return not self.violations(tol)

    def validate(self, tol: Tolerances = TOL) -> "DensityMatrix":
        problems = self.violations(tol)
        if problems:
            raise UnphysicalStateError("; ".join(problems))
        return self

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        return psi.density()

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        d = 1 << num_qubits
        return cls(np.eye(d, dtype=complex) / d)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor(*states: DensityMatrix) -> DensityMatrix:
    """Product state ``states[0] ⊗ states[1] ⊗ ...``."""
    out = states[0].matrix
    for s in states[1:]:
        out = np.kron(out, s.matrix)
    return DensityMatrix(out)


def _check_qubits(qubits: Sequence[int], n: int) -> list[int]:
    qs = [int(q) for q in qubits]
    if not qs:
        raise RegisterLayoutError("at least one qubit index is required")
    if len(set(qs)) != len(qs):
        raise RegisterLayoutError(f"repeated qubit index in {qs}")
    bad = [q for q in qs if not 0 <= q < n]
    if bad:
        raise RegisterLayoutError(f"qubit indices {bad} out of range for a {n}-qubit register")
    return qs


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the qubits in ``keep``; their relative order is preserved."""
    n = rho.num_qubits
    kept = sorted(_check_qubits(list(keep), n))
    tensor_form = rho.matrix.reshape((2,) * (2 * n))
    rows = list(range(n))
    cols = [n + q if q in kept else q for q in range(n)]
    out = kept + [n + q for q in kept]
    reduced = np.einsum(tensor_form, rows + cols, out)
    d = 1 << len(kept)
    return DensityMatrix(reduced.reshape(d, d))


def embed_operator(u: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Lift ``u`` acting on ``targets`` (in that order) to the full register."""
    u = np.asarray(u, dtype=complex)
    targets = _check_qubits(targets, num_qubits)
    k = len(targets)
    if u.shape != (1 << k, 1 << k):
        raise DimensionMismatchError(f"operator of shape {u.shape} cannot act on {k} qubits")
    n = num_qubits
    rest = [q for q in range(n) if q not in targets]
    order = targets + rest
    full = np.kron(u, np.eye(1 << (n - k), dtype=complex)).reshape((2,) * (2 * n))
    inv = list(np.argsort(order))
    full = full.transpose(inv + [n + i for i in inv])
    return full.reshape(1 << n, 1 << n)


def swap_permutation(num_qubits: int, a: int, b: int) -> np.ndarray:
    """Basis-index permutation implementing SWAP of qubits ``a`` and ``b``."""
    a, b = _check_qubits([a, b], num_qubits)
    ma = 1 << (num_qubits - 1 - a)
    mb = 1 << (num_qubits - 1 - b)
    idx = np.arange(1 << num_qubits)
    differ = ((idx & ma) > 0) != ((idx & mb) > 0)
    perm = np.where(differ, idx ^ ma ^ mb, idx)
    return perm.astype(np.intp)


def swap_operator() -> np.ndarray:
    s = np.zeros((4, 4), dtype=complex)
    s[0, 0] = s[1, 2] = s[2, 1] = s[3, 3] = 1.0
    return s


def pswap_unitary(gamma: float) -> np.ndarray:
    """Partial SWAP ``cos(gamma) I + i sin(gamma) SWAP``."""
    return np.cos(gamma) * np.eye(4, dtype=complex) + 1j * np.sin(gamma) * swap_operator()


def cswap_unitary() -> np.ndarray:
    """Fredkin gate: control on qubit 0, swaps qubits 1 and 2 when the control is |1>."""
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return np.kron(p0, np.eye(4)) + np.kron(p1, swap_operator())


def control_state(gamma: float) -> PureState:
    return PureState(np.array([np.cos(gamma), np.sin(gamma)], dtype=complex))


def free_evolution_unitary(omega: float, dt: float) -> np.ndarray:
    """``exp(-i H dt)`` for ``H = -(omega/2) sigma_z``."""
    half = 0.5 * omega * dt
    return np.diag([np.exp(1j * half), np.exp(-1j * half)])


def is_unitary(u: np.ndarray, tol: float = TOL.unitary) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))) <= tol


def conjugate(rho: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    """``U rho U^dag``; ``u`` must match the register dimension and be unitary."""
    u = np.asarray(u, dtype=complex)
    if u.shape != rho.matrix.shape:
        raise DimensionMismatchError(f"operator shape {u.shape} does not match state shape {rho.matrix.shape}")
    if not is_unitary(u):
        raise NonUnitaryError("conjugation requires a unitary operator")
    return DensityMatrix(u @ rho.matrix @ u.conj().T)


def bloch_from_density(rho: DensityMatrix) -> BlochVector:
    if rho.num_qubits != 1:
        raise DimensionMismatchError(f"Bloch vector needs a single-qubit state, got {rho.num_qubits} qubits")
    m = rho.matrix
    return BlochVector(float(2.0 * m[1, 0].real), float(2.0 * m[1, 0].imag), float((m[0, 0] - m[1, 1]).real))


def density_from_bloch(v: Sequence[float]) -> DensityMatrix:
    x, y, z = (float(c) for c in v)
    r = np.sqrt(x * x + y * y + z * z)
    if r > 1.0 + TOL.bloch_norm:
        raise UnphysicalStateError(f"Bloch vector {(x, y, z)} has length {r:.12g} > 1")
    return DensityMatrix(0.5 * np.array([[1.0 + z, x - 1j * y], [x + 1j * y, 1.0 - z]]))


def pure_from_angles(theta: float, phi: float) -> PureState:
    """``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>``."""
    return PureState(np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]))


_S2 = 1.0 / np.sqrt(2.0)
NAMED_STATES = {
    "zero": (1.0, 0.0),
    "one": (0.0, 1.0),
    "plus": (_S2, _S2),
    "minus": (_S2, -_S2),
    "L": (_S2, 1j * _S2),
}


def named_state(name: str) -> PureState:
    try:
        amps = NAMED_STATES[name]
    except KeyError:
        raise KeyError(f"unknown state {name!r}; expected one of {sorted(NAMED_STATES)}") from None
    return PureState(np.array(amps, dtype=complex))


def named_density(name: str) -> DensityMatrix:
    return named_state(name).density()
