"""Scalar figures of merit for single states, state pairs and time series."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from swapcm.errors import DimensionMismatchError
from swapcm.qcore import DensityMatrix, PureState

# increments of the trace distance at or below this are floating-point ripple
BLP_INCREMENT_FLOOR = 1e-12

# Pearson is undefined when a series is constant; NaN renders as a gap
UNDEFINED = math.nan

# peak-to-peak spread below which a window is treated as constant
PEARSON_CONSTANT_TOL = 1e-14


def fidelity_qubit(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Fidelity of two qubit states, ``Tr(rho1 rho2) + 2 sqrt(det rho1 det rho2)``."""
    if rho1.num_qubits != 1 or rho2.num_qubits != 1:
        raise DimensionMismatchError(
            "fidelity_qubit is defined for single qubits only; use fidelity_with_pure for larger registers"
        )
    a, b = rho1.matrix, rho2.matrix
    overlap = float(np.real(np.sum(a * b.T)))
    det_prod = float(np.real(np.linalg.det(a))) * float(np.real(np.linalg.det(b)))
    f = overlap + 2.0 * math.sqrt(max(det_prod, 0.0))
    return min(max(f, 0.0), 1.0)


def fidelity_with_pure(rho: DensityMatrix, psi: PureState) -> float:
    """``<psi|rho|psi>``."""
    if psi.amplitudes.size != rho.dim:
        raise DimensionMismatchError(f"state of dimension {psi.amplitudes.size} vs density matrix of dimension {rho.dim}")
    v = psi.amplitudes
    return float(np.real(np.vdot(v, rho.matrix @ v)))


def _entropy_from_eigenvalues(lam: np.ndarray) -> np.ndarray:
    lam = np.clip(lam, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0.0, -lam * np.log(lam), 0.0)
    return terms.sum(axis=-1)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in nats; eigenvalues within the negative tolerance are clamped to zero."""
    lam = np.linalg.eigvalsh(rho.matrix)
    return float(_entropy_from_eigenvalues(lam))


def l1_coherence(rho: DensityMatrix) -> float:
    m = np.abs(rho.matrix)
    return float(m.sum() - np.trace(m))


def trace_distance(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    if rho1.dim != rho2.dim:
        raise DimensionMismatchError(f"cannot compare states of dimension {rho1.dim} and {rho2.dim}")
    diff = rho1.matrix - rho2.matrix
    return float(0.5 * np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum())


def trace_distance_series(rhos1: np.ndarray, rhos2: np.ndarray) -> np.ndarray:
    """Trace distance between stacked density matrices of shape ``(T, d, d)``."""
    diff = np.asarray(rhos1) - np.asarray(rhos2)
    diff = 0.5 * (diff + np.conj(np.swapaxes(diff, -1, -2)))
    return 0.5 * np.abs(np.linalg.eigvalsh(diff)).sum(axis=-1)


def entropy_series(rhos: np.ndarray) -> np.ndarray:
    return _entropy_from_eigenvalues(np.linalg.eigvalsh(np.asarray(rhos)))


def coherence_series(rhos: np.ndarray) -> np.ndarray:
    m = np.abs(np.asarray(rhos))
    return m.sum(axis=(-1, -2)) - np.trace(m, axis1=-2, axis2=-1)


def blp_increments(d: Sequence[float], floor: float = BLP_INCREMENT_FLOOR) -> np.ndarray:
    """Positive consecutive increments of ``d`` above ``floor``; zero elsewhere."""
    d = np.asarray(d, dtype=float)
    if d.ndim != 1 or d.size < 2:
        raise ValueError("the BLP measure needs a distance series of at least two points")
    inc = np.diff(d)
    return np.where(inc > floor, inc, 0.0)


def blp_measure(d: Sequence[float], floor: float = BLP_INCREMENT_FLOOR) -> float:
    """Sum of the revivals of a trace-distance series (correctly rounded)."""
    return math.fsum(blp_increments(d, floor))


def blp_running(d: Sequence[float], floor: float = BLP_INCREMENT_FLOOR) -> np.ndarray:
    """Cumulative BLP measure, same length as ``d`` (starts at 0)."""
    return np.concatenate([[0.0], np.cumsum(blp_increments(d, floor))])


def _is_constant(x: np.ndarray) -> bool:
    return float(np.ptp(x)) <= PEARSON_CONSTANT_TOL * max(1.0, float(np.max(np.abs(x))))


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation coefficient; :data:`UNDEFINED` if either series is constant."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatchError(f"series shapes differ: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValueError("Pearson coefficient needs at least two samples")
    if _is_constant(x) or _is_constant(y):
        return UNDEFINED
    dx = x - x.mean()
    dy = y - y.mean()
    c = float(np.dot(dx, dy) / (math.sqrt(np.dot(dx, dx)) * math.sqrt(np.dot(dy, dy))))
    return min(max(c, -1.0), 1.0)


@dataclass(frozen=True)
class PearsonSeries:
    window_width: int
    stride: int
    starts: np.ndarray
    values: np.ndarray

    def defined(self) -> tuple[np.ndarray, np.ndarray]:
        ok = ~np.isnan(self.values)
        return self.starts[ok], self.values[ok]

    def final(self) -> float:
        _, vals = self.defined()
        return float(vals[-1]) if vals.size else UNDEFINED


def windowed_pearson(x: Sequence[float], y: Sequence[float], width: int, stride: int) -> PearsonSeries:
    """Pearson over left-aligned windows ``[k*stride, k*stride + width)``; partial tail windows are dropped."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"series shapes differ: {x.shape} vs {y.shape}")
    if width < 2 or stride < 1:
        raise ValueError(f"need width >= 2 and stride >= 1, got width={width}, stride={stride}")
    if width > x.size:
        raise ValueError(f"window width {width} exceeds series length {x.size}")
    starts = np.arange(0, x.size - width + 1, stride)
    values = np.array([pearson(x[s:s + width], y[s:s + width]) for s in starts])
    return PearsonSeries(width, stride, starts, values)


def pearson_stabilized(series: PearsonSeries, tail: int = 10, max_std: float = 0.05, min_abs: float = 0.9) -> bool:
    """True when the last ``tail`` defined windows are steady and strongly (anti-)correlated."""
    _, vals = series.defined()
    if vals.size < tail:
        return False
    last = vals[-tail:]
    return bool(np.std(last, ddof=1) <= max_std and np.all(np.abs(last) >= min_abs))
