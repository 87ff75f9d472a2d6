"""Backend selection for the trajectory kernels.

The compiled Cython extension is used when it imports; otherwise the numpy
fallback is. ``SWAPCM_BACKEND=python`` forces the fallback at import time and
:func:`use` switches at run time (tests and benchmarks compare both).
"""
from __future__ import annotations

import contextlib
import os
from types import ModuleType

import numpy as np

from swapcm import _fallback

MARKOVIAN = _fallback.MARKOVIAN
PRODUCT_CARRYOVER = _fallback.PRODUCT_CARRYOVER
JOINT_CARRYOVER = _fallback.JOINT_CARRYOVER

try:
    from swapcm import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS: dict[str, ModuleType] = {"python": _fallback}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels


def _initial() -> str:
    requested = os.environ.get("SWAPCM_BACKEND", "auto")
    if requested == "auto":
        return "compiled" if "compiled" in BACKENDS else "python"
    if requested not in BACKENDS:
        raise ImportError(f"SWAPCM_BACKEND={requested!r} is not available; have {sorted(BACKENDS)}")
    return requested


_active = _initial()


def active() -> str:
    return _active


def get(name: str | None = None) -> ModuleType:
    return BACKENDS[name or _active]


def set_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} is not available; have {sorted(BACKENDS)}")
    _active = name


@contextlib.contextmanager
def use(name: str):
    previous = _active
    set_backend(name)
    try:
        yield get(name)
    finally:
        set_backend(previous)


def _hermitian(m):
    # exact identity on already-Hermitian input; the kernels preserve it from there
    m = np.asarray(m, dtype=complex)
    return 0.5 * (m + m.conj().T)


def single_trajectory(rho0, env, se_coherent, gamma_se, ee_coherent, gamma_ee, n, mode):
    rho0, env = _hermitian(rho0), _hermitian(env)
    return get().single_trajectory(rho0, env, bool(se_coherent), float(gamma_se), bool(ee_coherent),
                                   float(gamma_ee), int(n), int(mode))


def sync_trajectory(rho0, env, s1_coherent, s2_coherent, gamma, phase1, phase2, n):
    rho0, env = _hermitian(rho0), _hermitian(env)
    return get().sync_trajectory(rho0, env, bool(s1_coherent), bool(s2_coherent), float(gamma),
                                 float(phase1), float(phase2), int(n))
