"""Pure-Python (numpy) trajectory kernels.

Same signatures and semantics as the compiled ``swapcm._ckernels``; used when
the extension is unavailable or ``SWAPCM_BACKEND=python`` is set.

A pairwise coupling of strength ``g`` on qubits (a, b) is applied through the
basis permutation ``p`` that swaps the two qubits:

* coherent (partial SWAP):  c^2 rho + s^2 S rho S + i c s (S rho - rho S)
* incoherent (controlled SWAP, control traced out):  c^2 rho + s^2 S rho S

with ``c = cos g``, ``s = sin g``. Both forms map an exactly Hermitian array
to an exactly Hermitian array in floating point, which the carryover
recursion relies on (it is unstable against anti-Hermitian round-off).
"""
from __future__ import annotations

import numpy as np

MARKOVIAN = 0
PRODUCT_CARRYOVER = 1
JOINT_CARRYOVER = 2

_P2_01 = np.array([0, 2, 1, 3])
_P3_01 = np.array([0, 1, 4, 5, 2, 3, 6, 7])
_P3_12 = np.array([0, 2, 1, 3, 4, 6, 5, 7])
_P3_02 = np.array([0, 4, 2, 6, 1, 5, 3, 7])


def _couple(rho, perm, c, s, coherent):
    out = (c * c) * rho + (s * s) * rho[perm][:, perm]
    if coherent:
        out = out + (1j * c * s) * (rho[perm, :] - rho[:, perm])
    return out


def single_trajectory(rho0, env, se_coherent, gamma_se, ee_coherent, gamma_ee, n, mode):
    """System-qubit states ``rho_s[0..n]`` as an array of shape ``(n+1, 2, 2)``."""
    rho = np.array(rho0, dtype=complex).reshape(2, 2)
    env = np.array(env, dtype=complex).reshape(2, 2)
    cse, sse = np.cos(gamma_se), np.sin(gamma_se)
    cee, see = np.cos(gamma_ee), np.sin(gamma_ee)
    out = np.empty((n + 1, 2, 2), dtype=complex)
    out[0] = rho
    if mode == MARKOVIAN:
        for i in range(1, n + 1):
            r = np.kron(rho, env)
            r = _couple(r, _P2_01, cse, sse, se_coherent)
            rho = np.einsum("aibi->ab", r.reshape(2, 2, 2, 2))
            out[i] = rho
        return out
    if mode not in (PRODUCT_CARRYOVER, JOINT_CARRYOVER):
        raise ValueError(f"unknown carryover mode {mode}")
    carry = env
    pair = np.kron(rho, env)
    for i in range(1, n + 1):
        if mode == PRODUCT_CARRYOVER:
            r = np.kron(np.kron(rho, carry), env)
        else:
            r = np.kron(pair, env)
        r = _couple(r, _P3_01, cse, sse, se_coherent)
        r = _couple(r, _P3_12, cee, see, ee_coherent)
        if mode == PRODUCT_CARRYOVER:
            rho = np.einsum("aibi->ab", r.reshape(2, 4, 2, 4))
            carry = np.einsum("iaib->ab", r.reshape(4, 2, 4, 2))
            # the product recursion doubles trace round-off every step
            rho = rho / np.trace(rho).real
            carry = carry / np.trace(carry).real
        else:
            pair = np.einsum("abcdbf->acdf", r.reshape(2, 2, 2, 2, 2, 2)).reshape(4, 4)
            pair = pair / np.trace(pair).real
            rho = np.einsum("aibi->ab", pair.reshape(2, 2, 2, 2))
        out[i] = rho
    return out


def sync_trajectory(rho0, env, s1_coherent, s2_coherent, gamma, phase1, phase2, n):
    """Two-qubit states ``rho_{s1 s2}[0..n]`` as an array of shape ``(n+1, 4, 4)``.

    ``phase1``/``phase2`` are ``omega*dt`` of each qubit's free evolution.
    """
    rho = np.array(rho0, dtype=complex).reshape(4, 4)
    env = np.array(env, dtype=complex).reshape(2, 2)
    c, s = np.cos(gamma), np.sin(gamma)
    u1 = np.array([np.exp(0.5j * phase1), np.exp(-0.5j * phase1)])
    u2 = np.array([np.exp(0.5j * phase2), np.exp(-0.5j * phase2)])
    ph = np.kron(u1, u2)
    phc = ph.conj()
    out = np.empty((n + 1, 4, 4), dtype=complex)
    out[0] = rho
    for i in range(1, n + 1):
        r = np.kron(rho, env)
        r = _couple(r, _P3_02, c, s, s1_coherent)
        r = _couple(r, _P3_12, c, s, s2_coherent)
        rho = np.einsum("aibi->ab", r.reshape(4, 2, 4, 2))
        rho = ph[:, None] * rho * phc[None, :]
        out[i] = rho
    return out
