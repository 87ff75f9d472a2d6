# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled trajectory kernels; see swapcm._fallback for the reference semantics."""
import numpy as np

from libc.math cimport cos, sin

cdef int P2_01[4]
cdef int P3_01[8]
cdef int P3_12[8]
cdef int P3_02[8]
P2_01[:] = [0, 2, 1, 3]
P3_01[:] = [0, 1, 4, 5, 2, 3, 6, 7]
P3_12[:] = [0, 2, 1, 3, 4, 6, 5, 7]
P3_02[:] = [0, 4, 2, 6, 1, 5, 3, 7]


cdef inline void couple(const double complex* r, double complex* out, int d, const int* perm,
                        double c, double s, bint coherent) noexcept nogil:
    cdef int i, j, pi, pj
    cdef double cc = c * c
    cdef double ss = s * s
    cdef double complex ics = (1j * c) * s
    cdef double complex v
    for i in range(d):
        pi = perm[i]
        for j in range(d):
            pj = perm[j]
            v = cc * r[i * d + j] + ss * r[pi * d + pj]
            if coherent:
                v = v + ics * (r[pi * d + j] - r[i * d + pj])
            out[i * d + j] = v


cdef inline void kron(const double complex* a, int da, const double complex* b, int db,
                      double complex* out) noexcept nogil:
    cdef int i, j, k, l, d = da * db
    for i in range(da):
        for k in range(db):
            for j in range(da):
                for l in range(db):
                    out[(i * db + k) * d + j * db + l] = a[i * da + j] * b[k * db + l]


cdef inline void trace_tail(const double complex* r, int dkeep, int dtrace, double complex* out) noexcept nogil:
    # keep the leading factor of dimension dkeep, trace the trailing factor
    cdef int a, b, m, d = dkeep * dtrace
    cdef double complex acc
    for a in range(dkeep):
        for b in range(dkeep):
            acc = 0
            for m in range(dtrace):
                acc = acc + r[(a * dtrace + m) * d + b * dtrace + m]
            out[a * dkeep + b] = acc


cdef inline void trace_head(const double complex* r, int dtrace, int dkeep, double complex* out) noexcept nogil:
    # trace the leading factor of dimension dtrace, keep the trailing factor
    cdef int a, b, m, d = dkeep * dtrace
    cdef double complex acc
    for a in range(dkeep):
        for b in range(dkeep):
            acc = 0
            for m in range(dtrace):
                acc = acc + r[(m * dkeep + a) * d + m * dkeep + b]
            out[a * dkeep + b] = acc


cdef inline void trace_middle(const double complex* r, double complex* out) noexcept nogil:
    # 3-qubit register: keep qubits 0 and 2, trace qubit 1
    cdef int a, c, b, f, m
    cdef double complex acc
    for a in range(2):
        for c in range(2):
            for b in range(2):
                for f in range(2):
                    acc = 0
                    for m in range(2):
                        acc = acc + r[(a * 4 + m * 2 + c) * 8 + b * 4 + m * 2 + f]
                    out[(a * 2 + c) * 4 + b * 2 + f] = acc


cdef inline void normalize(double complex* r, int d) noexcept nogil:
    cdef int i
    cdef double tr = 0.0
    for i in range(d):
        tr = tr + r[i * d + i].real
    for i in range(d * d):
        r[i] = r[i] / tr


def single_trajectory(rho0, env, bint se_coherent, double gamma_se, bint ee_coherent,
                      double gamma_ee, Py_ssize_t n, int mode):
    if mode < 0 or mode > 2:
        raise ValueError(f"unknown carryover mode {mode}")
    cdef const double complex[:, ::1] r0 = np.ascontiguousarray(np.asarray(rho0, dtype=complex).reshape(2, 2))
    cdef const double complex[:, ::1] ev = np.ascontiguousarray(np.asarray(env, dtype=complex).reshape(2, 2))
    result = np.empty((n + 1, 2, 2), dtype=complex)
    cdef double complex[:, :, ::1] out = result
    cdef double complex rho[4]
    cdef double complex envb[4]
    cdef double complex carry[4]
    cdef double complex pair[16]
    cdef double complex tmp[16]
    cdef double complex a[64]
    cdef double complex b[64]
    cdef double cse = cos(gamma_se), sse = sin(gamma_se)
    cdef double cee = cos(gamma_ee), see = sin(gamma_ee)
    cdef Py_ssize_t i
    cdef int k
    for k in range(4):
        rho[k] = r0[k // 2, k % 2]
        envb[k] = ev[k // 2, k % 2]
        carry[k] = envb[k]
        out[0, k // 2, k % 2] = rho[k]
    kron(rho, 2, envb, 2, pair)
    with nogil:
        for i in range(1, n + 1):
            if mode == 0:
                kron(rho, 2, envb, 2, a)
                couple(a, b, 4, P2_01, cse, sse, se_coherent)
                trace_tail(b, 2, 2, rho)
            else:
                if mode == 1:
                    kron(rho, 2, carry, 2, tmp)
                    kron(tmp, 4, envb, 2, a)
                else:
                    kron(pair, 4, envb, 2, a)
                couple(a, b, 8, P3_01, cse, sse, se_coherent)
                couple(b, a, 8, P3_12, cee, see, ee_coherent)
                if mode == 1:
                    trace_tail(a, 2, 4, rho)
                    trace_head(a, 4, 2, carry)
                    normalize(rho, 2)
                    normalize(carry, 2)
                else:
                    trace_middle(a, pair)
                    normalize(pair, 4)
                    trace_tail(pair, 2, 2, rho)
            for k in range(4):
                out[i, k // 2, k % 2] = rho[k]
    return result


def sync_trajectory(rho0, env, bint s1_coherent, bint s2_coherent, double gamma,
                    double phase1, double phase2, Py_ssize_t n):
    cdef const double complex[:, ::1] r0 = np.ascontiguousarray(np.asarray(rho0, dtype=complex).reshape(4, 4))
    cdef const double complex[:, ::1] ev = np.ascontiguousarray(np.asarray(env, dtype=complex).reshape(2, 2))
    result = np.empty((n + 1, 4, 4), dtype=complex)
    cdef double complex[:, :, ::1] out = result
    u1 = np.array([np.exp(0.5j * phase1), np.exp(-0.5j * phase1)])
    u2 = np.array([np.exp(0.5j * phase2), np.exp(-0.5j * phase2)])
    cdef double complex[::1] phv = np.kron(u1, u2)
    cdef double complex ph[4]
    cdef double complex phc[4]
    cdef double complex rho[16]
    cdef double complex envb[4]
    cdef double complex a[64]
    cdef double complex b[64]
    cdef double c = cos(gamma), s = sin(gamma)
    cdef Py_ssize_t i
    cdef int k, p, q
    for k in range(4):
        ph[k] = phv[k]
        phc[k] = phv[k].conjugate()
        envb[k] = ev[k // 2, k % 2]
    for k in range(16):
        rho[k] = r0[k // 4, k % 4]
        out[0, k // 4, k % 4] = rho[k]
    with nogil:
        for i in range(1, n + 1):
            kron(rho, 4, envb, 2, a)
            couple(a, b, 8, P3_02, c, s, s1_coherent)
            couple(b, a, 8, P3_12, c, s, s2_coherent)
            trace_tail(a, 4, 2, rho)
            for p in range(4):
                for q in range(4):
                    rho[p * 4 + q] = ph[p] * rho[p * 4 + q] * phc[q]
                    out[i, p, q] = rho[p * 4 + q]
    return result
