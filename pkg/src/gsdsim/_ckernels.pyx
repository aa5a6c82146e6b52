# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the contracts."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, log2, sqrt

cnp.import_array()

cdef double _S = 1.0 / sqrt(2.0)


def propagate_amplitudes(int n, long long x, long long y, double keep,
                         jitter=None, int pi_on=0):
    cdef Py_ssize_t size = 1 << n
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cur = np.zeros(size, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] nxt = np.zeros(size, dtype=np.complex128)
    # indices of nodes with nonzero amplitude on the current / next level
    cdef cnp.ndarray[cnp.intp_t, ndim=1] live = np.zeros(size, dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] live_next = np.zeros(size, dtype=np.intp)
    cdef double[:] jit
    cdef bint has_jitter = jitter is not None
    if has_jitter:
        jit = np.ascontiguousarray(jitter, dtype=np.float64)
    cdef int k, shift
    cdef Py_ssize_t i, j, count, count_next, base
    cdef double sa, sb, phi
    cdef double complex amp, u0, u1, out0, out1
    cdef double complex I = 1j
    cur[0] = 1.0
    live[0] = 0
    count = 1
    for k in range(1, n + 1):
        shift = n - k
        sa = -1.0 if ((x >> shift) & 1) == pi_on else 1.0
        sb = -1.0 if ((y >> shift) & 1) == pi_on else 1.0
        base = (1 << (k - 1)) - 1
        count_next = 0
        for i in range(count):
            j = live[i]
            amp = cur[j]
            cur[j] = 0
            u0 = _S * amp * sa
            u1 = I * _S * amp * sb
            if has_jitter:
                phi = jit[base + j]
                if phi != 0.0:
                    u0 = u0 * (cos(phi) + I * sin(phi))
            u0 = u0 * keep
            u1 = u1 * keep
            out0 = _S * (u0 + I * u1)
            out1 = _S * (I * u0 + u1)
            if out0 != 0:
                nxt[2 * j] = out0
                live_next[count_next] = 2 * j
                count_next += 1
            if out1 != 0:
                nxt[2 * j + 1] = out1
                live_next[count_next] = 2 * j + 1
                count_next += 1
        cur, nxt = nxt, cur
        live, live_next = live_next, live
        count = count_next
    return cur


def conditional_observation_entropy(int n, owner, int agent):
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t mask = size - 1
    cdef const unsigned char[:] own_of = np.ascontiguousarray(owner, dtype=np.uint8)
    cdef long[:] counts = np.zeros(size + 1, dtype=np.int_)
    cdef Py_ssize_t own, other, leaf, i
    cdef double h, p, total = 0.0
    for own in range(size):
        for i in range(size + 1):
            counts[i] = 0
        for other in range(size):
            leaf = mask ^ own ^ other
            if own_of[leaf] == agent:
                counts[leaf] += 1
            else:
                counts[size] += 1
        h = 0.0
        for i in range(size + 1):
            if counts[i]:
                p = <double>counts[i] / size
                h -= p * log2(p)
        total += h
    return total / size


def agent_click_counts(int n, owner):
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t mask = size - 1
    cdef const unsigned char[:] own_of = np.ascontiguousarray(owner, dtype=np.uint8)
    cdef Py_ssize_t x, y
    cdef long long alice = 0, bob = 0
    for x in range(size):
        for y in range(size):
            if own_of[mask ^ x ^ y]:
                bob += 1
            else:
                alice += 1
    return alice, bob
