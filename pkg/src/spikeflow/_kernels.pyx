# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Trajectory kernels, compiled edition.

Scalar per-unit walks consuming the same counter-based streams as the
numpy fallback in _kernels_py; outputs are bit-identical by contract.
"""

import numpy as np

from libc.stdint cimport uint64_t, int64_t

from ._rng import GOLDEN, MASK64

BACKEND_NAME = "cython"

cdef uint64_t _GOLDEN = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t _MIX_A = <uint64_t>0xBF58476D1CE4E5B9
cdef uint64_t _MIX_B = <uint64_t>0x94D049BB133111EB


cdef inline uint64_t _mix64(uint64_t z) noexcept:
    z = (z ^ (z >> 30)) * _MIX_A
    z = (z ^ (z >> 27)) * _MIX_B
    return z ^ (z >> 31)


cdef inline uint64_t _draw(uint64_t key, uint64_t *counter) noexcept:
    counter[0] += 1
    return _mix64(key + counter[0] * _GOLDEN)


cdef inline uint64_t _randbelow(uint64_t key, uint64_t *counter, uint64_t bound) noexcept:
    # bound 1 consumes no draw, same as Stream.randbelow
    if bound == 1:
        return 0
    cdef uint64_t mask = bound - 1
    mask |= mask >> 1
    mask |= mask >> 2
    mask |= mask >> 4
    mask |= mask >> 8
    mask |= mask >> 16
    mask |= mask >> 32
    cdef uint64_t r
    while True:
        r = _draw(key, counter) & mask
        if r < bound:
            return r


def unit_paths(master, replicate, lo, hi, n, stay):
    """Sample trajectories for units lo..hi-1; see _kernels_py.unit_paths."""
    cdef int64_t count = hi - lo
    if count <= 0:
        return np.empty(0, dtype=np.int64), np.zeros(1, dtype=np.int64)

    # unit-independent prefix of the key chain, done in exact Python ints
    cdef uint64_t base = <uint64_t>(
        (_mix_py((_mix_py((master + GOLDEN) & MASK64) + (replicate & MASK64)) & MASK64))
    )
    cdef uint64_t ulo = <uint64_t>lo
    cdef uint64_t nn = <uint64_t>n
    cdef bint is_stay = 1 if stay else 0

    cdef int64_t cap = 16 + 8 * count
    buf = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] vb = buf
    offsets = np.zeros(count + 1, dtype=np.int64)
    cdef int64_t[::1] ob = offsets

    cdef int64_t pos = 0
    cdef int64_t u
    cdef uint64_t key, counter, t, v
    for u in range(count):
        key = _mix64(base + ulo + <uint64_t>u)
        counter = 0
        v = _randbelow(key, &counter, nn) + 1
        if pos == cap:
            cap *= 2
            buf = _grow(buf, cap)
            vb = buf
        vb[pos] = <int64_t>v
        pos += 1
        while v > 1:
            t = _randbelow(key, &counter, v) + 1
            if t == v:
                if is_stay:
                    continue
                break
            v = t
            if pos == cap:
                cap *= 2
                buf = _grow(buf, cap)
                vb = buf
            vb[pos] = <int64_t>v
            pos += 1
        ob[u + 1] = pos
    return buf[:pos].copy(), offsets


def _mix_py(z):
    # Python-int mirror of _mix64 for values that may not fit int64 coercion
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _grow(arr, newcap):
    out = np.empty(newcap, dtype=np.int64)
    out[: arr.shape[0]] = arr
    return out
