# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row-echelon rank over a prime field (p < 2**63)."""

from libc.stdint cimport uint64_t

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t sc_mulmod(uint64_t a, uint64_t b, uint64_t p) {
        return (uint64_t)(((unsigned __int128)a * b) % p);
    }
    """
    uint64_t sc_mulmod(uint64_t a, uint64_t b, uint64_t p) nogil


cdef inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) noexcept nogil:
    return sc_mulmod(a, b, p)


cdef uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) noexcept nogil:
    cdef uint64_t r = 1
    a %= p
    while e:
        if e & 1:
            r = mulmod(r, a, p)
        a = mulmod(a, a, p)
        e >>= 1
    return r


cdef Py_ssize_t _rank(uint64_t[:, ::1] m, uint64_t p) noexcept nogil:
    cdef Py_ssize_t nrows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef uint64_t inv, f, t, s
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                t = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = t
        inv = powmod(m[r, c], p - 2, p)
        for j in range(c, ncols):
            m[r, j] = mulmod(m[r, j], inv, p)
        for i in range(r + 1, nrows):
            f = m[i, c]
            if f == 0:
                continue
            for j in range(c, ncols):
                s = mulmod(f, m[r, j], p)
                t = m[i, j]
                m[i, j] = t - s if t >= s else t + (p - s)
        r += 1
    return r


def rank_mod_p(uint64_t[:, ::1] m not None, uint64_t p):
    """Rank of ``m`` modulo ``p``. ``m`` is overwritten; entries must be reduced."""
    cdef Py_ssize_t r
    with nogil:
        r = _rank(m, p)
    return r
