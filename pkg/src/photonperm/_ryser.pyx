# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled Gray-code Ryser kernel for the matrix permanent.

Runs in O(2^n * n): each Gray-code step toggles one column in the running
row sums, so only the product over rows is recomputed per subset.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def permanent_gray(a):
    """Permanent of a square complex matrix via Ryser's formula.

    Accepts anything convertible to a C-contiguous complex128 array.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] mat = \
        np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t n = mat.shape[0]
    if mat.shape[1] != n:
        raise ValueError("permanent requires a square matrix")
    if n == 0:
        return 1.0 + 0.0j
    if n > 30:
        raise ValueError("matrix order %d exceeds the Ryser limit of 30" % n)

    cdef double complex[:, ::1] av = mat
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] row_arr = \
        np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] row = row_arr
    cdef double complex total = 0
    cdef double complex prod
    cdef unsigned long long k, gray, prev_gray = 0, diff
    cdef unsigned long long limit = (<unsigned long long> 1) << n
    cdef Py_ssize_t i, j
    cdef int setbits = 0

    for k in range(1, limit):
        gray = k ^ (k >> 1)
        diff = gray ^ prev_gray
        j = 0
        while not (diff >> j) & 1:
            j += 1
        if gray & diff:
            setbits += 1
            for i in range(n):
                row[i] = row[i] + av[i, j]
        else:
            setbits -= 1
            for i in range(n):
                row[i] = row[i] - av[i, j]
        prod = 1
        for i in range(n):
            prod = prod * row[i]
        # term sign is (-1)^(n - |S|)
        if (n - setbits) & 1:
            total = total - prod
        else:
            total = total + prod
        prev_gray = gray
    return complex(total)
