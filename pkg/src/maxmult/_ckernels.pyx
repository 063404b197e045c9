# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled loops for the pair-sum norms.

Arrays are always 3-d (lower dimensions pad trailing axes with length 1) and
offsets are integer triples. Signatures match :mod:`maxmult._pykernels`.
"""

import numpy as np


def hoelder_max(double[:, :, ::1] re, double[:, :, ::1] im,
                long[:, ::1] offs, double[:] denom, Py_ssize_t stride):
    """Max of ``|g(x) - g(x+o)| / denom[o]`` over ``x`` on the stride sublattice."""
    cdef Py_ssize_t n0 = re.shape[0], n1 = re.shape[1], n2 = re.shape[2]
    cdef Py_ssize_t K = offs.shape[0]
    cdef Py_ssize_t i, j, k, ii, jj, kk, q, a, b, c
    cdef Py_ssize_t m0 = (n0 + stride - 1) // stride
    cdef Py_ssize_t m1 = (n1 + stride - 1) // stride
    cdef Py_ssize_t m2 = (n2 + stride - 1) // stride
    cdef double dr, di, v, best = 0.0
    with nogil:
        for ii in range(m0):
            i = ii * stride
            for jj in range(m1):
                j = jj * stride
                for kk in range(m2):
                    k = kk * stride
                    for q in range(K):
                        a = i + offs[q, 0]
                        b = j + offs[q, 1]
                        c = k + offs[q, 2]
                        if a < 0 or a >= n0 or b < 0 or b >= n1 or c < 0 or c >= n2:
                            continue
                        dr = re[i, j, k] - re[a, b, c]
                        di = im[i, j, k] - im[a, b, c]
                        v = (dr * dr + di * di) / (denom[q] * denom[q])
                        if v > best:
                            best = v
    return best ** 0.5


def frac_double_sum(double[:, :, ::1] re, double[:, :, ::1] im,
                    double[:, :, ::1] xw, double[:, :, ::1] xr,
                    long[:, ::1] offs, double[:] olen, double[:] kern):
    """``sum_x xw(x) sum_{o: olen < xr(x)/2} |m(x) - m(x+o)|^2 kern[o]``.

    Offsets must be sorted by ``olen``; points outside the box count as zero.
    """
    cdef Py_ssize_t n0 = re.shape[0], n1 = re.shape[1], n2 = re.shape[2]
    cdef Py_ssize_t K = offs.shape[0]
    cdef Py_ssize_t i, j, k, q, a, b, c
    cdef double half, acc, total = 0.0, dr, di, yr, yi
    with nogil:
        for i in range(n0):
            for j in range(n1):
                for k in range(n2):
                    if xw[i, j, k] == 0.0:
                        continue
                    half = 0.5 * xr[i, j, k]
                    acc = 0.0
                    for q in range(K):
                        if olen[q] >= half:
                            break
                        a = i + offs[q, 0]
                        b = j + offs[q, 1]
                        c = k + offs[q, 2]
                        if a < 0 or a >= n0 or b < 0 or b >= n1 or c < 0 or c >= n2:
                            yr = 0.0
                            yi = 0.0
                        else:
                            yr = re[a, b, c]
                            yi = im[a, b, c]
                        dr = re[i, j, k] - yr
                        di = im[i, j, k] - yi
                        acc += (dr * dr + di * di) * kern[q]
                    total += xw[i, j, k] * acc
    return total
