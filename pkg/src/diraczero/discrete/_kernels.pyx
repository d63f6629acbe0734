# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled stencil kernels; same contract as ``_kernels_py``."""
import numpy as np
from libc.math cimport sqrt


def apply_dirac(psi, weight, double h, double ky, double mass, double kv, bint periodic):
    cdef const double complex[:, ::1] p = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef const double[::1] w = np.ascontiguousarray(weight, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    out = np.zeros((n, 2), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double inv2h = 0.5 / h
    cdef double complex I = 1j
    cdef double complex iky = I * ky
    cdef double mpk = mass + kv
    cdef double kmm = kv - mass
    cdef Py_ssize_t i, ip, im, start, stop
    cdef double complex d0, d1, p0, p1
    if periodic:
        start, stop = 0, n
    else:
        start, stop = 1, n - 1
    with nogil:
        for i in range(start, stop):
            ip = i + 1
            im = i - 1
            if ip == n:
                ip = 0
            if im < 0:
                im = n - 1
            d0 = (p[ip, 0] - p[im, 0]) * inv2h
            d1 = (p[ip, 1] - p[im, 1]) * inv2h
            p0 = p[i, 0]
            p1 = p[i, 1]
            o[i, 0] = -I * d1 + w[i] * (mpk * p0 + iky * p1)
            o[i, 1] = -I * d0 + w[i] * (-iky * p0 + kmm * p1)
    return out


def row_norms(v):
    cdef const double complex[:, ::1] a = np.ascontiguousarray(v, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0], i
    res = np.empty(n, dtype=np.float64)
    cdef double[::1] r = res
    with nogil:
        for i in range(n):
            r[i] = sqrt(a[i, 0].real * a[i, 0].real + a[i, 0].imag * a[i, 0].imag
                        + a[i, 1].real * a[i, 1].real + a[i, 1].imag * a[i, 1].imag)
    return res
