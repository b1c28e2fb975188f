# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: detector sliding statistics and nearest-point labels.

Semantics match tfi._kernels._fallback exactly; parity is enforced by tests.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def detector_stats(y, int d, int energy_window, int corr_window):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] arr = np.ascontiguousarray(y, dtype=np.complex128)
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ratio = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] energy = np.zeros(n, dtype=np.float64)

    cdef double complex acc = 0
    cdef double e_del = 0
    cdef double e_cur = 0
    cdef double eacc = 0
    cdef double p, denom
    cdef Py_ssize_t i, j
    cdef double complex v

    for i in range(n):
        # running correlation sum over the trailing corr_window
        if i >= d:
            acc = acc + arr[i] * arr[i - d].conjugate()
        j = i - corr_window
        if j >= d:
            acc = acc - arr[j] * arr[j - d].conjugate()
        # running current- and delayed-window energies over corr_window
        p = arr[i].real * arr[i].real + arr[i].imag * arr[i].imag
        e_cur = e_cur + p
        if j >= 0:
            p = arr[j].real * arr[j].real + arr[j].imag * arr[j].imag
            e_cur = e_cur - p
        if i >= d:
            p = arr[i - d].real * arr[i - d].real + arr[i - d].imag * arr[i - d].imag
            e_del = e_del + p
        if j >= d:
            p = arr[j - d].real * arr[j - d].real + arr[j - d].imag * arr[j - d].imag
            e_del = e_del - p
        # running energy over the trailing energy_window
        p = arr[i].real * arr[i].real + arr[i].imag * arr[i].imag
        eacc = eacc + p
        j = i - energy_window
        if j >= 0:
            p = arr[j].real * arr[j].real + arr[j].imag * arr[j].imag
            eacc = eacc - p
        energy[i] = eacc
        denom = e_del if e_del > e_cur else e_cur
        if denom > 0:
            v = acc
            ratio[i] = (v.real * v.real + v.imag * v.imag) ** 0.5 / denom
    return ratio, energy


def nearest_labels(samples, points):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] s = np.ascontiguousarray(samples, dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] p = np.ascontiguousarray(points, dtype=np.complex128).ravel()
    cdef Py_ssize_t n = s.shape[0]
    cdef Py_ssize_t m = p.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i, k, best
    cdef double dr, di, dist, bestd
    for i in range(n):
        best = 0
        bestd = 1e300
        for k in range(m):
            dr = s[i].real - p[k].real
            di = s[i].imag - p[k].imag
            dist = dr * dr + di * di
            if dist < bestd:
                bestd = dist
                best = k
        out[i] = best
    return out
