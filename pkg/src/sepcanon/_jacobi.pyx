# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi eigensolver; same algorithm as ``_jacobi_py``."""
import numpy as np

from libc.math cimport sqrt, hypot

cdef int MAX_SWEEPS = 100
cdef double OFF_TOL = 1e-14


def jacobi_eigh(a):
    cdef double complex[:, ::1] A = np.array(a, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = A.shape[0]
    V_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] V = V_arr
    cdef Py_ssize_t i, j, k, p, q
    cdef double fro = 0.0, off, mag, app, aqq, theta, t, c, s
    cdef double complex apq, ph, phc, akp, akq, vkp, vkq, apk, aqk
    cdef int sweeps = 0

    for i in range(n):
        for j in range(n):
            fro += A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag
    fro = sqrt(fro)

    while sweeps < MAX_SWEEPS:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag
        if sqrt(off) <= OFF_TOL * fro:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = hypot(apq.real, apq.imag)
                if mag == 0.0:
                    continue
                ph = apq / mag
                phc = ph.real - 1j * ph.imag
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * phc * akq
                    A[k, q] = s * akp + c * phc * akq
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * phc * vkq
                    V[k, q] = s * vkp + c * phc * vkq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * ph * aqk
                    A[q, k] = s * apk + c * ph * aqk
                A[p, p] = app - t * mag
                A[q, q] = aqq + t * mag
                A[p, q] = 0
                A[q, p] = 0

    w = np.empty(n)
    for i in range(n):
        w[i] = A[i, i].real
    return w, V_arr, sweeps
