"""Pure-Python cyclic Jacobi eigensolver for small complex Hermitian matrices.

Mirror of ``_jacobi.pyx``; used when the compiled extension is unavailable
or when ``SEPCANON_PURE_PYTHON=1`` is set.
"""
import math

import numpy as np

MAX_SWEEPS = 100
OFF_TOL = 1e-14


def jacobi_eigh(a):
    """Diagonalize the Hermitian matrix ``a`` in place on a copy.

    Returns ``(w, v, sweeps)`` with unsorted real eigenvalues ``w`` and the
    unitary ``v`` whose columns are the matching eigenvectors.
    """
    arr = np.asarray(a, dtype=complex)
    n = arr.shape[0]
    A = [[complex(arr[i, j]) for j in range(n)] for i in range(n)]
    V = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]

    fro = math.sqrt(sum(abs(x) ** 2 for row in A for x in row))
    sweeps = 0
    while sweeps < MAX_SWEEPS:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += abs(A[i][j]) ** 2
        if math.sqrt(off) <= OFF_TOL * fro:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                ph = apq / mag
                app = A[p][p].real
                aqq = A[q][q].real
                theta = (aqq - app) / (2.0 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phc = ph.conjugate()
                # A <- A U, V <- V U with U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                for k in range(n):
                    akp = A[k][p]
                    akq = A[k][q]
                    A[k][p] = c * akp - s * phc * akq
                    A[k][q] = s * akp + c * phc * akq
                    vkp = V[k][p]
                    vkq = V[k][q]
                    V[k][p] = c * vkp - s * phc * vkq
                    V[k][q] = s * vkp + c * phc * vkq
                # A <- U^dagger A
                for k in range(n):
                    apk = A[p][k]
                    aqk = A[q][k]
                    A[p][k] = c * apk - s * ph * aqk
                    A[q][k] = s * apk + c * ph * aqk
                A[p][p] = complex(app - t * mag)
                A[q][q] = complex(aqq + t * mag)
                A[p][q] = 0j
                A[q][p] = 0j

    w = np.array([A[i][i].real for i in range(n)])
    v = np.array(V, dtype=complex)
    return w, v, sweeps
