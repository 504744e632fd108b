"""Dense complex linear algebra for matrices and vectors of dimension <= 6.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic Jacobi iteration; it runs in the compiled ``_jacobi`` extension when
that is importable and falls back to ``_jacobi_py`` otherwise. Set
``SEPCANON_PURE_PYTHON=1`` before import to force the fallback.
"""
from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

MAX_DIM = 6

RANK_TOL = 1e-9
PSD_TOL = 1e-9
RECON_TOL = 1e-8
HERMITIAN_TOL = 1e-10
COEF_ZERO_TOL = 1e-12
DISCRIMINANT_TOL = 1e-10


def _load_backend():
    if os.environ.get("SEPCANON_PURE_PYTHON") != "1":
        try:
            from ._jacobi import jacobi_eigh

            return "cython", jacobi_eigh
        except ImportError:
            pass
    from ._jacobi_py import jacobi_eigh

    return "python", jacobi_eigh


BACKEND, _jacobi_eigh = _load_backend()


def use_backend(name: str) -> None:
    """Switch the eigensolver kernel at runtime (``"cython"`` or ``"python"``)."""
    global BACKEND, _jacobi_eigh
    if name == "cython":
        from ._jacobi import jacobi_eigh
    elif name == "python":
        from ._jacobi_py import jacobi_eigh
    else:
        raise InvalidInput(f"unknown backend {name!r}")
    BACKEND, _jacobi_eigh = name, jacobi_eigh


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _jacobi  # noqa: F401
    except ImportError:
        return names
    return ["cython"] + names


def as_cmatrix(m) -> np.ndarray:
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or not (1 <= arr.shape[0] <= MAX_DIM and 1 <= arr.shape[1] <= MAX_DIM):
        raise InvalidInput(f"matrix shape {arr.shape} outside 1..{MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("matrix has non-finite entries")
    return arr


def as_cvector(v) -> np.ndarray:
    arr = np.array(v, dtype=complex).reshape(-1)
    if not 1 <= arr.size <= MAX_DIM:
        raise InvalidInput(f"vector length {arr.size} outside 1..{MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("vector has non-finite entries")
    return arr


def max_abs(m) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def kron(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim == 1 and b.ndim == 1:
        if a.size * b.size > MAX_DIM:
            raise InvalidInput("kron result exceeds dimension 6")
        return np.kron(a, b)
    a2 = np.atleast_2d(a)
    b2 = np.atleast_2d(b)
    if a2.shape[0] * b2.shape[0] > MAX_DIM or a2.shape[1] * b2.shape[1] > MAX_DIM:
        raise InvalidInput("kron result exceeds dimension 6")
    return np.kron(a2, b2)


def det2(m) -> complex:
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise InvalidInput("det2 needs a 2x2 matrix")
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def outer(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def normalize(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0.0:
        raise InvalidInput("cannot normalize the zero vector")
    return v / n


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude component is real positive.

    Near-ties in magnitude resolve to the lowest index.
    """
    mags = np.abs(v)
    top = mags.max()
    if top == 0.0:
        return v
    k = int(np.argmax(mags >= top - 1e-12 * top))
    return v * (abs(v[k]) / v[k])


def fix_phase_first(v: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Rotate the global phase so the first nonzero component is real nonnegative."""
    for x in v:
        if abs(x) > tol:
            return v * (abs(x) / x)
    return v


@dataclass(frozen=True)
class EigResult:
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def __iter__(self):
        return iter((self.values, self.vectors))


def herm_eig(m) -> EigResult:
    """Full spectrum of a Hermitian matrix, eigenvalues ascending.

    Each eigenvector is phase-fixed (largest component real positive); ties in
    eigenvalue are ordered by the phase-fixed vectors, lexicographically
    descending over ``(re, im)`` components.
    """
    a = as_cmatrix(m)
    n = a.shape[0]
    if a.shape[1] != n:
        raise InvalidInput("herm_eig needs a square matrix")
    scale = max(1.0, max_abs(a))
    if max_abs(a - dagger(a)) > HERMITIAN_TOL * scale:
        raise InvalidInput("matrix is not Hermitian within tolerance")
    a = 0.5 * (a + dagger(a))

    w, v, sweeps = _jacobi_eigh(a)
    v = np.asarray(v, dtype=complex)
    # column-wise fix_phase
    mags = np.abs(v)
    top = mags.max(axis=0)
    rows = np.argmax(mags >= top - 1e-12 * top, axis=0)
    pivot = v[rows, np.arange(n)]
    v = v * (np.abs(pivot) / pivot)
    vecs = v.T
    tie = 1e-12 * scale

    def key(k):
        comps = []
        for x in vecs[k]:
            comps.extend((-round(x.real, 12), -round(x.imag, 12)))
        return comps

    order = sorted(range(n), key=lambda k: w[k])
    out = []
    i = 0
    while i < n:
        j = i + 1
        while j < n and w[order[j]] - w[order[i]] <= tie:
            j += 1
        out.extend(sorted(order[i:j], key=key) if j - i > 1 else order[i:j])
        i = j
    return EigResult(np.asarray(w, dtype=float)[out], v[:, out], sweeps)


def rank_threshold(values: np.ndarray, rank_tol: float) -> float:
    return rank_tol * max(1.0, float(values[-1]))


def rank_with_tol(m, rank_tol: float = RANK_TOL) -> int:
    if rank_tol <= 0:
        raise InvalidInput("rank_tol must be positive")
    values = herm_eig(m).values
    return int(np.sum(values > rank_threshold(values, rank_tol)))


def range_and_kernel(m, rank_tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (as columns) for the range and kernel of a PSD matrix."""
    eig = herm_eig(m)
    keep = eig.values > rank_threshold(eig.values, rank_tol)
    return eig.vectors[:, keep], eig.vectors[:, ~keep]


def pinv_psd(m, rank_tol: float = RANK_TOL) -> np.ndarray:
    eig = herm_eig(m)
    cut = rank_threshold(eig.values, rank_tol)
    inv = np.array([1.0 / x if x > cut else 0.0 for x in eig.values])
    return (eig.vectors * inv) @ dagger(eig.vectors)


def svd2(m) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Singular value decomposition ``m = U diag(s1, s2) V^dagger`` of a 2x2 matrix.

    ``s2`` is taken as ``|det m| / s1``, which keeps it accurate near zero.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise InvalidInput("svd2 needs a 2x2 matrix")
    eig = herm_eig(m @ dagger(m))
    s1 = float(np.sqrt(max(eig.values[1], 0.0)))
    if s1 == 0.0:
        return 0.0, 0.0, np.eye(2, dtype=complex), np.eye(2, dtype=complex)
    s2 = min(abs(det2(m)) / s1, s1)

    u1 = fix_phase_first(eig.vectors[:, 1])
    u2 = fix_phase_first(np.array([-u1[1].conjugate(), u1[0].conjugate()]))
    v1 = dagger(m) @ u1 / s1
    v1 = v1 / np.linalg.norm(v1)
    v2 = np.array([-v1[1].conjugate(), v1[0].conjugate()])
    z = u2.conj() @ m @ v2
    if abs(z) > 0.0:
        v2 = v2 * (z.conjugate() / abs(z))
    return s1, s2, np.column_stack([u1, u2]), np.column_stack([v1, v2])


class RootKind(enum.Enum):
    TWO_ROOTS = "TwoRoots"
    DOUBLE_ROOT = "OneDoubleRoot"
    ALL = "AllSolutions"


@dataclass(frozen=True)
class RootSet:
    """Projective roots ``[alpha:beta]``, each scaled so its larger component is 1."""

    kind: RootKind
    roots: tuple[tuple[complex, complex], ...] = ()


def _projective(alpha: complex, beta: complex) -> tuple[complex, complex]:
    alpha, beta = complex(alpha), complex(beta)
    if abs(alpha) >= abs(beta):
        return 1.0 + 0j, beta / alpha
    return alpha / beta, 1.0 + 0j


def quadratic_roots(a: complex, b: complex, c: complex, all_tol: float = COEF_ZERO_TOL) -> RootSet:
    """Solve ``a*alpha**2 + b*alpha*beta + c*beta**2 = 0`` projectively.

    ``all_tol`` is the absolute magnitude below which all three coefficients
    count as zero and every ``[alpha:beta]`` is a solution.
    """
    a, b, c = complex(a), complex(b), complex(c)
    m = max(abs(a), abs(b), abs(c))
    if m <= all_tol:
        return RootSet(RootKind.ALL)
    zero = COEF_ZERO_TOL * m
    if abs(a) <= zero:
        # beta = 0 is a root; the rest is beta * (b*alpha + c*beta)
        if abs(b) <= zero:
            return RootSet(RootKind.DOUBLE_ROOT, (_projective(1, 0),))
        return RootSet(RootKind.TWO_ROOTS, (_projective(1, 0), _projective(-c, b)))
    disc = b * b - 4 * a * c
    # relative to the terms it is built from, so a tiny a with b = 0 is not
    # mistaken for a double root
    if abs(disc) <= DISCRIMINANT_TOL * max(abs(b) ** 2, 4 * abs(a * c)):
        return RootSet(RootKind.DOUBLE_ROOT, (_projective(-b, 2 * a),))
    sq = np.sqrt(disc)
    q = -0.5 * (b + sq) if abs(b + sq) >= abs(b - sq) else -0.5 * (b - sq)
    return RootSet(RootKind.TWO_ROOTS, (_projective(q, a), _projective(c, q)))
