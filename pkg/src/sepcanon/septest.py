"""Partial transposition and the PPT separability verdict."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import matcore as mc
from .errors import InconsistentState, UnsupportedDimension
from .qstate import DEFAULT_TOL, DensityMatrix, ToleranceConfig, _as_state


class Verdict(enum.Enum):
    SEPARABLE = "Separable"
    INSEPARABLE = "Inseparable"
    PPT_INCONCLUSIVE = "PptInconclusive"


@dataclass(frozen=True)
class SeparabilityVerdict:
    ppt_holds: bool
    verdict: Verdict
    min_pt_eigenvalue: float
    negative_count: int
    negative_eigenvector: Optional[np.ndarray]
    pt_spectrum: np.ndarray
    boundary: bool = False


def _pt(m: np.ndarray, dims, axes) -> np.ndarray:
    a, b = dims
    return m.reshape(a, b, a, b).transpose(axes).reshape(a * b, a * b)


def partial_transpose_b(rho) -> np.ndarray:
    """Entry ``(i mu, j nu)`` of the result is entry ``(i nu, j mu)`` of rho."""
    rho = _as_state(rho)
    return _pt(rho.matrix, rho.dims, (0, 3, 2, 1))


def partial_transpose_a(rho) -> np.ndarray:
    rho = _as_state(rho)
    return _pt(rho.matrix, rho.dims, (2, 1, 0, 3))


def pt_matrix(m: np.ndarray, dims=(2, 2)) -> np.ndarray:
    """B-side partial transpose of a raw (not necessarily valid) matrix."""
    return _pt(np.asarray(m, dtype=complex), dims, (0, 3, 2, 1))


def ppt_check(rho, tol: ToleranceConfig = DEFAULT_TOL) -> SeparabilityVerdict:
    rho = _as_state(rho)
    if rho.dims not in {(2, 2), (2, 3)}:
        raise UnsupportedDimension(f"PPT verdict undefined for dims {rho.dims}")
    eig = mc.herm_eig(partial_transpose_b(rho))
    lam_min = float(eig.values[0])
    negative = int(np.sum(eig.values < -tol.psd_tol))
    ppt = negative == 0
    if ppt:
        verdict = Verdict.SEPARABLE if rho.dim <= 6 else Verdict.PPT_INCONCLUSIVE
    else:
        verdict = Verdict.INSEPARABLE
    return SeparabilityVerdict(
        ppt_holds=ppt,
        verdict=verdict,
        min_pt_eigenvalue=lam_min,
        negative_count=negative,
        negative_eigenvector=eig.vectors[:, 0].copy() if negative else None,
        pt_spectrum=eig.values,
        boundary=ppt and lam_min < 0.0,
    )


_PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def local_time_reversal(rho) -> np.ndarray:
    """Apply complex conjugation to subsystem B through the Pauli product expansion.

    ``rho = sum r_kl s_k (x) s_l`` with real ``r_kl``; conjugation maps each
    ``s_l`` to its complex conjugate, which only flips the sign of ``s_y``.
    """
    rho = _as_state(rho)
    if rho.dims != (2, 2):
        raise UnsupportedDimension("local time reversal is implemented for 2x2 systems only")
    out = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        for l in range(4):
            basis = np.kron(_PAULI[k], _PAULI[l])
            r = np.trace(rho.matrix @ basis).real / 4.0
            out += r * np.kron(_PAULI[k], _PAULI[l].conj())
    return out


def negative_pt_spectrum(rho, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[int, float, Optional[np.ndarray]]:
    """Count of negative PT eigenvalues, the smallest one, and its eigenvector."""
    rho = _as_state(rho)
    if rho.dims != (2, 2):
        raise UnsupportedDimension("negative PT spectrum analysis is for 2x2 systems")
    eig = mc.herm_eig(partial_transpose_b(rho))
    count = int(np.sum(eig.values < -tol.psd_tol))
    if count >= 2:
        raise InconsistentState(
            f"{count} negative partial-transpose eigenvalues {eig.values[:count]}; a valid 2x2 state has at most one"
        )
    vec = eig.vectors[:, 0].copy() if count == 1 else None
    return count, float(eig.values[0]), vec
