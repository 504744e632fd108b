"""Density matrices, product vectors and the standard states built from them.

Basis ordering everywhere: ``|i>_a (x) |mu>_b`` sits at flat index
``i * dim_b + mu``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import matcore as mc
from .errors import InvalidInput, NotHermitian, NotPositive, TraceNotOne, UnsupportedDimension

SUPPORTED_DIMS = {(2, 2), (2, 3)}


@dataclass(frozen=True)
class ToleranceConfig:
    psd_tol: float = mc.PSD_TOL
    rank_tol: float = mc.RANK_TOL
    recon_tol: float = mc.RECON_TOL

    def __post_init__(self):
        for name in ("psd_tol", "rank_tol", "recon_tol"):
            if not getattr(self, name) > 0:
                raise InvalidInput(f"{name} must be positive")

    def scaled(self, factor: float) -> "ToleranceConfig":
        return ToleranceConfig(self.psd_tol * factor, self.rank_tol * factor, self.recon_tol * factor)


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    dim_a: int = 2
    dim_b: int = 2

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True, eq=False)
class ProductVector:
    """Unit product ket ``e (x) f`` with the phase of ``e`` fixed."""

    e: np.ndarray
    f: np.ndarray

    @classmethod
    def make(cls, e, f) -> "ProductVector":
        e = mc.normalize(mc.as_cvector(e))
        f = mc.normalize(mc.as_cvector(f))
        return cls(mc.fix_phase_first(e, tol=1e-12), f)

    @property
    def ket(self) -> np.ndarray:
        return np.kron(self.e, self.f)

    @property
    def projector(self) -> np.ndarray:
        return mc.outer(self.ket)

    def conj_b(self) -> "ProductVector":
        """``|e, f*>``: the partner ket seen by the B-side partial transpose."""
        return ProductVector(self.e, self.f.conj())

    def conj(self) -> "ProductVector":
        return ProductVector.make(self.e.conj(), self.f.conj())


@dataclass(frozen=True)
class WeightedDecomposition:
    terms: tuple[tuple[float, ProductVector], ...]
    dims: tuple[int, int] = (2, 2)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    @property
    def n_negative(self) -> int:
        return int(np.sum(self.weights < 0))

    def matrix(self) -> np.ndarray:
        d = self.dims[0] * self.dims[1]
        out = np.zeros((d, d), dtype=complex)
        for w, pv in self.terms:
            out += w * pv.projector
        return out

    def __len__(self):
        return len(self.terms)


def check_dims(dims) -> tuple[int, int]:
    dims = tuple(int(x) for x in dims)
    if dims not in SUPPORTED_DIMS:
        raise UnsupportedDimension(f"bipartite dims {dims} not supported (2x2 or 2x3 only)")
    return dims


def validate_density(matrix, dims=(2, 2), tol: ToleranceConfig = DEFAULT_TOL) -> DensityMatrix:
    dim_a, dim_b = check_dims(dims)
    m = mc.as_cmatrix(matrix)
    d = dim_a * dim_b
    if m.shape != (d, d):
        raise InvalidInput(f"expected a {d}x{d} matrix for dims {dims}, got {m.shape}")

    violations = []
    herm_err = mc.max_abs(m - mc.dagger(m))
    if herm_err > tol.psd_tol:
        violations.append(("NotHermitian", herm_err))
    hm = 0.5 * (m + mc.dagger(m))
    tr = float(np.trace(hm).real)
    if abs(tr - 1.0) > tol.psd_tol:
        violations.append(("TraceNotOne", tr))
    lam_min = float(mc.herm_eig(hm).values[0])
    if lam_min < -tol.psd_tol:
        violations.append(("NotPositive", lam_min))

    if violations:
        kind = {"NotHermitian": NotHermitian, "TraceNotOne": TraceNotOne, "NotPositive": NotPositive}
        text = "; ".join(f"{k} ({v:.3g})" for k, v in violations)
        raise kind[violations[0][0]](f"invalid density matrix: {text}", violations)
    return DensityMatrix(hm, dim_a, dim_b)


def _as_state(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    m = mc.as_cmatrix(rho)
    if m.shape == (4, 4):
        return validate_density(m, (2, 2))
    if m.shape == (6, 6):
        return validate_density(m, (2, 3))
    raise UnsupportedDimension(f"cannot infer bipartite dims for shape {m.shape}")


def _tensor(rho: DensityMatrix) -> np.ndarray:
    a, b = rho.dims
    return rho.matrix.reshape(a, b, a, b)


def partial_trace_b(rho) -> np.ndarray:
    rho = _as_state(rho)
    return np.einsum("imjm->ij", _tensor(rho))


def partial_trace_a(rho) -> np.ndarray:
    rho = _as_state(rho)
    return np.einsum("imin->mn", _tensor(rho))


def is_product_state(rho, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    rho = _as_state(rho)
    approx = np.kron(partial_trace_b(rho), partial_trace_a(rho))
    return mc.max_abs(rho.matrix - approx) <= tol.recon_tol


def von_neumann_entropy(m) -> float:
    """``-Tr m ln m`` with ``0 ln 0 = 0``; eigenvalues clipped to [0, 1]."""
    lam = np.clip(mc.herm_eig(m).values, 0.0, 1.0)
    lam = lam[lam > 0.0]
    return float(-np.sum(lam * np.log(lam)))


def index_of_correlation(rho) -> float:
    """``Tr rho ln rho - Tr rho_a ln rho_a - Tr rho_b ln rho_b`` (natural log)."""
    rho = _as_state(rho)
    return (
        von_neumann_entropy(partial_trace_b(rho))
        + von_neumann_entropy(partial_trace_a(rho))
        - von_neumann_entropy(rho.matrix)
    )


_S = 1.0 / math.sqrt(2.0)
_BELL = {
    "psi+": (0.0, _S, _S, 0.0),
    "psi-": (0.0, _S, -_S, 0.0),
    "phi+": (_S, 0.0, 0.0, _S),
    "phi-": (_S, 0.0, 0.0, -_S),
}
_BELL_ALIASES = {"Ψ+": "psi+", "Ψ-": "psi-", "Ψ−": "psi-", "Φ+": "phi+", "Φ-": "phi-", "Φ−": "phi-",
                 "psi-plus": "psi+", "psi-minus": "psi-", "phi-plus": "phi+", "phi-minus": "phi-"}


def make_bell(kind: str) -> np.ndarray:
    key = _BELL_ALIASES.get(kind, kind.lower() if isinstance(kind, str) else kind)
    if key not in _BELL:
        raise InvalidInput(f"unknown Bell state {kind!r}")
    return np.array(_BELL[key], dtype=complex)


def pure_state(psi, dims=(2, 2)) -> DensityMatrix:
    psi = mc.normalize(mc.as_cvector(psi))
    return validate_density(mc.outer(psi), dims)


def make_werner(x: float) -> DensityMatrix:
    """Singlet fraction ``x`` mixed with the maximally mixed state."""
    if not 0.0 <= x <= 1.0:
        raise InvalidInput(f"Werner parameter x={x} outside [0, 1]")
    singlet = make_bell("psi-")
    m = x * mc.outer(singlet) + (1.0 - x) * np.eye(4) / 4.0
    return DensityMatrix(m, 2, 2)


def mixture(terms, dims=None) -> DensityMatrix:
    terms = list(terms)
    if not terms:
        raise InvalidInput("mixture needs at least one term")
    weights = np.array([float(w) for w, _ in terms])
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise InvalidInput("mixture weights must be nonnegative and sum to 1")
    if dims is None:
        pv = terms[0][1]
        dims = (pv.e.size, pv.f.size)
    d = dims[0] * dims[1]
    m = np.zeros((d, d), dtype=complex)
    for w, pv in terms:
        m += w * pv.projector
    return validate_density(m, dims)


def _unit_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z / np.linalg.norm(z)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_product_vector(seed, dims=(2, 2)) -> ProductVector:
    rng = _rng(seed)
    return ProductVector.make(_unit_sphere(rng, dims[0]), _unit_sphere(rng, dims[1]))


def random_separable(seed, k: int, dims=(2, 2)) -> DensityMatrix:
    if not 1 <= k <= 16:
        raise InvalidInput("k must lie in [1, 16]")
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(k))
    weights /= weights.sum()
    terms = [(float(w), random_product_vector(rng, dims)) for w in weights]
    return mixture(terms, dims)


def random_density(seed, rank: int = 4, dims=(2, 2)) -> DensityMatrix:
    d = dims[0] * dims[1]
    if not 1 <= rank <= d:
        raise InvalidInput(f"rank must lie in [1, {d}]")
    rng = _rng(seed)
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real, dims)


def random_product_state(seed, dims=(2, 2)) -> DensityMatrix:
    """``rho_a (x) rho_b`` with both factors full-rank random densities."""
    rng = _rng(seed)
    parts = []
    for d in dims:
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        m = g @ g.conj().T
        parts.append(m / np.trace(m).real)
    return validate_density(np.kron(*parts), dims)
