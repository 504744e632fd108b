"""Geometry of product vectors in C^2 (x) C^2.

A ket ``psi`` is a product vector exactly when its 2x2 coefficient matrix
``psi[2*i + mu]`` is singular, so most questions here reduce to determinants
and 2x2 singular value decompositions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import matcore as mc
from .errors import (
    DegenerateParameter,
    DependentInputs,
    InvalidInput,
    NoSolutionFound,
    NotAProductVector,
)
from .qstate import ProductVector

PRODUCT_TOL = 1e-10
RANGE_TOL = 1e-10
BOTH_RANGES_TOL = 1e-8

SPIRAL_SAMPLES = 64
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
RESTARTS = 8


def reshape_to_2x2(psi) -> np.ndarray:
    psi = mc.as_cvector(psi)
    if psi.size != 4:
        raise InvalidInput("expected a vector of C^2 (x) C^2")
    return psi.reshape(2, 2)


def is_product_vector(psi, tol: float = PRODUCT_TOL) -> bool:
    return abs(mc.det2(reshape_to_2x2(psi))) <= tol


def factorize_product(psi, tol: float = PRODUCT_TOL) -> ProductVector:
    psi = mc.normalize(mc.as_cvector(psi))
    m = reshape_to_2x2(psi)
    if abs(mc.det2(m)) > tol:
        raise NotAProductVector(f"|det| = {abs(mc.det2(m)):.3g} exceeds {tol:g}")
    _, _, u, v = mc.svd2(m)
    return ProductVector.make(u[:, 0], v[:, 0].conj())


@dataclass(frozen=True)
class SchmidtForm:
    c1: float
    c2: float
    e1: np.ndarray
    f1: np.ndarray
    e2: np.ndarray
    f2: np.ndarray

    def vector(self) -> np.ndarray:
        return self.c1 * np.kron(self.e1, self.f1) + self.c2 * np.kron(self.e2, self.f2)

    def products(self) -> tuple[ProductVector, ProductVector]:
        return ProductVector(self.e1, self.f1), ProductVector(self.e2, self.f2)


def schmidt(psi) -> SchmidtForm:
    psi = mc.as_cvector(psi)
    s1, s2, u, v = mc.svd2(reshape_to_2x2(psi))
    return SchmidtForm(s1, s2, u[:, 0], v[:, 0].conj(), u[:, 1], v[:, 1].conj())


class PlaneKind(enum.Enum):
    ALL_PRODUCT = "AllProduct"
    ROOTS = "Roots"


@dataclass(frozen=True)
class PlaneProductResult:
    kind: PlaneKind
    roots: tuple[tuple[tuple[complex, complex], ProductVector], ...] = ()

    @property
    def all_product(self) -> bool:
        return self.kind is PlaneKind.ALL_PRODUCT

    @property
    def vectors(self) -> list[ProductVector]:
        return [pv for _, pv in self.roots]


def plane_quadratic(m1: np.ndarray, m2: np.ndarray) -> tuple[complex, complex, complex]:
    """Coefficients of ``det(alpha*m1 + beta*m2)`` as a quadratic form in (alpha, beta)."""
    a = mc.det2(m1)
    c = mc.det2(m2)
    b = m1[0, 0] * m2[1, 1] + m2[0, 0] * m1[1, 1] - m1[0, 1] * m2[1, 0] - m2[0, 1] * m1[1, 0]
    return a, complex(b), c


def product_states_in_plane(v1, v2, tol: float = PRODUCT_TOL) -> PlaneProductResult:
    v1 = mc.normalize(mc.as_cvector(v1))
    v2 = mc.normalize(mc.as_cvector(v2))
    if v1.size != 4 or v2.size != 4:
        raise InvalidInput("plane generators must live in C^2 (x) C^2")
    if abs(np.vdot(v1, v2)) >= 1.0 - 1e-12:
        raise DependentInputs("plane generators are linearly dependent")

    rs = mc.quadratic_roots(*plane_quadratic(v1.reshape(2, 2), v2.reshape(2, 2)), all_tol=tol)
    if rs.kind is mc.RootKind.ALL:
        return PlaneProductResult(PlaneKind.ALL_PRODUCT)
    roots = []
    for alpha, beta in rs.roots:
        psi = alpha * v1 + beta * v2
        roots.append(((alpha, beta), factorize_product(psi, tol=max(tol, 1e-8))))
    return PlaneProductResult(PlaneKind.ROOTS, tuple(roots))


def haar_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _in_range(name, x, lo, hi, lo_open=False, hi_open=False):
    eps = 1e-12
    bad_lo = x <= lo - eps if not lo_open else x <= lo
    bad_hi = x >= hi + eps if not hi_open else x >= hi
    if bad_lo or bad_hi:
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise InvalidInput(f"angle {name}={x} outside {lb}{lo}, {hi}{rb}")


def gen_plane_case(kind: str, A: float, B: float = 0.0, C: float = 0.0, D: float = 0.0, seed=None):
    """Spanning vectors of a canonical plane of type P1, P2 or P3.

    P1 is spanned by two product vectors, P2 holds a single product state and
    P3 is the generic plane. When ``seed`` is given both vectors are rotated
    by a seeded random local unitary ``U_a (x) U_b``.
    """
    kind = kind.upper()
    half, full = math.pi / 2, 2 * math.pi
    if kind == "P1":
        _in_range("A", A, 0, half)
        _in_range("C", C, 0, half)
        _in_range("B", B, 0, full, hi_open=True)
        _in_range("D", D, 0, full, hi_open=True)
        v1 = np.array([1, 0, 0, 0], dtype=complex)
        e = np.array([math.cos(A), np.exp(1j * B) * math.sin(A)])
        f = np.array([math.cos(C), np.exp(1j * D) * math.sin(C)])
        v2 = np.kron(e, f)
        if abs(np.vdot(v1, v2)) >= 1.0 - 1e-12:
            raise InvalidInput("P1 angles give a dependent pair (A = C = 0)")
    elif kind == "P2":
        _in_range("A", A, 0, half, lo_open=True, hi_open=True)
        _in_range("B", B, 0, half, hi_open=True)
        _in_range("C", C, 0, full, hi_open=True)
        v1 = np.array([1, 0, 0, 0], dtype=complex)
        # the sin(A) sin(B) part sits on |00>, inside the plane; on |11> it
        # would add a second product state for every B > 0
        v2 = np.array(
            [
                math.sin(A) * math.sin(B),
                math.cos(A),
                np.exp(1j * C) * math.sin(A) * math.cos(B),
                0.0,
            ],
            dtype=complex,
        )
    elif kind == "P3":
        _in_range("A", A, 0, half, lo_open=True, hi_open=True)
        _in_range("B", B, 0, half)
        _in_range("C", C, 0, half)
        _in_range("D", D, 0, full, hi_open=True)
        v1 = np.array([math.cos(A), 0, 0, math.sin(A)], dtype=complex)
        v2 = np.array(
            [
                math.sin(A) * math.cos(B),
                math.sin(B) * math.cos(C),
                np.exp(1j * D) * math.sin(B) * math.sin(C),
                -math.cos(A) * math.cos(B),
            ],
            dtype=complex,
        )
        if is_product_vector(v2):
            raise InvalidInput("P3 angles make the second generator a product vector")
    else:
        raise InvalidInput(f"unknown plane kind {kind!r}")

    if seed is not None:
        rng = np.random.default_rng(seed)
        u = np.kron(haar_unitary(rng), haar_unitary(rng))
        v1, v2 = u @ v1, u @ v2
    return v1, v2


def _kernel_vector(m, rank_tol: float) -> np.ndarray:
    _, ker = mc.range_and_kernel(m, rank_tol)
    if ker.shape[1] != 1:
        raise InvalidInput(f"expected a rank-3 matrix, kernel has dimension {ker.shape[1]}")
    return ker[:, 0]


def _e_of(t) -> np.ndarray:
    if t is None or (isinstance(t, (int, float, complex)) and math.isinf(abs(t))):
        return np.array([0, 1], dtype=complex)
    return np.array([1, complex(t)], dtype=complex)


def _partner(e: np.ndarray, w: np.ndarray) -> np.ndarray:
    """The ``f`` (up to scale) with ``e (x) f`` orthogonal to ``w``."""
    g = w.reshape(2, 2).conj().T @ e
    return np.array([-g[1], g[0]])


def product_in_range(rho, t, rank_tol: float = mc.RANK_TOL) -> ProductVector:
    """Product vector ``e(t) (x) f(t)`` in the range of a rank-3 PSD matrix.

    ``e(t) = (1, t)``, or ``(0, 1)`` for ``t`` infinite or ``None``.
    """
    w = _kernel_vector(rho, rank_tol)
    e = _e_of(t)
    f = _partner(e, w)
    if np.linalg.norm(f) <= 1e-12 * np.linalg.norm(e):
        raise DegenerateParameter(f"every f is admissible at t={t}; no unique partner")
    pv = ProductVector.make(e, f)
    resid = abs(np.vdot(w, pv.ket))
    if resid > RANGE_TOL:
        raise NoSolutionFound(f"range residual {resid:.3g} exceeds {RANGE_TOL:g}")
    return pv


def _spiral(n: int) -> list[complex]:
    """Fibonacci-spiral points on the Riemann sphere, stereographically projected.

    Points in the northern cap map to ``|t| > 1``; the pole itself never occurs.
    """
    golden = math.pi * (3.0 - math.sqrt(5.0))
    pts = []
    for k in range(n):
        z = 1.0 - (2 * k + 1) / n
        r = math.sqrt(1.0 - z * z)
        phi = k * golden
        pts.append(complex(r * math.cos(phi), r * math.sin(phi)) / (1.0 - z))
    return pts


class _BothRangeProblem:
    def __init__(self, w: np.ndarray, u: np.ndarray):
        self.w = w
        self.u = u

    def e(self, t: complex, chart: int) -> np.ndarray:
        return np.array([1, t], dtype=complex) if chart == 0 else np.array([t, 1], dtype=complex)

    def _de(self, chart: int) -> np.ndarray:
        return np.array([0, 1], dtype=complex) if chart == 0 else np.array([1, 0], dtype=complex)

    def residual(self, t: complex, chart: int) -> complex:
        """``<u| e (x) f*>`` for unit e and f; f already satisfies ``<w|e (x) f> = 0``."""
        return self._eval(t, chart, jac=False)[0]

    def _eval(self, t: complex, chart: int, jac: bool = True):
        e = self.e(t, chart)
        f = _partner(e, self.w)
        ne, nf = np.linalg.norm(e), np.linalg.norm(f)
        if nf <= 1e-14:
            return complex("inf"), None
        uk = self.u.reshape(2, 2).conj().T
        h = complex((uk @ e) @ f.conj())
        norm = ne * nf
        val = h / norm
        if not jac:
            return val, None
        de = self._de(chart)
        df = _partner(de, self.w)
        out = np.empty((2, 2))
        for col, delta in enumerate((1.0, 1j)):
            dh = complex((uk @ (delta * de)) @ f.conj() + (uk @ e) @ (delta * df).conj())
            dne = np.vdot(e, delta * de).real / ne
            dnf = np.vdot(f, delta * df).real / nf
            d = dh / norm - h * (dne * nf + ne * dnf) / norm ** 2
            out[:, col] = (d.real, d.imag)
        return val, out

    def newton(self, t: complex, chart: int) -> tuple[complex, int, float]:
        r = self.residual(t, chart)
        for _ in range(NEWTON_MAX_ITER):
            if abs(r) <= NEWTON_TOL:
                break
            if abs(t) > 1.0:
                t, chart = 1.0 / t, 1 - chart
            r, jac = self._eval(t, chart)
            if jac is None or not np.all(np.isfinite(jac)):
                break
            # the residual has constant phase, so jac is rank one and the
            # solutions form a curve: take the minimum-norm step onto it
            step = np.linalg.lstsq(jac, -np.array([r.real, r.imag]), rcond=1e-8)[0]
            dt = complex(step[0], step[1])
            lam = 1.0
            for _ in range(30):
                r_new = self.residual(t + lam * dt, chart)
                if abs(r_new) < abs(r):
                    break
                lam *= 0.5
            else:
                break
            t, r = t + lam * dt, r_new
        return t, chart, abs(r)

    def candidate(self, t: complex, chart: int) -> ProductVector:
        e = self.e(t, chart)
        return ProductVector.make(e, _partner(e, self.w))


def products_in_both_ranges(rho, rho_pt, rank_tol: float = mc.RANK_TOL) -> list[tuple[ProductVector, float]]:
    """All distinct certified solutions found by the restart schedule, best residual first.

    A solution ``e (x) f`` lies in the range of ``rho`` while ``e (x) f*`` lies
    in the range of ``rho_pt``.
    """
    w = _kernel_vector(rho, rank_tol)
    u = _kernel_vector(rho_pt, rank_tol)
    prob = _BothRangeProblem(w, u)

    samples = []
    for t in _spiral(SPIRAL_SAMPLES):
        t, chart = (t, 0) if abs(t) <= 1.0 else (1.0 / t, 1)
        samples.append((abs(prob.residual(t, chart)), t, chart))
    samples.sort(key=lambda s: s[0])

    found: list[tuple[ProductVector, float]] = []
    best = math.inf
    for _, t0, chart0 in samples[:RESTARTS]:
        t, chart, _ = prob.newton(t0, chart0)
        try:
            pv = prob.candidate(t, chart)
        except InvalidInput:
            continue
        resid = max(abs(np.vdot(w, pv.ket)), abs(np.vdot(u, pv.conj_b().ket)))
        best = min(best, resid)
        if resid > BOTH_RANGES_TOL:
            continue
        if any(abs(np.vdot(q.ket, pv.ket)) > 1.0 - 1e-8 for q, _ in found):
            continue
        found.append((pv, resid))
    if not found:
        raise NoSolutionFound(
            "no product vector in both ranges",
            {"best_residual": best, "kernel": w.tolist(), "pt_kernel": u.tolist()},
        )
    found.sort(key=lambda item: item[1])
    return found


def product_in_both_ranges(rho, rho_pt, rank_tol: float = mc.RANK_TOL) -> ProductVector:
    return products_in_both_ranges(rho, rho_pt, rank_tol)[0][0]
