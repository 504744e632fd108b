"""Canonical product-state decompositions of 2x2 density matrices.

Separable states are peeled apart by repeatedly subtracting the largest
admissible multiple of a product projector, chosen so that both the state
and its partial transpose lose rank, until a rank-2 remainder splits into
two product terms. Inseparable states are first repaired by adding the two
Schmidt products of the negative partial-transpose eigenvector, and the
repaired state is decomposed the same way.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import geometry as geo
from . import matcore as mc
from .errors import (
    DegenerateParameter,
    InvalidInput,
    NoSolutionFound,
    NotApplicable,
    NotSeparableInput,
    NumericalRankMismatch,
    UnsupportedDimension,
)
from .qstate import (
    DEFAULT_TOL,
    DensityMatrix,
    ProductVector,
    ToleranceConfig,
    WeightedDecomposition,
    _as_state,
    make_werner,
    validate_density,
)
from .septest import SeparabilityVerdict, Verdict, negative_pt_spectrum, ppt_check, pt_matrix

RANGE_SAMPLES = 16
BISECTION_STEPS = 80


@dataclass(frozen=True)
class SubtractionStep:
    stage: int
    kind: str
    vector: ProductVector
    threshold: float
    ranks_before: tuple[int, int]
    ranks_after: tuple[int, int]


@dataclass
class DecompositionReport:
    fingerprint: str
    verdict: SeparabilityVerdict
    decomposition: WeightedDecomposition
    steps: list[SubtractionStep]
    reconstruction_error: float
    pbar: Optional[tuple[float, float]] = None
    schmidt: Optional[geo.SchmidtForm] = None
    flags: list[str] = field(default_factory=list)

    @property
    def n_terms(self) -> int:
        return len(self.decomposition)


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    max_error: float
    weight_sum: float
    n_terms: int
    n_negative: int
    product_valid: tuple[bool, ...]


def fingerprint(m: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(m, dtype=complex).tobytes()).hexdigest()[:16]


def subtraction_threshold(rho, v, rank_tol: float = mc.RANK_TOL, range_tol: float = 1e-9) -> float:
    """Largest ``lam`` with ``rho - lam |v><v|`` positive semidefinite.

    Equals ``1 / <v|rho^+|v>`` when ``v`` lies in the range of ``rho`` and 0
    otherwise.
    """
    m = mc.as_cmatrix(rho)
    v = mc.normalize(mc.as_cvector(v))
    eig = mc.herm_eig(m)
    cut = mc.rank_threshold(eig.values, rank_tol)
    keep = eig.values > cut
    coeffs = mc.dagger(eig.vectors) @ v
    out_of_range = math.sqrt(float(np.sum(np.abs(coeffs[~keep]) ** 2)))
    if out_of_range > range_tol:
        return 0.0
    q = float(np.sum(np.abs(coeffs[keep]) ** 2 / eig.values[keep]))
    return 1.0 / q if q > 0 else 0.0


def _ranks(sigma: np.ndarray, tol: ToleranceConfig) -> tuple[int, int]:
    return mc.rank_with_tol(sigma, tol.rank_tol), mc.rank_with_tol(pt_matrix(sigma), tol.rank_tol)


def _joint_threshold(sigma, pv: ProductVector, tol: ToleranceConfig, range_tol: float = 1e-9) -> float:
    return min(
        subtraction_threshold(sigma, pv.ket, tol.rank_tol, range_tol),
        subtraction_threshold(pt_matrix(sigma), pv.conj_b().ket, tol.rank_tol, range_tol),
    )


def _first_candidates(sigma: np.ndarray) -> list[ProductVector]:
    top = mc.herm_eig(sigma).vectors[:, -1]
    sf = geo.schmidt(top)
    cands = list(sf.products())
    basis = np.eye(2, dtype=complex)
    for i in range(2):
        for mu in range(2):
            cands.append(ProductVector.make(basis[i], basis[mu]))
    return cands


def _range_candidates(side: np.ndarray, tol: ToleranceConfig) -> list[ProductVector]:
    out = []
    for t in geo._spiral(RANGE_SAMPLES):
        try:
            out.append(geo.product_in_range(side, t, tol.rank_tol))
        except (DegenerateParameter, NoSolutionFound):
            continue
    return out


def _split_rank_two(sigma: np.ndarray, tol: ToleranceConfig) -> tuple[list[ProductVector], float, str]:
    """Write a separable rank-2 state as ``p P_a + (1 - p) P_b``."""
    rng, _ = mc.range_and_kernel(sigma, tol.rank_tol)
    v1, v2 = rng[:, -1], rng[:, -2]
    plane = geo.product_states_in_plane(v1, v2)
    if plane.all_product:
        eig = mc.herm_eig(sigma)
        lam = eig.values[-2:][::-1]
        vecs = [geo.factorize_product(eig.vectors[:, k], tol=1e-8) for k in (-1, -2)]
        return vecs, float(lam[0] / lam.sum()), "all-product-plane"
    vecs = plane.vectors
    if len(vecs) < 2:
        raise NumericalRankMismatch(
            "rank-2 remainder spans a plane with a single product state",
            {"spectrum": mc.herm_eig(sigma).values.tolist()},
        )
    cols = np.column_stack([vecs[0].projector.ravel(), vecs[1].projector.ravel()])
    lhs = np.vstack([cols.real, cols.imag])
    rhs = np.concatenate([sigma.ravel().real, sigma.ravel().imag])
    x, y = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
    if x <= 0 or y <= 0:
        raise NumericalRankMismatch(
            f"rank-2 split produced non-positive weights ({x:.3g}, {y:.3g})",
            {"spectrum": mc.herm_eig(sigma).values.tolist()},
        )
    return vecs, float(x / (x + y)), "plane-roots"


def _admissible(before: tuple[int, int], after: tuple[int, int]) -> bool:
    """Ranks must not grow, their sum must drop, and rank <= 2 forces equal ranks."""
    if after[0] > before[0] or after[1] > before[1] or sum(after) >= sum(before):
        return False
    if min(after) <= 2 and after[0] != after[1]:
        return False
    return True


def _chain(ps: list[float]) -> list[float]:
    """Flat weights from successive renormalized fractions ``p_1, p_2, ...``.

    The last entry receives whatever the chain leaves over.
    """
    out, rest = [], 1.0
    for p in ps:
        out.append(p * rest)
        rest *= 1.0 - p
    out.append(rest)
    return out


def _decompose_ppt(m: np.ndarray, tol: ToleranceConfig) -> tuple[list[tuple[float, ProductVector]], list[SubtractionStep], list[str]]:
    sigma = 0.5 * (m + mc.dagger(m))
    steps: list[SubtractionStep] = []
    notes: list[str] = []
    ps: list[float] = []
    vecs: list[ProductVector] = []

    for stage in range(1, 9):
        ranks = _ranks(sigma, tol)
        r, rt = ranks
        if r <= 2 or rt <= 2:
            if r != rt:
                raise NumericalRankMismatch(
                    f"rank profile {ranks} is impossible for a separable state",
                    {"spectrum": mc.herm_eig(sigma).values.tolist(),
                     "pt_spectrum": mc.herm_eig(pt_matrix(sigma)).values.tolist()},
                )
            if r == 1:
                vecs.append(geo.factorize_product(mc.herm_eig(sigma).vectors[:, -1], tol=1e-8))
                break
            pair, p, how = _split_rank_two(sigma, tol)
            steps.append(SubtractionStep(stage, "split:" + how, pair[0], p, ranks, (1, 1)))
            ps.append(p)
            vecs.extend(pair)
            break

        range_tol = 1e-9
        if ranks == (4, 4):
            kind = "arbitrary-product"
            cands = _first_candidates(sigma)
        elif ranks == (3, 4):
            kind = "range"
            cands = _range_candidates(sigma, tol)
        elif ranks == (4, 3):
            kind = "pt-range"
            cands = [c.conj_b() for c in _range_candidates(pt_matrix(sigma), tol)]
        elif ranks == (3, 3):
            kind = "both-ranges"
            range_tol = geo.BOTH_RANGES_TOL
            cands = [pv for pv, _ in geo.products_in_both_ranges(sigma, pt_matrix(sigma), tol.rank_tol)]
        else:
            raise NumericalRankMismatch(f"unexpected rank profile {ranks}")

        scored = sorted(
            ((_joint_threshold(sigma, pv, tol, range_tol), i, pv) for i, pv in enumerate(cands)),
            key=lambda item: (-item[0], item[1]),
        )
        accepted = None
        tried = []
        for p, _, pv in scored:
            if not 0.0 < p < 1.0:
                continue
            nxt = (sigma - p * pv.projector) / (1.0 - p)
            nxt = 0.5 * (nxt + mc.dagger(nxt))
            after = _ranks(nxt, tol)
            tried.append((p, after))
            if _admissible(ranks, after):
                accepted = (p, pv, nxt, after)
                break
        if accepted is None:
            raise NumericalRankMismatch(
                f"no admissible subtraction at rank profile {ranks}",
                {"tried": tried, "spectrum": mc.herm_eig(sigma).values.tolist()},
            )
        p, pv, sigma, after = accepted
        if sum(ranks) - sum(after) > 1 and kind != "both-ranges":
            notes.append(f"simultaneous rank drop at stage {stage}")
        steps.append(SubtractionStep(stage, kind, pv, p, ranks, after))
        ps.append(p)
        vecs.append(pv)
    else:
        raise NumericalRankMismatch("decomposition did not terminate")

    weights = _chain(ps)
    return list(zip(weights, vecs)), steps, notes


def _require_2x2(rho) -> DensityMatrix:
    rho = _as_state(rho)
    if rho.dims != (2, 2):
        raise UnsupportedDimension("canonical decompositions are implemented for 2x2 systems")
    return rho


def decompose_separable(rho, tol: ToleranceConfig = DEFAULT_TOL) -> DecompositionReport:
    rho = _require_2x2(rho)
    verdict = ppt_check(rho, tol)
    if not verdict.ppt_holds:
        raise NotSeparableInput(f"partial transpose has eigenvalue {verdict.min_pt_eigenvalue:.3g} < 0")
    terms, steps, notes = _decompose_ppt(rho.matrix, tol)
    d = WeightedDecomposition(tuple(terms), (2, 2))
    err = mc.max_abs(d.matrix() - rho.matrix)
    flags = list(notes)
    if verdict.boundary:
        flags.append("ppt-boundary")
    return DecompositionReport(fingerprint(rho.matrix), verdict, d, steps, err, flags=flags)


def _min_eig(m: np.ndarray) -> float:
    return float(mc.herm_eig(m).values[0])


def repair_partial_transpose(rho_pt: np.ndarray, sf: geo.SchmidtForm, tol: ToleranceConfig) -> float:
    """Smallest ``s >= 0`` making ``rho_pt + s (c1^2 P_1 + c2^2 P_2)`` positive semidefinite."""
    p1, p2 = (pv.projector for pv in sf.products())
    add = sf.c1 ** 2 * p1 + sf.c2 ** 2 * p2

    def ok(s):
        return _min_eig(rho_pt + s * add) >= 0.0

    hi = 1.0
    for _ in range(64):
        if ok(hi):
            break
        hi *= 2.0
    else:
        raise NoSolutionFound("partial transpose could not be repaired along the Schmidt ray")
    lo = 0.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    lam = _min_eig(rho_pt + hi * add)
    if not 0.0 <= lam <= tol.psd_tol * (1.0 + hi):
        raise NoSolutionFound(f"repaired minimum eigenvalue {lam:.3g} outside [0, psd_tol]")
    return hi


def decompose_inseparable(rho, tol: ToleranceConfig = DEFAULT_TOL) -> DecompositionReport:
    rho = _require_2x2(rho)
    verdict = ppt_check(rho, tol)
    count, _, n = negative_pt_spectrum(rho, tol)
    if count == 0:
        raise NotApplicable("state is PPT; use decompose_separable")

    sf = geo.schmidt(n)
    if sf.c2 <= 1e-12:
        sf = geo.SchmidtForm(1.0, 0.0, sf.e1, sf.f1, sf.e2, sf.f2)
    rho_pt = pt_matrix(rho.matrix)
    s = repair_partial_transpose(rho_pt, sf, tol)
    pbar = (s * sf.c1 ** 2, s * sf.c2 ** 2)

    negatives = []
    for pb, (e, f) in zip(pbar, ((sf.e1, sf.f1), (sf.e2, sf.f2))):
        if pb > 0.0:
            negatives.append((-pb, ProductVector.make(e, f.conj())))
    repaired = rho.matrix.copy()
    for w, pv in negatives:
        repaired -= w * pv.projector
    repaired /= 1.0 + s
    repaired_state = validate_density(repaired, (2, 2), tol)

    terms, steps, notes = _decompose_ppt(repaired_state.matrix, tol)
    positive = [((1.0 + s) * w, pv) for w, pv in terms]
    d = WeightedDecomposition(tuple(positive + negatives), (2, 2))
    err = mc.max_abs(d.matrix() - rho.matrix)
    flags = list(notes)
    flags.append("pbar-rule:schmidt-ray-bisection")
    if len(positive) > 4:
        flags.append("repaired-state-exceeds-4-terms")
    return DecompositionReport(fingerprint(rho.matrix), verdict, d, steps, err, pbar=pbar, schmidt=sf, flags=flags)


def decompose(rho, tol: ToleranceConfig = DEFAULT_TOL) -> DecompositionReport:
    rho = _require_2x2(rho)
    if ppt_check(rho, tol).ppt_holds:
        return decompose_separable(rho, tol)
    return decompose_inseparable(rho, tol)


def verify_decomposition(d: WeightedDecomposition, rho, tol: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """Rebuild ``sum w_i |e_i f_i><e_i f_i|`` entry by entry and compare with ``rho``."""
    target = np.asarray(rho.matrix if isinstance(rho, DensityMatrix) else rho, dtype=complex)
    da, db = d.dims
    dim = da * db
    acc = np.zeros((dim, dim), dtype=complex)
    valid = []
    for w, pv in d.terms:
        e = np.asarray(pv.e, dtype=complex)
        f = np.asarray(pv.f, dtype=complex)
        ok = e.size == da and f.size == db and bool(np.all(np.isfinite(e)) and np.all(np.isfinite(f)))
        ok = ok and abs(np.linalg.norm(e) - 1.0) <= 1e-10 and abs(np.linalg.norm(f) - 1.0) <= 1e-10
        valid.append(ok)
        if not (e.size == da and f.size == db):
            continue
        for i in range(da):
            for mu in range(db):
                for j in range(da):
                    for nu in range(db):
                        acc[i * db + mu, j * db + nu] += w * e[i] * f[mu] * np.conj(e[j] * f[nu])
    if target.shape != acc.shape:
        return VerificationReport(False, math.inf, float(sum(w for w, _ in d.terms)), len(d), d.n_negative, tuple(valid))
    err = float(np.max(np.abs(acc - target)))
    wsum = float(sum(w for w, _ in d.terms))
    passed = err <= tol.recon_tol and abs(wsum - 1.0) <= 1e-9 and all(valid)
    return VerificationReport(passed, err, wsum, len(d), d.n_negative, tuple(valid))


def werner_reference_parameters(x: float) -> tuple[float, float, float, float]:
    """Closed-form successive fractions ``p_1..p_4`` for the Werner state."""
    if not 0.0 < x < 1.0:
        raise InvalidInput(f"Werner reference needs 0 < x < 1, got {x}")
    p1 = (1 + 3 * x) * (1 - x) / (4 * (1 + x))
    p2 = (1 - 3 * x) * (1 + x) ** 2 / ((3 + 2 * x + 3 * x ** 2) * (1 - x))
    return p1, p2, 1.0 / 3.0, 0.5


def werner_reference_decomposition(x: float) -> WeightedDecomposition:
    """Explicit five-term product decomposition of ``make_werner(x)``.

    For ``x > 1/3`` the second weight is negative and the result is no longer
    a statistical mixture.
    """
    p = werner_reference_parameters(x)
    n = math.sqrt(3 * x ** 2 + 1)
    r2 = math.sqrt(2.0)
    a, b = math.sqrt(1 + x), math.sqrt(1 - x)
    e3 = np.array([2 * x, -math.sqrt(1 - x ** 2)]) / n
    f3 = np.array([a, b]) / r2
    e4 = np.array([2 * x, np.exp(1j * math.pi / 3) * math.sqrt(1 - x ** 2)]) / n
    f4 = np.array([a, np.exp(-2j * math.pi / 3) * b]) / r2
    vecs = [
        ProductVector.make([1, 0], [0, 1]),
        ProductVector.make([1, 0], [1, 0]),
        ProductVector.make(e3, f3),
        ProductVector.make(e4, f4),
        ProductVector.make(e4.conj(), f4.conj()),
    ]
    return WeightedDecomposition(tuple(zip(_chain(list(p)), vecs)), (2, 2))
