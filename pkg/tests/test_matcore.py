import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepcanon import matcore as mc
from sepcanon.errors import InvalidInput

from conftest import random_hermitian, random_psd

SX = np.array([[0, 1], [1, 0]], dtype=complex)


@pytest.mark.parametrize(
    "m, expected",
    [
        (np.eye(4), [1, 1, 1, 1]),
        (np.diag([0.1, 0.9]), [0.1, 0.9]),
        (SX, [-1, 1]),
    ],
)
def test_herm_eig_examples(backend, m, expected):
    np.testing.assert_allclose(mc.herm_eig(m).values, expected, atol=1e-14)


def test_herm_eig_reconstruction_1000(backend):
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        m = random_hermitian(rng, n)
        eig = mc.herm_eig(m)
        v = eig.vectors
        assert np.all(np.diff(eig.values) >= 0)
        assert mc.max_abs(v @ np.diag(eig.values) @ v.conj().T - m) <= 1e-11 * max(1.0, mc.max_abs(m))
        assert mc.max_abs(v.conj().T @ v - np.eye(n)) <= 1e-12
        np.testing.assert_allclose(eig.values, np.linalg.eigvalsh(m), atol=1e-12 * max(1, mc.max_abs(m)))


def test_herm_eig_residual_per_pair(backend):
    rng = np.random.default_rng(5)
    m = random_hermitian(rng, 6)
    eig = mc.herm_eig(m)
    norm = np.linalg.norm(m, 2)
    for k in range(6):
        v = eig.vectors[:, k]
        assert np.linalg.norm(m @ v - eig.values[k] * v) <= 1e-12 * norm


def test_herm_eig_deterministic_phase_and_ties(backend):
    m = np.diag([2.0, 1.0, 1.0, 0.5]).astype(complex)
    eig = mc.herm_eig(m)
    np.testing.assert_allclose(eig.values, [0.5, 1.0, 1.0, 2.0])
    # degenerate pair ordered by phase-fixed vector, largest component real positive
    np.testing.assert_allclose(np.abs(eig.vectors), np.abs(np.eye(4)[:, [3, 1, 2, 0]]), atol=1e-15)
    for k in range(4):
        v = eig.vectors[:, k]
        top = v[np.argmax(np.abs(v))]
        assert abs(top.imag) < 1e-15 and top.real > 0


def test_backends_agree():
    if len(mc.available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(9)
    for _ in range(50):
        m = random_hermitian(rng, int(rng.integers(2, 7)))
        mc.use_backend("cython")
        a = mc.herm_eig(m)
        mc.use_backend("python")
        b = mc.herm_eig(m)
        np.testing.assert_allclose(a.values, b.values, atol=1e-12)
    mc.use_backend(mc.available_backends()[0])


def test_herm_eig_rejects_bad_input():
    with pytest.raises(InvalidInput):
        mc.herm_eig(np.array([[1.0, np.nan], [np.nan, 1.0]]))
    with pytest.raises(InvalidInput):
        mc.herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(InvalidInput):
        mc.herm_eig(np.eye(7))


def test_rank_with_tol_examples():
    assert mc.rank_with_tol(np.eye(4), 1e-9) == 4
    p = np.zeros((4, 4)); p[0, 0] = 1
    assert mc.rank_with_tol(p, 1e-9) == 1
    # Werner x = 1/3 partial transpose, written out by hand: diag (1+x)/4 off the
    # {00,11} block, and [[(1-x)/4, -x/2], [-x/2, (1-x)/4]] on it
    x = 1 / 3
    pt = np.diag([(1 - x) / 4, (1 + x) / 4, (1 + x) / 4, (1 - x) / 4]).astype(complex)
    pt[0, 3] = pt[3, 0] = -x / 2
    assert min(np.linalg.eigvalsh(pt)) == pytest.approx(0.0, abs=1e-15)
    assert mc.rank_with_tol(pt, 1e-9) == 3


def test_pinv_examples():
    np.testing.assert_allclose(mc.pinv_psd(np.eye(3)), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(mc.pinv_psd(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]), atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_pinv_penrose_identities(n):
    rng = np.random.default_rng(n)
    for rank in range(1, n + 1):
        m = random_psd(rng, n, rank)
        m /= np.trace(m).real
        p = mc.pinv_psd(m)
        assert mc.max_abs(m @ p @ m - m) <= 1e-10
        assert mc.max_abs(p @ m @ p - p) <= 1e-10 * max(1, mc.max_abs(p))
        assert mc.max_abs((m @ p).conj().T - m @ p) <= 1e-10
        assert mc.max_abs((p @ m).conj().T - p @ m) <= 1e-10


@pytest.mark.parametrize(
    "m, s",
    [
        (np.eye(2), (1, 1)),
        (np.array([[1, 0], [0, 0]]), (1, 0)),
        (np.array([[0, 1], [1, 0]]) / math.sqrt(2), (1 / math.sqrt(2), 1 / math.sqrt(2))),
    ],
)
def test_svd2_examples(m, s):
    s1, s2, _, _ = mc.svd2(m)
    assert (s1, s2) == pytest.approx(s, abs=1e-15)


def test_svd2_reconstruction_and_phase():
    rng = np.random.default_rng(11)
    for _ in range(300):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if rng.random() < 0.3:
            m = np.outer(m[:, 0], m[0, :])
        s1, s2, u, v = mc.svd2(m)
        assert s1 >= s2 >= 0
        np.testing.assert_allclose(sorted([s1, s2]), sorted(np.linalg.svd(m, compute_uv=False)), atol=1e-12)
        assert mc.max_abs(u @ np.diag([s1, s2]) @ v.conj().T - m) <= 1e-12 * max(1, mc.max_abs(m))
        assert mc.max_abs(u.conj().T @ u - np.eye(2)) <= 1e-12
        assert mc.max_abs(v.conj().T @ v - np.eye(2)) <= 1e-12
        for k in range(2):
            first = next(z for z in u[:, k] if abs(z) > 1e-14)
            assert abs(first.imag) < 1e-14 and first.real >= 0


def test_quadratic_roots_examples():
    rs = mc.quadratic_roots(0, 1, 0)
    assert rs.kind is mc.RootKind.TWO_ROOTS
    assert set((complex(a), complex(b)) for a, b in rs.roots) == {(1, 0), (0, 1)}
    rs = mc.quadratic_roots(1, -2, 1)
    assert rs.kind is mc.RootKind.DOUBLE_ROOT
    assert rs.roots[0] == pytest.approx((1, 1))
    assert mc.quadratic_roots(0, 0, 0).kind is mc.RootKind.ALL


def test_quadratic_roots_degenerate_leading():
    rs = mc.quadratic_roots(0, 0, 3)
    assert rs.kind is mc.RootKind.DOUBLE_ROOT and rs.roots[0] == (1, 0)
    rs = mc.quadratic_roots(0, 2, -4)
    assert rs.roots[1] == pytest.approx((1, 0.5))


cplx = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=2000, deadline=None)
@given(cplx, cplx, cplx)
def test_quadratic_roots_substitution(a, b, c):
    rs = mc.quadratic_roots(a, b, c)
    m = max(abs(a), abs(b), abs(c))
    if rs.kind is mc.RootKind.ALL:
        assert m <= 1e-12
        return
    for alpha, beta in rs.roots:
        assert max(abs(alpha), abs(beta)) == pytest.approx(1.0)
        val = a * alpha ** 2 + b * alpha * beta + c * beta ** 2
        assert abs(val) <= 1e-10 * m


def test_quadratic_roots_near_double():
    # perturbed perfect squares land in the double-root branch
    rng = np.random.default_rng(12)
    for _ in range(2000):
        r, s, k = (complex(*rng.normal(size=2)) for _ in range(3))
        eps = 10.0 ** rng.uniform(-14, -4)
        a, b, c = k * s * s, -2 * k * r * s + eps, k * r * r
        m = max(abs(a), abs(b), abs(c))
        for alpha, beta in mc.quadratic_roots(a, b, c).roots:
            assert abs(a * alpha ** 2 + b * alpha * beta + c * beta ** 2) <= 1e-10 * m


def test_kron_det2():
    np.testing.assert_array_equal(mc.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert mc.det2(np.eye(2)) == 1
    assert mc.det2([[0, 1], [1, 0]]) == -1
    with pytest.raises(InvalidInput):
        mc.kron(np.eye(3), np.eye(3))
