import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepcanon import geometry as geo
from sepcanon import qstate, septest
from sepcanon.errors import (
    DegenerateParameter,
    DependentInputs,
    InvalidInput,
    NotAProductVector,
)

S = 1 / math.sqrt(2)
K00, K01, K10, K11 = np.eye(4, dtype=complex)
PHI = np.array([S, 0, 0, S], dtype=complex)


def unit(rng, n):
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z / np.linalg.norm(z)


def same_ray(a, b, tol=1e-10):
    return abs(abs(np.vdot(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) <= tol


def test_reshape_examples():
    np.testing.assert_array_equal(geo.reshape_to_2x2(K00), [[1, 0], [0, 0]])
    np.testing.assert_allclose(geo.reshape_to_2x2(PHI), np.eye(2) * S)
    np.testing.assert_array_equal(geo.reshape_to_2x2(K01), [[0, 1], [0, 0]])


def test_is_product_vector_examples():
    assert geo.is_product_vector(K00)
    assert not geo.is_product_vector(PHI)
    assert abs(np.linalg.det(geo.reshape_to_2x2(PHI))) == pytest.approx(0.5)


def test_factorize_examples():
    pv = geo.factorize_product(K01)
    np.testing.assert_allclose(pv.e, [1, 0], atol=1e-15)
    np.testing.assert_allclose(pv.f, [0, 1], atol=1e-15)
    pv = geo.factorize_product((K10 + K11) * S)
    np.testing.assert_allclose(pv.e, [0, 1], atol=1e-15)
    np.testing.assert_allclose(pv.f, [S, S], atol=1e-15)
    with pytest.raises(NotAProductVector):
        geo.factorize_product(PHI)


def test_det_characterization():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        psi = np.kron(unit(rng, 2), unit(rng, 2))
        assert abs(np.linalg.det(geo.reshape_to_2x2(psi))) <= 1e-12
        pv = geo.factorize_product(psi)
        assert same_ray(pv.ket, psi, 1e-12)
    for _ in range(1000):
        psi = unit(rng, 4)
        assert geo.is_product_vector(psi) == (geo.schmidt(psi).c2 <= 1e-10)


def test_schmidt_examples():
    sf = geo.schmidt(PHI)
    assert (sf.c1, sf.c2) == pytest.approx((S, S), abs=1e-15)
    sf = geo.schmidt((K00 + K01) * S)
    assert (sf.c1, sf.c2) == pytest.approx((1, 0), abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_schmidt_invariants(seed):
    psi = unit(np.random.default_rng(seed), 4)
    sf = geo.schmidt(psi)
    assert sf.c1 >= sf.c2 >= 0
    assert sf.c1 ** 2 + sf.c2 ** 2 == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(psi - sf.vector()) <= 1e-12
    for a, b in [(sf.e1, sf.e2), (sf.f1, sf.f2)]:
        assert abs(np.vdot(a, b)) <= 1e-12
        assert np.linalg.norm(a) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(b) == pytest.approx(1.0, abs=1e-12)


def test_plane_examples():
    r = geo.product_states_in_plane(K00, K11)
    assert not r.all_product
    assert sorted((abs(a), abs(b)) for (a, b), _ in r.roots) == [(0, 1), (1, 0)]
    vecs = [pv.ket for pv in r.vectors]
    assert any(same_ray(v, K00) for v in vecs) and any(same_ray(v, K11) for v in vecs)
    assert geo.product_states_in_plane(K00, K01).all_product
    with pytest.raises(DependentInputs):
        geo.product_states_in_plane(K00, 1j * K00)


def test_plane_results_in_span_and_product():
    rng = np.random.default_rng(1)
    for _ in range(200):
        v1, v2 = unit(rng, 4), unit(rng, 4)
        q, _ = np.linalg.qr(np.column_stack([v1, v2]))
        for pv in geo.product_states_in_plane(v1, v2).vectors:
            ket = pv.ket
            assert np.linalg.norm(ket - q @ (q.conj().T @ ket)) <= 1e-10
            assert geo.is_product_vector(ket)


def test_random_planes_contain_a_product():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        r = geo.product_states_in_plane(unit(rng, 4), unit(rng, 4))
        assert r.all_product or len(r.roots) >= 1


def test_two_product_generators_recovered():
    rng = np.random.default_rng(3)
    for _ in range(300):
        v1 = np.kron(unit(rng, 2), unit(rng, 2))
        v2 = np.kron(unit(rng, 2), unit(rng, 2))
        r = geo.product_states_in_plane(v1, v2)
        assert not r.all_product and len(r.roots) == 2
        kets = [pv.ket for pv in r.vectors]
        assert any(same_ray(k, v1, 1e-9) for k in kets) and any(same_ray(k, v2, 1e-9) for k in kets)


def test_common_factor_gives_all_product():
    rng = np.random.default_rng(4)
    for _ in range(100):
        e = unit(rng, 2)
        assert geo.product_states_in_plane(np.kron(e, unit(rng, 2)), np.kron(e, unit(rng, 2))).all_product
        f = unit(rng, 2)
        assert geo.product_states_in_plane(np.kron(unit(rng, 2), f), np.kron(unit(rng, 2), f)).all_product


def test_gen_plane_case_examples():
    v1, v2 = geo.gen_plane_case("P1", math.pi / 2, 0, math.pi / 2, 0)
    r = geo.product_states_in_plane(v1, v2)
    kets = [pv.ket for pv in r.vectors]
    assert any(same_ray(k, K00) for k in kets) and any(same_ray(k, K11) for k in kets)
    _, v2 = geo.gen_plane_case("P2", math.pi / 4, 0, 0)
    np.testing.assert_allclose(v2, [0, S, S, 0], atol=1e-15)
    v1, _ = geo.gen_plane_case("P3", math.pi / 4, 0, 0, 0)
    np.testing.assert_allclose(v1, PHI, atol=1e-15)


def test_gen_plane_case_ranges():
    with pytest.raises(InvalidInput):
        geo.gen_plane_case("P1", 2.0, 0, 0, 0)
    with pytest.raises(InvalidInput):
        geo.gen_plane_case("P2", 0.0, 0, 0)
    with pytest.raises(InvalidInput):
        geo.gen_plane_case("P3", math.pi / 4, 2.0, 0, 0)
    with pytest.raises(InvalidInput):
        geo.gen_plane_case("P4", 0.1)


def test_p2_exactly_one_p1_never_one():
    rng = np.random.default_rng(5)
    for k in range(300):
        A = rng.uniform(0.01, math.pi / 2 - 0.01)
        B = rng.uniform(0, math.pi / 2 - 0.01)
        C = rng.uniform(0, 2 * math.pi)
        r = geo.product_states_in_plane(*geo.gen_plane_case("P2", A, B, C, seed=k))
        assert not r.all_product and len(r.roots) == 1
        A, Cc = rng.uniform(0, math.pi / 2, size=2)
        B, D = rng.uniform(0, 2 * math.pi, size=2)
        r = geo.product_states_in_plane(*geo.gen_plane_case("P1", A, B, Cc, D, seed=k))
        assert r.all_product or len(r.roots) == 2


def test_local_unitary_covariance():
    rng = np.random.default_rng(6)
    for _ in range(100):
        v1, v2 = unit(rng, 4), unit(rng, 4)
        u = np.kron(geo.haar_unitary(rng), geo.haar_unitary(rng))
        before = [u @ pv.ket for pv in geo.product_states_in_plane(v1, v2).vectors]
        after = [pv.ket for pv in geo.product_states_in_plane(u @ v1, u @ v2).vectors]
        assert len(before) == len(after)
        for b in before:
            assert any(same_ray(a, b, 1e-10) for a in after)


def rank3_with_kernel(w, rng):
    w = w / np.linalg.norm(w)
    q, _ = np.linalg.qr(np.column_stack([w, rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))]))
    basis = q[:, 1:]
    rho = basis @ np.diag(rng.uniform(0.5, 1.5, 3)) @ basis.conj().T
    return rho / np.trace(rho).real


def test_product_in_range_examples():
    rng = np.random.default_rng(7)
    rho = rank3_with_kernel(K11.copy(), rng)
    # kernel |11>, t = 0: g = W^dagger e vanishes, so f is not determined
    with pytest.raises(DegenerateParameter):
        geo.product_in_range(rho, 0)
    pv = geo.product_in_range(rho, 0.5)
    assert abs(np.vdot(K11, pv.ket)) <= 1e-12
    rho = rank3_with_kernel(PHI.copy(), rng)
    pv = geo.product_in_range(rho, 1)
    assert abs(np.vdot(PHI, pv.ket)) <= 1e-12


def test_product_in_range_property():
    rng = np.random.default_rng(8)
    for _ in range(200):
        rho = rank3_with_kernel(unit(rng, 4), rng)
        t = complex(*rng.normal(size=2))
        pv = geo.product_in_range(rho, t)
        proj = np.eye(4) - np.outer(geo._kernel_vector(rho, 1e-9), geo._kernel_vector(rho, 1e-9).conj())
        assert geo.is_product_vector(pv.ket)
        assert np.linalg.norm(pv.ket - proj @ pv.ket) <= 1e-10
    rho = rank3_with_kernel(unit(rng, 4), rng)
    pv = geo.product_in_range(rho, math.inf)
    np.testing.assert_allclose(pv.e, [0, 1])


def _both_residuals(rho, rho_pt, pv):
    w = geo._kernel_vector(rho, 1e-9)
    u = geo._kernel_vector(rho_pt, 1e-9)
    return abs(np.vdot(w, pv.ket)), abs(np.vdot(u, pv.conj_b().ket))


def test_both_ranges_real_case():
    rng = np.random.default_rng(9)
    rho = rank3_with_kernel(K11.copy(), rng).real.astype(complex)
    pv = geo.product_in_both_ranges(rho, rho)
    assert max(_both_residuals(rho, rho, pv)) <= 1e-10


def test_both_ranges_three_term_mixtures():
    ok = 0
    for seed in range(100):
        rho = qstate.random_separable(seed, 3).matrix
        pt = septest.pt_matrix(rho)
        pv = geo.product_in_both_ranges(rho, pt)
        assert max(_both_residuals(rho, pt, pv)) <= 1e-8
        ok += 1
    assert ok == 100


def test_both_ranges_deterministic():
    rho = qstate.random_separable(11, 3).matrix
    pt = septest.pt_matrix(rho)
    a = geo.product_in_both_ranges(rho, pt)
    b = geo.product_in_both_ranges(rho, pt)
    np.testing.assert_array_equal(a.ket, b.ket)
