import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from unisign.exceptions import DomainError, SingularityError
from unisign.linalg import (UNIT_ROUNDOFF, as_matrix, check_unitary, ctranspose, fro,
                            gaussian_matrix, haar_unitary, hermitian_eig, qq_transform, qr,
                            qr_pivoted, two_norm, unitarity_defect)

u = UNIT_ROUNDOFF


def explicit_b_binv_star(b):
    # B (B^*)^{-1} via a linear solve: conj(B) X^T = B^T
    return scipy.linalg.solve(b.conj(), b.T).T


class TestValidation:
    def test_as_matrix(self):
        assert as_matrix([[1, 2], [3, 4]]).dtype == np.complex128
        with pytest.raises(DomainError):
            as_matrix(np.ones((2, 3)))
        with pytest.raises(DomainError):
            as_matrix(np.zeros((0, 0)))
        with pytest.raises(DomainError):
            as_matrix([[np.nan]])

    def test_check_unitary(self):
        check_unitary(np.eye(3))
        with pytest.raises(DomainError):
            check_unitary(2 * np.eye(3))


class TestQR:
    def test_identity(self):
        q, r = qr(np.eye(3))
        assert np.allclose(q, np.eye(3)) and np.allclose(r, np.eye(3))

    def test_phase_moves_to_q(self):
        q, r = qr(np.diag([2j, 1.0]))
        assert np.allclose(q, np.diag([1j, 1.0]), atol=1e-15)
        assert np.allclose(r, np.diag([2.0, 1.0]), atol=1e-15)

    @given(st.integers(1, 12), st.integers(0, 10_000))
    def test_invariants(self, m, seed):
        a = gaussian_matrix(m, m, seed)
        q, r = qr(a)
        assert fro(q @ r - a) <= 50 * m * u * fro(a)
        assert unitarity_defect(q) <= 50 * m * u
        assert np.all(np.tril(r, -1) == 0)
        d = np.diagonal(r)
        assert np.all(d.imag == 0) and np.all(d.real >= 0)

    def test_rank_deficient_allowed(self):
        q, r = qr(np.zeros((3, 3)))
        assert unitarity_defect(q) <= 1e-14

    def test_pivoted(self):
        a = gaussian_matrix(6, 6, 3)
        q, r, piv = qr_pivoted(a)
        assert fro(q @ r - a[:, piv]) <= 1e-13


class TestQQTransform:
    def test_identity(self):
        assert np.allclose(qq_transform(np.eye(4), 2.5), np.eye(4), atol=1e-15)

    def test_diagonal_scalar_formula(self):
        phi = np.array([0.1, 1.0, 2.0, -2.5])
        x = np.diag(np.exp(1j * phi))
        a = 1.7
        z2 = np.exp(2j * phi)
        assert np.allclose(np.diagonal(qq_transform(x, a)), (z2 + a) / (1 + a * z2), atol=1e-14)

    def test_singular(self):
        with pytest.raises(SingularityError) as exc:
            qq_transform(np.array([[1j]]), 1.0)  # X + X^* = 0
        assert exc.value.a == 1.0

    def test_bad_a(self):
        with pytest.raises(DomainError):
            qq_transform(np.eye(2), 0.0)

    @settings(max_examples=20)
    @given(st.integers(0, 10_000))
    def test_qr_lemma_on_normal_matrices(self, seed):
        rng = np.random.Generator(np.random.Philox(seed))
        v = haar_unitary(15, seed)
        d = rng.uniform(0.5, 2.0, 15) * np.exp(1j * rng.uniform(-np.pi, np.pi, 15))
        b = (v * d) @ ctranspose(v)
        prod = qr(b).q @ ctranspose(qr(ctranspose(b)).q)
        assert fro(prod - explicit_b_binv_star(b)) <= 1e-12

    @given(st.integers(0, 1000), st.floats(0.05, 20.0))
    def test_unitary_result(self, seed, a):
        x = haar_unitary(10, seed)
        v = qq_transform(x, a)
        assert unitarity_defect(v) <= 50 * 10 * u
        b = x + a * ctranspose(x)
        assert fro(v - explicit_b_binv_star(b)) <= 1e-10 * np.linalg.cond(b)


class TestHermitianEig:
    def test_diagonal(self):
        values, vectors = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(values, [1, 2, 3])
        assert np.allclose(np.abs(vectors), np.eye(3)[:, [1, 2, 0]])

    def test_reflection(self):
        assert np.allclose(hermitian_eig(np.array([[0, 1], [1, 0]])).values, [-1, 1])

    @pytest.mark.parametrize("m", [1, 7, 50])
    def test_residuals(self, m):
        a = haar_unitary(m, 5)
        b = 0.5 * (a + ctranspose(a))
        values, v = hermitian_eig(b)
        assert np.all(np.diff(values) >= 0)
        assert fro(b @ v - v * values) <= 100 * m * u * max(fro(b), 1.0)
        assert unitarity_defect(v) <= 50 * m * u


class TestTwoNorm:
    def test_diagonal(self):
        assert two_norm(np.diag([1, -3, 2j])) == pytest.approx(3.0, rel=1e-6)

    def test_zero(self):
        assert two_norm(np.zeros((4, 4))) == 0.0

    @given(st.integers(2, 20), st.integers(0, 1000))
    def test_against_svd(self, m, seed):
        a = gaussian_matrix(m, m, seed)
        exact = np.linalg.svd(a, compute_uv=False)[0]
        est = two_norm(a)
        assert est >= (1 - 1e-5) * exact - 1e-15
        assert est <= exact * (1 + 1e-12)
        assert est <= fro(a) * (1 + 1e-12) <= np.sqrt(m) * exact * (1 + 1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_unitary(self, seed):
        assert two_norm(haar_unitary(30, seed)) == pytest.approx(1.0, abs=1e-6)

    def test_deterministic(self):
        a = gaussian_matrix(9, 9, 1)
        assert two_norm(a) == two_norm(a)


class TestRandom:
    def test_gaussian_moments(self):
        g = gaussian_matrix(200, 200, 0)
        assert abs(g.mean()) < 0.02
        assert np.mean(np.abs(g) ** 2) == pytest.approx(1.0, abs=0.02)
        assert np.mean(g.real * g.imag) == pytest.approx(0.0, abs=0.02)

    def test_haar_one(self):
        q = haar_unitary(1, 4)
        assert abs(abs(q[0, 0]) - 1.0) <= 1e-15

    @pytest.mark.parametrize("seed", [0, 1, 99])
    def test_haar_unitary(self, seed):
        assert unitarity_defect(haar_unitary(30, seed)) <= 50 * 30 * u

    def test_determinism(self):
        assert np.array_equal(haar_unitary(8, 3), haar_unitary(8, 3))
        assert not np.array_equal(haar_unitary(8, 3), haar_unitary(8, 4))

    def test_haar_phases_uniform(self):
        # eigenvalue phases of a Haar matrix are spread around the circle
        phases = np.angle(np.linalg.eigvals(haar_unitary(200, 2)))
        hist, _ = np.histogram(phases, bins=4, range=(-np.pi, np.pi))
        assert hist.min() > 30

    def test_bad_dim(self):
        with pytest.raises(DomainError):
            haar_unitary(0, 1)
