import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from unisign import eig as eig_mod, gallery
from unisign.eig import (divide_and_conquer, gap_bisecting_phase, invariant_subspaces,
                         rotation_phase)
from unisign.exceptions import BalanceError, DecouplingError
from unisign.linalg import UNIT_ROUNDOFF, ctranspose, fro, haar_unitary
from unisign.sign import IterationConfig, zolo_sign

u = UNIT_ROUNDOFF


class TestRotationPhase:
    def test_median_of_three(self):
        assert rotation_phase(np.diag([1, 1j, -1])) == pytest.approx(0.0, abs=1e-15)

    def test_identity(self):
        assert rotation_phase(np.eye(4)) == pytest.approx(math.pi / 2)

    def test_lower_median(self):
        # args 0.1, 0.2, 0.3, 0.4 -> lower median 0.2
        a = np.diag(np.exp(1j * np.array([0.4, 0.1, 0.3, 0.2])))
        assert rotation_phase(a) == pytest.approx(math.pi / 2 - 0.2)

    def test_small_entries_skipped(self):
        a = np.diag([1e-6, 1e-6, 1j]).astype(complex)
        assert rotation_phase(a) == pytest.approx(0.0, abs=1e-15)

    def test_all_skipped(self):
        assert rotation_phase(gallery.cyclic_shift(5)) == 0.0

    def test_gap_bisection(self):
        a = np.diag(np.exp(1j * np.array([0.0, 0.5, 1.0])))
        # widest gap runs from 1.0 round to 2 pi; its middle is 1.0 + (2 pi - 1) / 2
        assert gap_bisecting_phase(a) == pytest.approx(math.pi / 2 - (0.5 + math.pi))
        assert gap_bisecting_phase(np.eye(1)) is None

    def test_dft(self):
        phi = rotation_phase(gallery.dft_matrix(8))
        assert math.isfinite(phi) and abs(phi) <= 3 * math.pi / 2


class TestInvariantSubspaces:
    def test_diagonal_projector(self):
        a = np.diag([1.0, 1j, -1.0])
        u1, u2, m1 = invariant_subspaces(np.diag([1.0, 1.0, 0.0]), a)
        assert m1 == 2
        assert np.allclose(np.abs(u1), np.eye(3)[:, :2])
        assert np.allclose(np.abs(u2), np.eye(3)[:, 2:])

    def test_zero_projector(self):
        u1, u2, m1 = invariant_subspaces(np.zeros((3, 3)), np.eye(3))
        assert m1 == 0 and u1.shape == (3, 0) and u2.shape == (3, 3)

    def test_haar(self):
        a = haar_unitary(40, 0)
        s = zolo_sign(a).s
        u1, u2, m1 = invariant_subspaces(0.5 * (np.eye(40) + s), a)
        assert 0 < m1 < 40
        assert fro(ctranspose(u2) @ a @ u1) <= 100 * 40 * u * fro(a)
        assert fro(ctranspose(np.hstack([u1, u2])) @ np.hstack([u1, u2]) - np.eye(40)) <= 1e-13

    def test_unrelated_projector(self):
        a = haar_unitary(10, 1)
        q = haar_unitary(10, 2)[:, :4]
        with pytest.raises(DecouplingError) as exc:
            invariant_subspaces(q @ ctranspose(q), a)
        assert exc.value.residual > 0


def reconstruct_error(a, dec):
    return fro(a - dec.reconstruct()), fro(ctranspose(dec.v) @ dec.v - np.eye(a.shape[0]))


class TestDivideAndConquer:
    def test_one_by_one(self):
        dec = divide_and_conquer(np.array([[1j]]))
        assert dec.lam[0] == 1j and dec.v[0, 0] == 1

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_two_by_two(self, seed):
        a = haar_unitary(2, seed)
        dec = divide_and_conquer(a)
        res, orth = reconstruct_error(a, dec)
        assert res <= 1e-14 and orth <= 1e-14

    @pytest.mark.parametrize("sep", [1e-4, 1e-8, 1e-12])
    def test_two_by_two_close_eigenvalues(self, sep):
        q = haar_unitary(2, 5)
        a = q @ np.diag(np.exp(1j * np.array([0.3, 0.3 + sep]))) @ ctranspose(q)
        dec = divide_and_conquer(a)
        assert max(dec.residuals(a)) <= 1e-15
        assert np.allclose(np.sort(np.angle(dec.lam)), [0.3, 0.3 + sep], rtol=0, atol=1e-15)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from([0.0, 0.5, math.pi / 2, -math.pi / 2, math.pi, 2.0]),
                              st.sampled_from([0.0, 1e-16, 1e-12, 1e-8, 1e-3])),
                    min_size=3, max_size=16),
           st.integers(0, 1000))
    def test_clustered_rotated_spectrum(self, pairs, seed):
        phi = np.array([b + (k % 3 - 1) * e for k, (b, e) in enumerate(pairs)])
        q = haar_unitary(len(phi), seed)
        a = q @ np.diag(np.exp(1j * phi)) @ ctranspose(q)
        dec = divide_and_conquer(a)
        assert max(dec.residuals(a)) <= 1e-12

    def test_scalar_cluster(self):
        alpha = 0.7
        a = cmath.exp(1j * alpha) * np.eye(6)
        dec = divide_and_conquer(a)
        assert np.array_equal(dec.v, np.eye(6))
        assert np.allclose(dec.lam, cmath.exp(1j * alpha))

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(-math.pi, math.pi), min_size=3, max_size=20, unique=True))
    def test_diagonal_multiset(self, phi):
        a = np.diag(np.exp(1j * np.array(phi)))
        dec = divide_and_conquer(a)
        got = np.sort_complex(dec.lam)
        want = np.sort_complex(np.diagonal(a))
        # sort_complex orders by real part first; match on nearest instead for robustness
        dist = np.abs(got[:, None] - want[None, :])
        assert dist.min(axis=1).max() <= 1e-12 and dist.min(axis=0).max() <= 1e-12
        res, orth = reconstruct_error(a, dec)
        assert res <= 1e-13 * len(phi) and orth <= 1e-13

    def test_median_line_through_cluster(self):
        # the median rotation sends the double eigenvalue 1 exactly onto i
        a = np.diag(np.exp(1j * np.array([0.0, 0.5, 6.123233995736766e-17])))
        dec = divide_and_conquer(a)
        assert max(dec.residuals(a)) <= 1e-13

    def test_diagonal_gives_near_permutation(self):
        a = np.diag(np.exp(1j * np.linspace(-3, 3, 9)))
        dec = divide_and_conquer(a)
        mags = np.abs(dec.v)
        assert np.allclose(np.sort(mags, axis=0)[-1], 1.0, atol=1e-12)

    @pytest.mark.parametrize("name", gallery.NAMES)
    def test_galleries(self, name):
        a = gallery.build(name, 100)
        dec = divide_and_conquer(a, IterationConfig(n=1))
        res, orth = reconstruct_error(a, dec)
        assert res <= 1e-12 * 100 and orth <= 1e-12 * 100
        res2, orth2 = dec.residuals(a)
        assert res2 <= 1e-12 and orth2 <= 1e-12
        assert np.allclose(np.abs(dec.lam), 1.0, atol=1e-10)

    def test_dft4_spectrum(self):
        dec = divide_and_conquer(gallery.dft_matrix(4))
        lam = dec.lam
        assert np.allclose(lam**4, 1, atol=1e-12)
        assert np.allclose(np.sort_complex(np.round(lam, 10)),
                           np.sort_complex(np.round(np.linalg.eigvals(gallery.dft_matrix(4)), 10)))

    def test_perturbed_shift(self):
        rng = np.random.Generator(np.random.Philox(0))
        a = gallery.cyclic_shift(64) + 2 * u * rng.standard_normal((64, 64))
        dec = divide_and_conquer(a)
        assert max(dec.residuals(a)) <= 1e-12

    @pytest.mark.parametrize("method", ["pade", "direct", "newton"])
    def test_other_backends(self, method):
        a = haar_unitary(50, 6)
        dec = divide_and_conquer(a, sign_method=method)
        assert max(dec.residuals(a)) <= 1e-12

    def test_nearly_scalar_forced_cluster(self, monkeypatch):
        # a block that never splits but is within sqrt(u) of scalar
        class Fake:
            def __init__(self, m):
                self.s = np.eye(m)

        q = haar_unitary(3, 2)
        a = q @ np.diag(np.exp(1j * np.array([0.0, 1e-10, 2e-9]))) @ ctranspose(q)
        monkeypatch.setattr(eig_mod, "run_sign", lambda method, x, cfg: Fake(x.shape[0]))
        dec = divide_and_conquer(a)
        assert sum("retry" in note for note in dec.notes) == 6
        assert any("forced cluster" in note for note in dec.notes)
        # the rotated block is not diagonal, yet the residual is at rounding level
        assert max(dec.residuals(a)) <= 1e-14
        assert np.allclose(np.sort(np.angle(dec.lam)), [0.0, 1e-10, 2e-9], rtol=0, atol=1e-14)

    def test_balance_error(self, monkeypatch):
        class Fake:
            def __init__(self, m):
                self.s = np.eye(m)

        monkeypatch.setattr(eig_mod, "run_sign", lambda method, x, cfg: Fake(x.shape[0]))
        with pytest.raises(BalanceError) as exc:
            divide_and_conquer(haar_unitary(5, 0))
        assert exc.value.path == "root"

    def test_decoupling_propagates_with_path(self, monkeypatch):
        def fail(p, a):
            raise DecouplingError("no", residual=1.0)

        monkeypatch.setattr(eig_mod, "invariant_subspaces", fail)
        with pytest.raises(DecouplingError) as exc:
            divide_and_conquer(haar_unitary(6, 0))
        assert exc.value.path == "root"

    def test_retry_notes(self, monkeypatch):
        real = eig_mod.run_sign
        calls = {"n": 0}

        def first_bad(method, x, cfg):
            calls["n"] += 1
            if calls["n"] == 1:
                class Fake:
                    s = np.eye(x.shape[0])
                return Fake()
            return real(method, x, cfg)

        monkeypatch.setattr(eig_mod, "run_sign", first_bad)
        a = haar_unitary(8, 1)
        dec = divide_and_conquer(a)
        assert any("retry 1" in note for note in dec.notes)
        assert max(dec.residuals(a)) <= 1e-12
