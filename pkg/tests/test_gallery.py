import numpy as np
import pytest

from unisign import gallery
from unisign.exceptions import DomainError
from unisign.linalg import UNIT_ROUNDOFF, fro, unitarity_defect
from unisign.sign import spectral_angle


@pytest.mark.parametrize("name", gallery.NAMES)
@pytest.mark.parametrize("m", [1, 2, 5, 64, 100])
def test_unitary(name, m):
    assert unitarity_defect(gallery.build(name, m)) <= 50 * m * UNIT_ROUNDOFF


def test_small_cases():
    assert np.allclose(gallery.dft_matrix(1), [[1]])
    assert np.allclose(gallery.cyclic_shift(2), [[0, 1], [1, 0]])
    assert np.allclose(gallery.orthog_minus2(1), [[1]])


def test_dft_entries():
    m = 6
    j = np.arange(m)
    want = np.exp(2j * np.pi * np.outer(j, j) / m) / np.sqrt(m)
    assert np.allclose(gallery.dft_matrix(m), want, atol=1e-15)


@pytest.mark.parametrize("m", [4, 8, 16])
def test_dft_fourth_power(m):
    f = gallery.dft_matrix(m)
    assert fro(np.linalg.matrix_power(f, 4) - np.eye(m)) <= 200 * m * UNIT_ROUNDOFF


def test_dft4_spectrum():
    lam = np.linalg.eigvals(gallery.dft_matrix(4))
    # fourth roots of unity; for m = 4 the eigenvalue 1 is double and -i is absent
    assert np.allclose(lam**4, 1, atol=1e-13)
    assert sorted(np.round(np.angle(lam) / (np.pi / 2)).astype(int) % 4) == [0, 0, 1, 2]


def test_shift_structure():
    s = gallery.cyclic_shift(5)
    assert np.array_equal(s, np.roll(np.eye(5), 1, axis=0))
    lam = np.linalg.eigvals(gallery.cyclic_shift(4))
    assert np.allclose(sorted(np.angle(lam) % (2 * np.pi)), [0, np.pi / 2, np.pi, 3 * np.pi / 2],
                       atol=1e-12)


def test_orthog_is_real_orthogonal_cosine():
    m = 10
    a = gallery.orthog_minus2(m)
    assert np.all(a.imag == 0)
    j = np.arange(m)
    raw = np.cos(np.outer(j + 0.5, j) * np.pi / m)
    assert np.allclose(a.real, raw / np.linalg.norm(raw, axis=0), atol=1e-15)


def test_spectral_gaps_at_100():
    gaps = {n: spectral_angle(gallery.build(n, 100)).gap for n in gallery.NAMES}
    assert gaps["haar"] == pytest.approx(0.026, abs=1e-3)
    assert gaps["dft"] <= 1e-14
    assert gaps["shift"] <= 10 * UNIT_ROUNDOFF
    assert gaps["orthog2"] == pytest.approx(0.95, abs=1e-2)


def test_build_errors():
    with pytest.raises(DomainError):
        gallery.build("hilbert", 4)
    with pytest.raises(DomainError):
        gallery.dft_matrix(0)
