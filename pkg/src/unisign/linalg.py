"""Dense complex matrix kernels used by the iterations and the metrics.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Factorizations
are delegated to LAPACK through numpy/scipy; what this module adds are the
conventions the algorithms depend on (real nonnegative ``diag(R)``, ascending
eigenvalues, reproducible random streams) and the checks around them.
"""
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .exceptions import ConvergenceError, DomainError, SingularityError

__all__ = [
    "UNIT_ROUNDOFF",
    "QRFactors",
    "HermitianEig",
    "as_matrix",
    "fro",
    "ctranspose",
    "qr",
    "qr_pivoted",
    "qq_transform",
    "hermitian_eig",
    "two_norm",
    "gaussian_matrix",
    "haar_unitary",
    "unitarity_defect",
    "check_unitary",
]

UNIT_ROUNDOFF = 2.0**-53


class QRFactors(NamedTuple):
    q: np.ndarray
    r: np.ndarray


class HermitianEig(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a, name="matrix"):
    """Return ``a`` as a square, finite ``complex128`` array (copying if needed)."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"{name} must be square, got shape {a.shape}")
    if a.shape[0] == 0:
        raise DomainError(f"{name} must be at least 1x1")
    a = a.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} has non-finite entries")
    return a


def ctranspose(a):
    return a.conj().T


def fro(a):
    return float(np.linalg.norm(a, "fro"))


def unitarity_defect(x):
    """``||X^* X - I||_F``."""
    return fro(ctranspose(x) @ x - np.eye(x.shape[0]))


def check_unitary(a, name="matrix", tol=None):
    """Validate ``a`` with :func:`as_matrix` and require ``||A^* A - I||_F <= tol``.

    The default tolerance is ``100 m u``.
    """
    a = as_matrix(a, name)
    m = a.shape[0]
    tol = 100.0 * m * UNIT_ROUNDOFF if tol is None else tol
    defect = unitarity_defect(a)
    if not defect <= tol:
        raise DomainError(f"{name} is not unitary: ||A^* A - I||_F = {defect:.3e} > {tol:.3e}")
    return a


def qr(a):
    """Householder QR with ``diag(R)`` real and nonnegative.

    The normalization makes R the Cholesky factor of ``A^* A`` whenever A is
    nonsingular, which is what lets two factorizations of a normal matrix and
    of its adjoint share the same R.
    """
    a = np.asarray(a, dtype=np.complex128)
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    mag = np.abs(d)
    phase = np.ones_like(d)
    nz = mag > 0
    phase[nz] = d[nz] / mag[nz]
    return QRFactors(q * phase, phase.conj()[:, None] * r)


def qr_pivoted(a):
    """Column-pivoted QR, ``A[:, piv] = Q R``; returns ``(q, r, piv)``."""
    q, r, piv = scipy.linalg.qr(np.asarray(a, dtype=np.complex128), pivoting=True)
    return q, r, piv


def qq_transform(x, a):
    """Unitary ``(X + a X^*)(X^* + a X)^{-1}`` for unitary ``X`` and ``a > 0``.

    Formed as ``Q1 Q2^*`` from the QR factorizations ``Q1 R1 = X + a X^*`` and
    ``Q2 R2 = X^* + a X``; for normal nonsingular ``B = X + a X^*`` this equals
    ``B B^{-*}`` and is unitary to working precision regardless of rounding.
    """
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    xh = ctranspose(x)
    b1 = x + a * xh
    q1, r1 = qr(b1)
    q2, r2 = qr(xh + a * x)
    m = x.shape[0]
    floor = m * UNIT_ROUNDOFF * fro(b1)
    if min(np.abs(np.diagonal(r1)).min(), np.abs(np.diagonal(r2)).min()) <= floor:
        raise SingularityError(f"X + a X^* is numerically singular for a = {a!r}", a=a)
    return q1 @ ctranspose(q2)


def hermitian_eig(b):
    """Eigendecomposition of a (numerically) Hermitian matrix, values ascending."""
    b = np.asarray(b, dtype=np.complex128)
    b = 0.5 * (b + ctranspose(b))
    try:
        values, vectors = np.linalg.eigh(b)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"Hermitian eigensolver failed: {exc}") from exc
    return HermitianEig(values, vectors)


def two_norm(a, rtol=1e-6, max_iter=100, seed=0):
    """Largest singular value by power iteration on ``A^* A``.

    The start vector is drawn from a seeded stream, so repeated calls on the
    same matrix return identical values.  Stops once successive estimates
    agree to ``rtol``; returns the latest estimate at the iteration cap.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[1]
    if not np.any(a):
        return 0.0
    x = gaussian_matrix(n, 1, seed)[:, 0]
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(max_iter):
        y = a @ x
        new = float(np.linalg.norm(y))
        z = ctranspose(a) @ y
        nz = np.linalg.norm(z)
        if nz == 0.0:
            # start vector in the null space; restart from a fresh draw
            x = gaussian_matrix(n, 1, seed + 1)[:, 0]
            x /= np.linalg.norm(x)
            continue
        x = z / nz
        if abs(new - est) <= rtol * new:
            est = new
            break
        est = new
    # one last application of the refined vector never decreases the estimate much
    return max(est, float(np.linalg.norm(a @ x)))


def gaussian_matrix(m, n, seed):
    """``m x n`` standard complex Gaussian matrix from a Philox stream.

    Uniforms come from the counter-based Philox4x64 generator and are turned
    into normals with the Box-Muller transform, one complex entry per pair.
    """
    gen = np.random.Generator(np.random.Philox(int(seed)))
    u = gen.random((2, m, n))
    radius = np.sqrt(-2.0 * np.log1p(-u[0]))  # 1 - u lies in (0, 1]
    angle = 2.0 * np.pi * u[1]
    return (radius * np.cos(angle) + 1j * radius * np.sin(angle)) / np.sqrt(2.0)


def haar_unitary(m, seed):
    """Haar-distributed ``m x m`` unitary matrix, deterministic in ``seed``."""
    m = int(m)
    if m < 1:
        raise DomainError(f"dimension must be positive, got {m}")
    return qr(gaussian_matrix(m, m, seed)).q
