"""Spectral divide-and-conquer eigendecomposition of unitary matrices.

A unitary ``A`` is rotated so that the line through ``+-i`` halves its
spectrum, the sign of the rotated matrix gives the spectral projector
``P = (I + S)/2``, and the two invariant subspaces of ``P`` reduce ``A`` to
two smaller unitary blocks that are solved recursively.
"""
import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import BalanceError, ConvergenceError, DecouplingError, SingularityError
from .linalg import UNIT_ROUNDOFF, as_matrix, ctranspose, fro, hermitian_eig, qr, qr_pivoted
from .sign import IterationConfig, run_sign

__all__ = [
    "UnitaryEigendecomposition",
    "rotation_phase",
    "gap_bisecting_phase",
    "invariant_subspaces",
    "divide_and_conquer",
    "GOLDEN_ANGLE",
]

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
MAX_RETRIES = 5
REFINE_PASSES = 2


@dataclass
class UnitaryEigendecomposition:
    """``A = V diag(lam) V^*``.

    Attributes
    ----------
    v : ndarray
        Eigenvectors as columns.
    lam : ndarray
        Eigenvalues, in the order of the columns of ``v``.
    notes : list of str
        Retries and forced base cases encountered during the recursion.
    """

    v: np.ndarray
    lam: np.ndarray
    notes: list = field(default_factory=list)

    def reconstruct(self):
        return (self.v * self.lam) @ ctranspose(self.v)

    def residuals(self, a):
        """``(||A - V Lam V^*||_2, ||V^* V - I||_2)``."""
        a = as_matrix(a)
        eye = np.eye(a.shape[0])
        return (float(np.linalg.norm(a - self.reconstruct(), 2)),
                float(np.linalg.norm(ctranspose(self.v) @ self.v - eye, 2)))


def rotation_phase(a):
    """Rotation ``phi = pi/2 - median(arg a_jj)`` that centres the diagonal on ``i``.

    The lower median is used for even counts.  Diagonal entries with modulus
    below ``1e-3 ||A||_F`` carry no usable argument and are skipped; if none
    remain, ``phi = 0``.
    """
    a = as_matrix(a)
    d = np.diagonal(a)
    keep = np.abs(d) >= 1e-3 * fro(a)
    if not np.any(keep):
        return 0.0
    args = np.angle(d[keep])
    # np.angle returns -pi for negative reals with a -0 imaginary part
    args = np.where(args == -math.pi, math.pi, args)
    args.sort()
    return float(math.pi / 2 - args[(len(args) - 1) // 2])


def gap_bisecting_phase(a):
    """Rotation that puts ``i`` in the middle of the widest circular gap between
    the arguments of the diagonal entries (same modulus filter as
    :func:`rotation_phase`); ``None`` when fewer than two entries qualify."""
    d = np.diagonal(a)
    keep = np.abs(d) >= 1e-3 * fro(a)
    if np.count_nonzero(keep) < 2:
        return None
    args = np.sort(np.angle(d[keep]))
    gaps = np.diff(np.append(args, args[0] + 2 * math.pi))
    j = int(np.argmax(gaps))
    return float(math.pi / 2 - (args[j] + 0.5 * gaps[j]))


def _offdiag(u1, u2, a):
    if u1.shape[1] == 0 or u2.shape[1] == 0:
        return 0.0
    return fro(ctranspose(u2) @ a @ u1)


def invariant_subspaces(p, a):
    """Orthonormal bases of ``range(P)`` and its complement.

    ``m1 = round(Re tr P)``; the first ``m1`` columns of the pivoted-QR ``Q``
    of ``P`` form ``U1`` and the rest ``U2``.  The split is accepted once
    ``||U2^* A U1||_F <= 100 m u ||A||_F``.  Otherwise up to two refinement
    passes replace ``[U1 | U2]`` by ``[P U1 | (I - P) U2]`` re-orthonormalized.

    Returns
    -------
    u1, u2 : ndarray
    m1 : int

    Raises
    ------
    DecouplingError
        If the off-diagonal block is still too large after the passes.
    """
    p = as_matrix(p, "projector")
    a = as_matrix(a)
    m = a.shape[0]
    m1 = int(round(float(np.trace(p).real)))
    m1 = min(max(m1, 0), m)
    q, _, _ = qr_pivoted(p)
    u1, u2 = q[:, :m1], q[:, m1:]
    tol = 100.0 * m * UNIT_ROUNDOFF * fro(a)
    res = _offdiag(u1, u2, a)
    eye = np.eye(m)
    for _ in range(REFINE_PASSES):
        if res <= tol:
            break
        q = qr(np.hstack([p @ u1, (eye - p) @ u2])).q
        u1, u2 = q[:, :m1], q[:, m1:]
        res = _offdiag(u1, u2, a)
    if res > tol:
        raise DecouplingError(
            f"invariant subspaces do not decouple A: ||U2^* A U1||_F = {res:.3e} > {tol:.3e}",
            residual=res)
    return u1, u2, m1


def _closed_form_2x2(a):
    # shift by the mean so the discriminant is formed from O(|l1 - l2|) terms;
    # tr^2 - 4 det would cancel to sqrt(u) accuracy for close eigenvalues
    mu = 0.5 * (a[0, 0] + a[1, 1])
    half = 0.5 * (a[0, 0] - a[1, 1])
    delta = cmath.sqrt(half * half + a[0, 1] * a[1, 0])
    vecs = []
    for d in (delta, -delta):
        # null vector of A - lam I from whichever row is larger
        r0 = np.array([half - d, a[0, 1]])
        r1 = np.array([a[1, 0], -half - d])
        row = r0 if np.linalg.norm(r0) >= np.linalg.norm(r1) else r1
        v = np.array([-row[1], row[0]], dtype=np.complex128)
        vecs.append(v / np.linalg.norm(v))
    v = np.column_stack(vecs)
    # A is normal, so eigenvectors are orthogonal; re-orthonormalize against rounding
    q = qr(v).q
    lam = np.array([np.vdot(q[:, j], a @ q[:, j]) for j in range(2)])
    return q, lam


def _is_cluster(a):
    m = a.shape[0]
    return fro(a - a[0, 0] * np.eye(m)) <= 1e3 * m * UNIT_ROUNDOFF


def _cluster(a):
    return np.eye(a.shape[0], dtype=np.complex128), np.diagonal(a).copy()


def _near_scalar_eig(a):
    # Rotate the cluster onto 1; the Hermitian K = (B - B^*)/(2i) shares the
    # eigenvectors of the normal B and has eigenvalues sin(eps_j), ordered like
    # the eps_j.  eigh resolves them relative to ||K||, not to ||A|| = 1.
    tr = np.trace(a)
    b = a * (np.conj(tr) / abs(tr)) if tr != 0 else a
    _, v = hermitian_eig((b - ctranspose(b)) / 2j)
    lam = np.einsum("ij,ij->j", v.conj(), a @ v)
    return v, lam


def _nearly_scalar(a):
    # weaker than the cluster test: used only once every rotation has failed
    m = a.shape[0]
    mu = np.trace(a) / m
    return fro(a - mu * np.eye(m)) <= math.sqrt(UNIT_ROUNDOFF) * math.sqrt(m)


def _solve(a, cfg, sign_method, path, depth, notes, limit):
    m = a.shape[0]
    assert depth <= limit, "recursion deeper than the matrix dimension"
    if m == 1:
        return np.ones((1, 1), dtype=np.complex128), np.diagonal(a).copy()
    if _is_cluster(a):
        return _cluster(a)
    if m == 2:
        return _closed_form_2x2(a)
    phi = rotation_phase(a)
    last = None
    for attempt in range(MAX_RETRIES + 1):
        rotated = cmath.exp(1j * phi) * a
        try:
            s = run_sign(sign_method, rotated, cfg).s
            p = 0.5 * (np.eye(m) + s)
            u1, u2, m1 = invariant_subspaces(p, a)
        except (DecouplingError, SingularityError, ConvergenceError) as exc:
            last = exc
            m1 = None
        if m1 is not None:
            if 0 < m1 < m:
                break
            last = None
        notes.append(f"{path or 'root'}: retry {attempt + 1} with phase offset")
        bisect = gap_bisecting_phase(a) if attempt == 0 else None
        phi = bisect if bisect is not None else phi + GOLDEN_ANGLE
    else:
        if _nearly_scalar(a):
            notes.append(f"{path or 'root'}: forced cluster base case")
            return _near_scalar_eig(a)
        if last is not None:
            last.path = path or "root"
            raise last
        raise BalanceError(f"no balanced split found at {path or 'root'}", path=path or "root")
    a1 = ctranspose(u1) @ a @ u1
    a2 = ctranspose(u2) @ a @ u2
    v1, l1 = _solve(a1, cfg, sign_method, path + "1", depth + 1, notes, limit)
    v2, l2 = _solve(a2, cfg, sign_method, path + "2", depth + 1, notes, limit)
    v = np.hstack([u1 @ v1, u2 @ v2])
    return v, np.concatenate([l1, l2])


def divide_and_conquer(a, cfg=None, sign_method="zolo"):
    """Eigendecomposition ``A = V Lam V^*`` of a unitary matrix.

    Parameters
    ----------
    a : (m, m) array_like
        Unitary matrix (to about ``100 m u``).
    cfg : IterationConfig, optional
        Passed to the sign iteration.
    sign_method : {"zolo", "pade", "newton", "direct"}
        Backend used for ``sign(exp(i phi) A)``.

    Returns
    -------
    UnitaryEigendecomposition

    Notes
    -----
    A split is degenerate when the sign iteration fails or puts the whole
    block on one side (``m1`` in ``{0, m}``).  Up to five retries follow: the
    first bisects the widest gap between diagonal arguments, later ones add
    the golden angle to the phase.  If all fail, a block within ``sqrt(u)`` of
    a scalar is diagonalized through the Hermitian matrix ``(B - B^*)/(2i)``,
    ``B`` being the block rotated so its eigenvalues cluster at 1.  Recursion depth never exceeds ``m``.

    Raises
    ------
    BalanceError
        No rotation produced a nontrivial split and the block is not scalar.
    DecouplingError, SingularityError, ConvergenceError
        From the last failed attempt, tagged with the recursion ``path``
        (a string of ``1``/``2`` digits naming the block).
    """
    a = as_matrix(a)
    cfg = cfg or IterationConfig()
    notes = []
    v, lam = _solve(a, cfg, sign_method, "", 0, notes, a.shape[0])
    return UnitaryEigendecomposition(v=v, lam=lam, notes=notes)
