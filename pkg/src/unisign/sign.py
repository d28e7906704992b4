"""Unitary sign decomposition ``A = S N`` and its backward-error metrics.

Four routes are provided:

* :func:`zolo_sign` -- the structure-preserving iteration built from the
  best unimodular approximants (order ``2n + 1``);
* :func:`pade_sign` -- the same iteration frozen at ``theta = 0``, i.e. the
  diagonal Pade iteration;
* :func:`newton_polar_sign` -- scaled Newton on the Hermitian part, a
  deliberately non-structure-preserving baseline;
* :func:`direct_sign` -- spectral projectors of the Hermitian part.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .approx import ArcAngle, coefficients, convergence_threshold, theta_update
from .exceptions import ConvergenceError, DomainError, SingularityError
from .linalg import (UNIT_ROUNDOFF, as_matrix, check_unitary, ctranspose, fro, hermitian_eig,
                     qq_transform, two_norm, unitarity_defect)

__all__ = [
    "IterationConfig",
    "SignDecomposition",
    "BackwardErrors",
    "spectral_angle",
    "zolo_sign",
    "pade_sign",
    "newton_polar_sign",
    "direct_sign",
    "postprocess",
    "backward_errors",
    "commutator_bound",
    "SIGN_METHODS",
    "run_sign",
    "sign_step",
]

# Smallest gap pi/2 - theta handed to the approximants.  At this gap the
# degree-3 coefficient still satisfies a - 1 ~ 3e-7 >> sqrt(u), which keeps
# X + a X^* far enough from singular for the QR route to stay accurate.
GAP_FLOOR = 1e-10
LOW_ORDER_GAP = math.sqrt(UNIT_ROUNDOFF)
AT_I_WARNING = "eigenvalue at +-i: sign is undefined there"


@dataclass(frozen=True)
class IterationConfig:
    """Parameters of the sign iterations.

    Parameters
    ----------
    n : int
        Half-degree of the approximant (the iteration has order ``2n + 1``).
    delta : float
        Target distance of the post-processed eigenvalues from ``+-1``.
    max_iter : int
        Iteration cap.
    variant : {"zolo", "pade"}
        Which approximant family to iterate.
    gap_floor : float
        Lower clamp for ``pi/2 - theta_k``.  ``10 * UNIT_ROUNDOFF`` reproduces
        the published clamp literally.
    low_order_gap : float
        Below this gap the iteration falls back to ``n = 1`` and re-estimates
        theta from the iterate.
    """

    n: int = 1
    delta: float = 1e-16
    max_iter: int = 60
    variant: str = "zolo"
    gap_floor: float = GAP_FLOOR
    low_order_gap: float = LOW_ORDER_GAP

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise DomainError(f"n must lie in 1..16, got {self.n}")
        if not 0.0 < self.delta <= 1e-4:
            raise DomainError(f"delta must lie in (0, 1e-4], got {self.delta}")
        if self.max_iter < 1:
            raise DomainError("max_iter must be positive")
        if self.variant not in ("zolo", "pade"):
            raise DomainError(f"variant must be 'zolo' or 'pade', got {self.variant!r}")
        if not 0.0 < self.gap_floor < 1.0:
            raise DomainError("gap_floor must lie in (0, 1)")


@dataclass
class SignDecomposition:
    s: np.ndarray
    n_factor: np.ndarray
    iterations: int
    theta_history: list = field(default_factory=list)
    unitarity_history: list = field(default_factory=list)
    degree_history: list = field(default_factory=list)
    raw_hermitian_defect: float = 0.0
    method: str = ""
    warnings: list = field(default_factory=list)


@dataclass(frozen=True)
class BackwardErrors:
    """The six residuals of a computed sign decomposition (2-norm)."""

    factorization: float
    involution: float
    hermitian_defect: float
    unitarity: float
    square: float
    half_plane: float

    def as_dict(self):
        return {
            "factorization": self.factorization,
            "involution": self.involution,
            "hermitian_defect": self.hermitian_defect,
            "unitarity": self.unitarity,
            "square": self.square,
            "half_plane": self.half_plane,
        }

    def max(self):
        return max(self.as_dict().values())


def spectral_angle(a):
    """Spectral angle of a unitary matrix.

    The eigenvalues of the Hermitian part ``(A + A^*)/2`` are the real parts
    ``cos(phi_j)`` of the eigenvalues of ``A``; the smallest ``|cos phi_j|``
    decides how close the spectrum comes to ``+-i``.
    """
    a = as_matrix(a)
    values = hermitian_eig(0.5 * (a + ctranspose(a))).values
    c = min(float(np.min(np.abs(values))), 1.0)
    return ArcAngle.from_gap(math.asin(c))


def _clamped(arc, floor):
    return arc if arc.gap >= floor else ArcAngle.from_gap(floor)


def postprocess(x, symmetrize_first=True):
    """Symmetrize, one Newton-Schulz step, symmetrize again."""
    s = 0.5 * (x + ctranspose(x)) if symmetrize_first else x
    s = 0.5 * s @ (3.0 * np.eye(s.shape[0]) - s @ s)
    return 0.5 * (s + ctranspose(s))


def sign_step(x, n, arc):
    """One step ``X <- r_{2n+1}(X; theta)``, exactly unitary up to roundoff.

    Computed as ``(X V_1 ... V_n + V_n ... V_1 X) / 2`` with ``V_j`` from
    :func:`~unisign.linalg.qq_transform`.
    """
    y = x
    z = x
    for aj in coefficients(n, arc).coeffs:
        v = qq_transform(x, aj)
        y = y @ v
        z = v @ z
    return 0.5 * (y + z)


def _iterate(a, cfg, pade):
    a = check_unitary(a)
    notes = []
    start = spectral_angle(a)
    if start.gap <= 10.0 * UNIT_ROUNDOFF:
        notes.append(AT_I_WARNING)
    arc = ArcAngle(0.0, math.pi / 2) if pade else _clamped(start, cfg.gap_floor)
    x = a.copy()
    history = [arc]
    units = [unitarity_defect(x)]
    degrees = []
    tol = 2.0 * convergence_threshold(cfg.delta)
    k = 0
    while fro(x - ctranspose(x)) > tol:
        if k >= cfg.max_iter:
            raise ConvergenceError(
                f"sign iteration did not converge in {cfg.max_iter} iterations", history=history)
        near = (not pade) and arc.gap < cfg.low_order_gap
        n = 1 if near else cfg.n
        try:
            x = sign_step(x, n, arc)
        except SingularityError as exc:
            exc.iteration = k
            raise
        degrees.append(n)
        if near:
            arc = _clamped(spectral_angle(x), cfg.gap_floor)
        elif not pade:
            arc = theta_update(n, arc)
        k += 1
        history.append(arc)
        units.append(unitarity_defect(x))
    raw = fro(x - ctranspose(x))
    s = postprocess(x)
    return SignDecomposition(
        s=s, n_factor=s @ a, iterations=k, theta_history=history, unitarity_history=units,
        degree_history=degrees,
        raw_hermitian_defect=raw, method="pade" if pade else "zolo", warnings=notes)


def zolo_sign(a, cfg=None):
    """Unitary sign decomposition by the order-``(2n+1)`` Zolotarev-type iteration.

    Each step applies ``r_{2n+1}(X; theta_k)`` as
    ``X_{k+1} = (X V_1 ... V_n + V_n ... V_1 X) / 2`` with
    ``V_j = (X + a_j X^*)(X^* + a_j X)^{-1}`` formed from two QR factorizations.
    While ``theta_k`` is within ``low_order_gap`` of ``pi/2`` the degree drops
    to 3 and theta is re-measured from the iterate; afterwards it follows the
    scalar recurrence.  Stops when ``||X - X^*||_F <= 2 (8 delta / 3)^(1/4)``
    and finishes with :func:`postprocess`; ``N = S A``.

    Parameters
    ----------
    a : (m, m) array_like
        Unitary matrix without eigenvalues at ``+-i``.
    cfg : IterationConfig, optional

    Returns
    -------
    SignDecomposition
    """
    cfg = cfg or IterationConfig()
    return _iterate(a, cfg, pade=cfg.variant == "pade")


def pade_sign(a, cfg=None):
    """Diagonal Pade iteration ``X <- X p_n(X^2)``, same implementation with theta = 0."""
    cfg = cfg or IterationConfig()
    return _iterate(a, cfg, pade=True)


def newton_polar_sign(a, max_iter=100):
    """Scaled Newton iteration on the Hermitian part ``(A + A^*)/2``.

    Uses ``(1, inf)``-norm scaling until the relative step drops below
    ``1e-2`` and stops once it is at most ``10 m u``.  Not structure
    preserving; when ``A`` has eigenvalues near ``+-i`` the starting matrix is
    nearly singular and the result is inaccurate or the inversion fails.
    """
    a = check_unitary(a)
    m = a.shape[0]
    x = 0.5 * (a + ctranspose(a))
    scale = True
    stop = 10.0 * UNIT_ROUNDOFF * m
    k = 0
    while True:
        if k >= max_iter:
            raise ConvergenceError(f"Newton iteration did not converge in {max_iter} iterations")
        try:
            xinv = np.linalg.inv(x)
        except np.linalg.LinAlgError as exc:
            raise SingularityError(f"Newton iterate {k} is singular", iteration=k) from exc
        if not np.all(np.isfinite(xinv)):
            raise SingularityError(f"Newton iterate {k} is singular", iteration=k)
        mu = 1.0
        if scale:
            num = np.linalg.norm(xinv, 1) * np.linalg.norm(xinv, np.inf)
            den = np.linalg.norm(x, 1) * np.linalg.norm(x, np.inf)
            mu = (num / den) ** 0.25
        x_new = 0.5 * (mu * x + xinv / mu)
        k += 1
        step = fro(x_new - x) / fro(x)
        x = x_new
        if step < 1e-2:
            scale = False
        if step <= stop:
            break
    raw = fro(x - ctranspose(x))
    s = postprocess(x)
    return SignDecomposition(s=s, n_factor=s @ a, iterations=k, raw_hermitian_defect=raw,
                             method="newton")


def direct_sign(a):
    """Sign via the eigendecomposition of the Hermitian part.

    For unitary ``A`` the Hermitian part shares its eigenvectors with ``A``
    and its eigenvalues are the real parts of those of ``A``, so
    ``V sign(values) V^*`` is ``sign(A)``.  An eigenvalue within ``10 u`` of
    zero (an eigenvalue of ``A`` at ``+-i``) is reported in ``warnings``.
    """
    a = check_unitary(a)
    values, vectors = hermitian_eig(0.5 * (a + ctranspose(a)))
    notes = []
    if np.any(np.abs(values) <= 10.0 * UNIT_ROUNDOFF):
        notes.append(AT_I_WARNING)
    signs = np.where(values >= 0.0, 1.0, -1.0)
    s0 = (vectors * signs) @ ctranspose(vectors)
    s = postprocess(s0, symmetrize_first=False)
    return SignDecomposition(s=s, n_factor=s @ a, iterations=0, method="direct", warnings=notes)


SIGN_METHODS = ("zolo", "pade", "newton", "direct")


def run_sign(method, a, cfg=None):
    """Dispatch to one of :data:`SIGN_METHODS`."""
    cfg = cfg or IterationConfig()
    if method == "zolo":
        return zolo_sign(a, IterationConfig(**{**cfg.__dict__, "variant": "zolo"}))
    if method == "pade":
        return pade_sign(a, cfg)
    if method == "newton":
        return newton_polar_sign(a)
    if method == "direct":
        return direct_sign(a)
    raise DomainError(f"unknown sign method {method!r}; expected one of {SIGN_METHODS}")


def backward_errors(a, s, n_factor):
    """Residuals ``||A - SN||``, ``||S^2 - I||``, ``||S - S^*||``, ``||N^*N - I||``,
    ``||N^2 - A^2||`` and ``max(0, -min Re lambda(N))``.

    2-norms come from :func:`~unisign.linalg.two_norm`.  The half-plane
    measure uses the Hermitian part of ``N``, exact for normal ``N``.
    """
    a, s, n_factor = (as_matrix(x) for x in (a, s, n_factor))
    if not a.shape == s.shape == n_factor.shape:
        raise DomainError("dimension mismatch")
    eye = np.eye(a.shape[0])
    herm = hermitian_eig(0.5 * (n_factor + ctranspose(n_factor))).values
    return BackwardErrors(
        factorization=two_norm(a - s @ n_factor),
        involution=two_norm(s @ s - eye),
        hermitian_defect=two_norm(s - ctranspose(s)),
        unitarity=two_norm(ctranspose(n_factor) @ n_factor - eye),
        square=two_norm(n_factor @ n_factor - a @ a),
        half_plane=max(0.0, -float(herm.min())),
    )


def commutator_bound(a, s, n_factor, errors=None):
    """Return ``(||NS - SN||, bound)`` where the bound combines the residuals.

    ``bound = (||N^2 - A^2|| + (1 + ||S|| ||N||) ||A - SN|| + ||N||^2 ||S^2 - I||)
    * ||N^{-1}|| ||S^{-1}||``.
    """
    errors = errors or backward_errors(a, s, n_factor)
    sv_s = np.linalg.svd(s, compute_uv=False)
    sv_n = np.linalg.svd(n_factor, compute_uv=False)
    ns, nn = sv_s[0], sv_n[0]
    bound = (errors.square + (1.0 + ns * nn) * errors.factorization
             + nn**2 * errors.involution) / (sv_n[-1] * sv_s[-1])
    lhs = two_norm(n_factor @ s - s @ n_factor)
    return lhs, bound
