"""Unimodular rational approximants of ``sign(z)`` on two arcs of the unit circle.

The approximant of half-degree ``n`` for the arc angle ``theta`` is

    r(z) = z * prod_j (z**2 + a_j) / (1 + a_j z**2),

always evaluated in this factored form: each factor is unimodular on
``|z| = 1`` on its own, an expanded polynomial ratio is not.
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np

from .elliptic import HALF_PI, HALF_PI_LO, complete_K_comp, jacobi_scd, log_rho
from .exceptions import ConvergenceError, DomainError, PoleError

__all__ = [
    "ArcAngle",
    "RationalSignApproximant",
    "coefficients",
    "pade_coefficients",
    "evaluate",
    "theta_update",
    "max_arc_error",
    "r_hat_real",
    "pade_table_k",
    "zolo_table_k",
    "convergence_threshold",
]


@dataclass(frozen=True)
class ArcAngle:
    """Arc half-width ``theta`` together with its complement ``gap = pi/2 - theta``.

    Both are stored because near ``pi/2`` only ``gap`` carries the significant
    digits.  ``gap == 0`` is representable (it is what the spectral angle of a
    matrix with eigenvalues exactly at ``+-i`` evaluates to), but no
    approximant can be built for it.
    """

    theta: float
    gap: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= HALF_PI and 0.0 <= self.gap <= HALF_PI + HALF_PI_LO):
            raise DomainError(f"invalid arc angle theta={self.theta!r}, gap={self.gap!r}")
        if abs(self.theta + self.gap - HALF_PI) > 4 * 2.0**-52:
            raise DomainError("theta + gap must equal pi/2")

    @classmethod
    def from_theta(cls, theta):
        theta = float(theta)
        if not 0.0 <= theta <= HALF_PI:
            raise DomainError(f"theta must lie in [0, pi/2], got {theta!r}")
        return cls(theta, (HALF_PI - theta) + HALF_PI_LO)

    @classmethod
    def from_gap(cls, gap):
        gap = float(gap)
        if not 0.0 <= gap <= HALF_PI + HALF_PI_LO:
            raise DomainError(f"gap must lie in [0, pi/2], got {gap!r}")
        return cls(max(HALF_PI - gap, 0.0), gap)

    @property
    def ell(self):
        """``cos(theta)``, accurate relative to itself."""
        return math.sin(self.gap)

    @property
    def ell_comp(self):
        """``sin(theta)``, accurate relative to itself."""
        return math.sin(self.theta)

    def point(self):
        """The arc endpoint ``exp(i theta)``."""
        return complex(self.ell, self.ell_comp)


def _as_arc(theta):
    return theta if isinstance(theta, ArcAngle) else ArcAngle.from_theta(theta)


@dataclass(frozen=True)
class RationalSignApproximant:
    """Half-degree ``n``, arc angle and the coefficients ``a_1..a_n``."""

    n: int
    theta: ArcAngle
    coeffs: tuple

    def __call__(self, z):
        return evaluate(self, z)

    @property
    def degree(self):
        return 2 * self.n + 1


def pade_coefficients(n):
    """Coefficients of the diagonal Pade approximant, ``tan^2(j pi / (2n+1))``."""
    return tuple(math.tan(j * math.pi / (2 * n + 1)) ** 2 for j in range(1, n + 1))


def coefficients(n, theta):
    """Build the best unimodular approximant of half-degree ``n`` on the arcs of ``theta``.

    With ``ell = cos(theta)``, ``ell' = sin(theta)`` and ``v_j`` the points
    ``(2j-1) K(ell') / (2n+1)`` the coefficients are

        a_j = ((ell sn(v_j) + dn(v_j)) / cn(v_j)) ** (2 (-1)**(j+n)),

    all elliptic functions taken with modulus ``ell'``.  Shifting by the
    quarter period (``sn(K-w) = cn w/dn w``, ``cn(K-w) = ell sn w/dn w``,
    ``dn(K-w) = ell/dn w``) turns the base into ``(1 + cn w_j) / sn w_j`` with
    ``w_j = K(ell') - v_j``.  That form only ever adds ``cn`` to 1, so it stays
    accurate when ``v_j`` sits next to ``K(ell')`` and ``cn(v_j)`` underflows
    relative accuracy, which happens as theta approaches pi/2.

    ``theta = 0`` gives the diagonal Pade coefficients.
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"half-degree must be nonnegative, got {n}")
    arc = _as_arc(theta)
    if arc.gap == 0.0:
        raise DomainError("no approximant exists for theta = pi/2")
    if arc.theta == 0.0:
        return RationalSignApproximant(n, arc, pade_coefficients(n))
    ell, ell_comp = arc.ell, arc.ell_comp
    kc = complete_K_comp(ell)  # K(ell')
    coeffs = []
    for j in range(1, n + 1):
        w = (2 * (n - j + 1)) / (2 * n + 1) * kc
        sn, cn, _ = jacobi_scd(w, ell_comp, ell_comp=ell)
        assert sn > 0.0, "sn(w_j) vanished; w_j must lie in (0, K)"
        base = (1.0 + cn) / sn
        coeffs.append(base ** (2 * (-1) ** (j + n)))
    return RationalSignApproximant(n, arc, tuple(coeffs))


def evaluate(r, z):
    """Evaluate the approximant at ``z`` (scalar or array) in product form."""
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    z2 = z * z
    out = z.copy()
    for j, a in enumerate(r.coeffs, start=1):
        den = 1.0 + a * z2
        if np.any(den == 0):
            raise PoleError(f"pole of factor {j} hit (1 + a_{j} z^2 = 0)", index=j)
        out = out * ((z2 + a) / den)
    return complex(out) if scalar else out


def _arg_abs(w):
    return abs(math.atan2(w.imag, w.real))


def theta_update(n, theta):
    """Next arc angle ``|arg r(exp(i theta); theta)|`` of the iteration."""
    arc = _as_arc(theta)
    if arc.theta == 0.0:
        return ArcAngle(0.0, arc.gap)
    w = evaluate(coefficients(n, arc), arc.point())
    # Re w > 0 here; atan2 on swapped legs keeps the small member accurate.
    new_theta = math.atan2(abs(w.imag), w.real)
    new_gap = math.atan2(w.real, abs(w.imag))
    return ArcAngle(new_theta, new_gap)


def max_arc_error(n, theta, samples=10_000):
    """Largest ``|arg(r(z) / sign(z))|`` over ``samples`` points of the arc.

    The approximant is odd and real on the real axis, so the arc
    ``{exp(i phi): 0 <= phi <= theta}`` represents all of the two-arc set.
    """
    if samples < 2:
        raise DomainError("need at least two samples")
    arc = _as_arc(theta)
    r = coefficients(n, arc)
    z = np.exp(1j * np.linspace(0.0, arc.theta, int(samples)))
    err = np.abs(np.angle(evaluate(r, z)))
    # the endpoint is pinned to the accurate representation of exp(i theta)
    err[-1] = _arg_abs(evaluate(r, arc.point()))
    return float(err.max())


def r_hat_real(x, n, ell):
    """Real-part companion: ``Re r(x + i sqrt(1-x^2); arccos ell)``.

    This equals the scaled real minimax approximant of ``sign`` on
    ``[-1, -ell] U [ell, 1]`` without solving a minimax problem.
    """
    x = float(x)
    if abs(x) > 1.0:
        raise DomainError(f"|x| must not exceed 1, got {x!r}")
    ell = float(ell)
    if not 0.0 < ell <= 1.0:
        raise DomainError(f"ell must lie in (0, 1], got {ell!r}")
    arc = ArcAngle.from_gap(math.asin(ell))
    z = complex(x, math.sqrt((1.0 - x) * (1.0 + x)))
    return evaluate(coefficients(n, arc), z).real


def convergence_threshold(delta):
    """Angle below which post-processing lands within ``delta`` of +-1."""
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    return (8.0 * delta / 3.0) ** 0.25


def pade_table_k(n, theta0, delta, max_iter=200):
    """Smallest ``k`` with ``|r_{(2n+1)^k}(exp(i theta0); 0) - 1| <= (8 delta/3)^(1/4)``.

    Runs the scalar Pade iteration from ``exp(1j * theta0)``, where ``theta0``
    is taken as the double it is stored as (for an :class:`ArcAngle`, its
    ``theta`` field).  That matters in the last digits: ``pi/2 - 1e-16``
    rounds to the double nearest ``pi/2``, whose true gap is ``6.1e-17``.
    """
    arc = _as_arc(theta0)
    tol = convergence_threshold(delta)
    r = coefficients(n, ArcAngle(0.0, HALF_PI))
    z = cmath.exp(1j * arc.theta)
    for k in range(1, max_iter + 1):
        z = evaluate(r, z)
        if abs(z - 1.0) <= tol:
            return k
    raise ConvergenceError(f"scalar Pade iteration did not converge in {max_iter} steps")


def zolo_table_k(n, theta0, delta):
    """Smallest ``k >= 1`` with ``4 rho(theta0)^(-(2n+1)^k) <= (8 delta/3)^(1/4)``.

    Compared in log space, ``(2n+1)^k ln rho >= ln 4 - ln tol``, because
    ``(2n+1)^k`` overflows long before ``k`` gets interesting.
    """
    if n < 1:
        raise DomainError("zolo_table_k requires n >= 1")
    arc = _as_arc(theta0)
    lr = log_rho(gap=arc.gap)
    need = math.log(4.0) - math.log(convergence_threshold(delta))
    if need <= 0.0 or math.isinf(lr):
        return 1
    if lr <= 0.0:
        raise DomainError("zolo_table_k requires theta0 < pi/2")
    k = 1
    step, base = math.log(2 * n + 1), math.log(lr)
    target = math.log(need)
    while k * step + base < target:
        k += 1
    return k
