"""Jacobi elliptic functions and complete elliptic integrals of the first kind.

Everything here is parameterized by a modulus pair ``(ell, ell_comp)`` with
``ell**2 + ell_comp**2 == 1``.  Callers that know the *small* member of the
pair accurately (e.g. ``ell = sin(gap)`` for an angle ``gap`` away from
``pi/2``) pass it directly, so no ``1 - x**2`` cancellation ever happens.
"""
import math
import warnings
from dataclasses import dataclass

from .exceptions import DivergenceError, DomainError

__all__ = [
    "ModulusPair",
    "DegenerateWarning",
    "agm",
    "modulus_from_theta",
    "complete_K",
    "complete_K_comp",
    "jacobi_scd",
    "log_rho",
    "rho",
]

HALF_PI = math.pi / 2
# pi/2 - HALF_PI, so that gaps near pi/2 can be formed without losing digits.
HALF_PI_LO = 6.123233995736766e-17
GAP_SWITCH = 2.0**-26

_EPS = 2.0**-52
_AGM_MAX_STEPS = 64


class DegenerateWarning(RuntimeWarning):
    """Emitted when a quantity is evaluated at a degenerate endpoint."""


@dataclass(frozen=True)
class ModulusPair:
    """A modulus and its complement, ``ell**2 + ell_comp**2 = 1``."""

    ell: float
    ell_comp: float

    def __post_init__(self):
        if not (0.0 <= self.ell <= 1.0 and 0.0 <= self.ell_comp <= 1.0):
            raise DomainError(f"moduli must lie in [0, 1], got {self.ell!r}, {self.ell_comp!r}")
        if abs(self.ell**2 + self.ell_comp**2 - 1.0) > 4 * _EPS:
            raise DomainError("ell**2 + ell_comp**2 must equal 1")

    @classmethod
    def from_ell(cls, ell):
        ell = float(ell)
        if not 0.0 <= ell <= 1.0:
            raise DomainError(f"modulus must lie in [0, 1], got {ell!r}")
        return cls(ell, math.sqrt((1.0 - ell) * (1.0 + ell)))

    def swapped(self):
        return ModulusPair(self.ell_comp, self.ell)


def _gap_of(theta):
    # HALF_PI - theta is exact near pi/2 (Sterbenz), the low word restores pi/2.
    return (HALF_PI - theta) + HALF_PI_LO


def modulus_from_theta(theta=None, *, gap=None):
    """Return ``(cos theta, sin theta)`` as a :class:`ModulusPair`.

    Either ``theta`` or ``gap = pi/2 - theta`` may be given.  Within
    ``2**-26`` of ``pi/2`` the cosine is evaluated as ``sin(gap)`` so that it
    keeps full relative accuracy.
    """
    if (theta is None) == (gap is None):
        raise TypeError("pass exactly one of theta or gap")
    if gap is None:
        theta = float(theta)
        if not 0.0 <= theta <= HALF_PI + HALF_PI_LO:
            raise DomainError(f"theta must lie in [0, pi/2], got {theta!r}")
        gap = _gap_of(theta)
        if gap < GAP_SWITCH:
            return ModulusPair(math.sin(gap), math.cos(gap))
        return ModulusPair(abs(math.cos(theta)), math.sin(theta))
    gap = float(gap)
    if not 0.0 <= gap <= HALF_PI + HALF_PI_LO:
        raise DomainError(f"gap must lie in [0, pi/2], got {gap!r}")
    return ModulusPair(math.sin(gap), math.cos(gap))


def agm(a, b):
    """Arithmetic-geometric mean of two nonnegative numbers."""
    a, b = float(a), float(b)
    if a < 0 or b < 0:
        raise DomainError("agm requires nonnegative arguments")
    if a == 0.0 or b == 0.0:
        return 0.0
    for _ in range(_AGM_MAX_STEPS):
        if abs(a - b) <= 2 * _EPS * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K_comp(ell_comp):
    """K evaluated at the modulus whose complement is ``ell_comp``.

    ``K(ell) = pi / (2 agm(1, ell_comp))``; supplying the complement directly
    keeps full accuracy when ``ell`` is within roundoff of 1.
    """
    ell_comp = float(ell_comp)
    if not 0.0 <= ell_comp <= 1.0:
        raise DomainError(f"complementary modulus must lie in [0, 1], got {ell_comp!r}")
    if ell_comp == 0.0:
        raise DivergenceError("K(ell) diverges as ell -> 1")
    return HALF_PI / agm(1.0, ell_comp)


def complete_K(ell):
    """Complete elliptic integral of the first kind, ``K(ell)``.

    Parameters
    ----------
    ell : float
        Modulus in ``[0, 1)``.  For moduli near 1 prefer
        :func:`complete_K_comp`.
    """
    ell = float(ell)
    if ell < 0.0:
        raise DomainError(f"modulus must be nonnegative, got {ell!r}")
    if ell >= 1.0:
        raise DivergenceError("K(ell) diverges as ell -> 1")
    return complete_K_comp(math.sqrt((1.0 - ell) * (1.0 + ell)))


def jacobi_scd(u, ell, *, ell_comp=None):
    """Jacobi elliptic functions ``sn, cn, dn`` of real argument.

    Uses the descending Landen (AGM) recursion.  The back-substitution step
    ``phi <- (phi + asin(c/a sin phi)) / 2`` is carried out as an ``atan2``
    whose cosine leg ``sqrt(a^2 cos^2 phi + b^2 sin^2 phi)`` uses
    ``a_j^2 - c_j^2 = b_j^2`` and so never cancels, even for ``ell`` within
    roundoff of 1.

    Parameters
    ----------
    u : float
        Real argument.
    ell : float
        Modulus in ``[0, 1]``.
    ell_comp : float, optional
        Complementary modulus.  Pass it whenever ``ell`` is close to 1.

    Returns
    -------
    (sn, cn, dn) : tuple of float
    """
    u = float(u)
    if ell_comp is None:
        pair = ModulusPair.from_ell(ell)
    else:
        pair = ModulusPair(float(ell), float(ell_comp))
    k, kc = pair.ell, pair.ell_comp
    if kc == 0.0:
        sech = 1.0 / math.cosh(u)
        return math.tanh(u), sech, sech
    if k == 0.0:
        return math.sin(u), math.cos(u), 1.0

    a, b, c = [1.0], [kc], [k]
    while abs(c[-1]) > _EPS * a[-1] and len(a) <= _AGM_MAX_STEPS:
        a0, b0 = a[-1], b[-1]
        a.append(0.5 * (a0 + b0))
        b.append(math.sqrt(a0 * b0))
        c.append(0.5 * (a0 - b0))
    n = len(a) - 1
    phi = math.ldexp(a[n] * u, n)
    for j in range(n, 0, -1):
        s, co = math.sin(phi), math.cos(phi)
        phi = 0.5 * (phi + math.atan2(c[j] * s, math.hypot(a[j] * co, b[j] * s)))
    sn, cn = math.sin(phi), math.cos(phi)
    return sn, cn, math.hypot(kc, k * cn)


def log_rho(theta=None, *, gap=None):
    """Natural log of :func:`rho`, ``pi K(cos theta) / (2 K(sin theta))``."""
    pair = modulus_from_theta(theta, gap=gap)
    if pair.ell_comp == 0.0:
        return math.inf
    if pair.ell == 0.0:
        return 0.0
    # K(ell)/K(ell') = agm(1, ell) / agm(1, ell')
    return HALF_PI * agm(1.0, pair.ell) / agm(1.0, pair.ell_comp)


def rho(theta=None, *, gap=None):
    """Convergence factor ``exp(pi K(cos theta) / (2 K(sin theta)))``.

    Returns ``math.inf`` at ``theta = 0`` and ``1.0`` (with a
    :class:`DegenerateWarning`) at ``theta = pi/2``.
    """
    lr = log_rho(theta, gap=gap)
    if lr == 0.0:
        warnings.warn("rho evaluated at theta = pi/2 where it degenerates to 1",
                      DegenerateWarning, stacklevel=2)
        return 1.0
    if lr > 709.0:
        return math.inf
    return math.exp(lr)
