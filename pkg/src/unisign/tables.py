"""Predicted iteration counts over a grid of degrees and arc angles."""
from .approx import ArcAngle, pade_table_k, zolo_table_k
from .elliptic import HALF_PI

__all__ = ["TABLE_GAPS", "TABLE_DEGREES", "zolo_table", "pade_table"]

# pi/2 - theta for each column
TABLE_GAPS = (1.5, 1.0, 0.5, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14, 1e-16)
TABLE_DEGREES = tuple(range(1, 9))


def zolo_table(delta=1e-16, degrees=TABLE_DEGREES, gaps=TABLE_GAPS):
    """Bound-predicted counts, one row per ``n``; the gap is used exactly."""
    return [[zolo_table_k(n, ArcAngle.from_gap(g), delta) for g in gaps] for n in degrees]


def pade_table(delta=1e-16, degrees=TABLE_DEGREES, gaps=TABLE_GAPS):
    """Scalar Pade counts, one row per ``n``.

    Each run starts at ``exp(1j * theta)`` with ``theta = pi/2 - gap`` rounded
    to double, as a floating-point experiment would.
    """
    return [[pade_table_k(n, HALF_PI - g, delta) for g in gaps] for n in degrees]
