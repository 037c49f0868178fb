"""Planar geometry between a mobile and base-station pairs.

The two geometric predictors of shadowing cross-correlation are the angle
under which the mobile sees a pair of stations (theta) and the dB-scaled
log-ratio of the two link distances (r_db).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGeometry


@dataclass(frozen=True)
class Position:
    x: float
    y: float


@dataclass(frozen=True)
class PairGeometry:
    """Geometry of one (mobile, station pair) configuration.

    theta_deg: angle at the mobile between the rays to the two stations,
        in [0, 180] degrees.
    r_db: 10 * |log10(d1 / d2)|, >= 0.
    """

    theta_deg: float
    r_db: float
    d1: float
    d2: float


def distance(a: Position, b: Position) -> float:
    """Euclidean distance in meters."""
    return math.hypot(b.x - a.x, b.y - a.y)


def pair_geometry(mobile: Position, bs1: Position, bs2: Position) -> PairGeometry:
    """Compute (theta, r_db) for a mobile and two base stations.

    Raises DegenerateGeometry if the mobile coincides with either station.
    """
    d1 = distance(mobile, bs1)
    d2 = distance(mobile, bs2)
    if d1 == 0.0 or d2 == 0.0:
        raise DegenerateGeometry(
            f"mobile ({mobile.x}, {mobile.y}) coincides with a base station"
        )
    ux, uy = bs1.x - mobile.x, bs1.y - mobile.y
    vx, vy = bs2.x - mobile.x, bs2.y - mobile.y
    # atan2 of (|cross|, dot) is well-conditioned near 0 and 180 degrees,
    # unlike acos of the normalized dot product.
    cross = ux * vy - uy * vx
    dot = ux * vx + uy * vy
    theta = math.degrees(math.atan2(abs(cross), dot))
    # Difference of logs rather than log of the ratio: immune to
    # underflow/overflow when the two distances differ by many orders.
    r_db = 10.0 * abs(math.log10(d1) - math.log10(d2))
    return PairGeometry(theta_deg=theta, r_db=r_db, d1=d1, d2=d2)
