"""Deterministic slow-fading components: log-distance path loss and dB math."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDistance, NonPositivePower

#: Typical urban 900 MHz values for the log-distance model.
URBAN_A = 16.0
URBAN_B = 36.0


@dataclass(frozen=True)
class PathLossParams:
    """Log-distance model `a + b * log10(d)`, a in dB, b in dB per decade."""

    a: float = URBAN_A
    b: float = URBAN_B


@dataclass(frozen=True)
class SlowFading:
    path_loss: float
    shadowing: float

    @property
    def total(self) -> float:
        return self.path_loss + self.shadowing


def path_loss(params: PathLossParams, d: float) -> float:
    """Median path loss in dB at distance d meters (d > 0)."""
    if d <= 0.0:
        raise InvalidDistance(f"distance must be > 0, got {d}")
    return params.a + params.b * math.log10(d)


def db_to_linear(x):
    """dB -> power ratio. Accepts scalars or arrays."""
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0) if np.ndim(x) else 10.0 ** (x / 10.0)


def linear_to_db(x):
    """Power ratio -> dB. Requires x > 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise NonPositivePower(f"power must be > 0 to express in dB, got {x}")
    out = 10.0 * np.log10(arr)
    return float(out) if np.ndim(x) == 0 else out
