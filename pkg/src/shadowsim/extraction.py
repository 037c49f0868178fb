"""Shadowing extraction from drive-test style slow-fading traces.

Fast fading is discarded with a short (default 12 m) centered sliding
local mean; shadowing is then isolated either by per-zone log-distance
regression or by subtracting a long (default 800 m) sliding mean.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateZone, WindowTooLarge, ZeroVariance
from .propagation import PathLossParams

DEFAULT_FAST_WINDOW_M = 12.0
DEFAULT_SLOW_WINDOW_M = 800.0

#: Nominal sample spacing, half a wavelength at 900 MHz.
DEFAULT_SPACING_M = 0.15


@dataclass(frozen=True)
class Trace:
    """Ordered received-level samples along a drive route.

    x, y: sample positions (m); distance_m: link distance to the base
    station; level_db: received level. spacing is the nominal distance
    between consecutive samples.
    """

    x: np.ndarray
    y: np.ndarray
    distance_m: np.ndarray
    level_db: np.ndarray
    spacing: float = DEFAULT_SPACING_M

    def __post_init__(self):
        for name in ("x", "y", "distance_m", "level_db"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = len(self.level_db)
        if n < 2:
            raise ValueError("trace needs at least 2 samples")
        if any(len(getattr(self, f)) != n for f in ("x", "y", "distance_m")):
            raise ValueError("trace columns must have equal length")
        if self.spacing <= 0:
            raise ValueError("spacing must be > 0")
        if np.any(self.distance_m <= 0):
            raise ValueError("link distances must be > 0")

    def __len__(self) -> int:
        return len(self.level_db)

    @property
    def span_m(self) -> float:
        return (len(self) - 1) * self.spacing


@dataclass(frozen=True)
class ExtractionResult:
    shadowing: np.ndarray
    method: str
    std: float
    fitted_params: Optional[list] = None  # PathLossParams per zone (regression)


def _sliding_mean(values: np.ndarray, half: int) -> np.ndarray:
    """Centered running mean with edge truncation (shrinking windows)."""
    n = len(values)
    csum = np.concatenate(([0.0], np.cumsum(values)))
    idx = np.arange(n)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, n)
    return (csum[hi] - csum[lo]) / (hi - lo)


def _half_width(trace: Trace, window_m: float) -> int:
    if window_m <= 0:
        raise ValueError("window must be > 0")
    if trace.span_m < window_m:
        raise WindowTooLarge(
            f"trace spans {trace.span_m:.1f} m, shorter than the {window_m:.1f} m window"
        )
    return int(round(window_m / (2.0 * trace.spacing)))


def remove_fast_fading(
    trace: Trace, window_m: float = DEFAULT_FAST_WINDOW_M, domain: str = "power"
) -> Trace:
    """Replace levels by their centered local mean over `window_m`.

    domain selects where the mean is taken: 'power' (linear power, the
    default and the standard choice for multipath removal), 'db', or
    'amplitude' (linear field amplitude).
    """
    half = _half_width(trace, window_m)
    lv = trace.level_db
    if domain == "power":
        smooth = 10.0 * np.log10(_sliding_mean(10.0 ** (lv / 10.0), half))
    elif domain == "amplitude":
        smooth = 20.0 * np.log10(_sliding_mean(10.0 ** (lv / 20.0), half))
    elif domain == "db":
        smooth = _sliding_mean(lv, half)
    else:
        raise ValueError(f"unknown averaging domain {domain!r}")
    return Trace(trace.x, trace.y, trace.distance_m, smooth, trace.spacing)


def extract_regression(trace: Trace, zones: Sequence[Sequence[int]]) -> ExtractionResult:
    """Per-zone least-squares fit of level = a + b*log10(d); residuals are
    the shadowing. Zones partition the sample indices."""
    shadowing = np.full(len(trace), np.nan)
    fitted = []
    for zi, zone in enumerate(zones):
        idx = np.asarray(zone, dtype=int)
        d = trace.distance_m[idx]
        if len(idx) < 2 or np.all(d == d[0]):
            raise DegenerateZone(f"zone {zi} has no distance spread")
        logd = np.log10(d)
        A = np.column_stack([np.ones_like(logd), logd])
        coef, *_ = np.linalg.lstsq(A, trace.level_db[idx], rcond=None)
        fitted.append(PathLossParams(a=float(coef[0]), b=float(coef[1])))
        shadowing[idx] = trace.level_db[idx] - A @ coef
    if np.any(np.isnan(shadowing)):
        raise ValueError("zones do not cover every sample index")
    return ExtractionResult(
        shadowing=shadowing,
        method="regression",
        std=float(np.std(shadowing)),
        fitted_params=fitted,
    )


def extract_sliding(trace: Trace, window_m: float = DEFAULT_SLOW_WINDOW_M) -> ExtractionResult:
    """Shadowing = level minus its centered `window_m` sliding mean (dB)."""
    half = _half_width(trace, window_m)
    shadowing = trace.level_db - _sliding_mean(trace.level_db, half)
    return ExtractionResult(
        shadowing=shadowing, method="sliding_window", std=float(np.std(shadowing))
    )


def empirical_cross_correlation(shadow_a, shadow_b) -> float:
    """Pearson correlation between two shadowing sequences."""
    a = np.asarray(shadow_a, dtype=float)
    b = np.asarray(shadow_b, dtype=float)
    if len(a) != len(b) or len(a) < 2:
        raise ValueError("sequences must have equal length >= 2")
    if np.std(a) == 0.0 or np.std(b) == 0.0:
        raise ZeroVariance("correlation undefined for a constant sequence")
    return float(np.corrcoef(a, b)[0, 1])


def read_trace_csv(path, spacing: float = DEFAULT_SPACING_M) -> Trace:
    """Read a trace CSV with header x,y,distance_m,level_db (drive order)."""
    cols = {"x": [], "y": [], "distance_m": [], "level_db": []}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            for key in cols:
                cols[key].append(float(row[key]))
    return Trace(cols["x"], cols["y"], cols["distance_m"], cols["level_db"], spacing)


def write_shadowing_csv(path, shadowing: np.ndarray) -> None:
    """Write shadowing as CSV with header index,shadowing_db."""
    with open(path, "w", newline="") as fh:
        fh.write("index,shadowing_db\n")
        for i, v in enumerate(shadowing):
            fh.write(f"{i},{v:.12g}\n")
