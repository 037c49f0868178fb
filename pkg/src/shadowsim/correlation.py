"""Cross-correlation tables, link correlation matrices, PSD repair, Cholesky.

The built-in tables map geometry bins (theta x r_db) to a cross-correlation
coefficient alpha. From those pairwise coefficients an N x N unit-diagonal
correlation matrix is assembled, repaired to positive semidefinite when the
pairwise lookups are jointly inconsistent, and factored as L * L^T with L
lower-triangular so correlated Gaussian vectors can be mixed as L @ g.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NotPositiveSemiDefinite
from .geometry import PairGeometry, Position, pair_geometry

#: Default eigenvalue floor used by PSD repair.
DEFAULT_EIG_FLOOR = 1e-9

#: Round-off slack below the floor before a repair is triggered; keeps
#: ensure_psd idempotent and leaves singular-but-PSD matrices (e.g. the
#: all-ones full-correlation matrix) untouched when the floor is 0.
_PSD_SLACK = 1e-12


@dataclass(frozen=True)
class CorrelationTable:
    """Binned alpha grid.

    theta_edges: ascending bin edges in degrees, first 0, last 180.
    rdb_edges: ascending lower bin edges in dB, first 0; the last bin is
        unbounded above.
    alphas: shape (len(rdb_edges), len(theta_edges) - 1), each in [-1, 1].

    Bins are half-open [lo, hi); the last theta bin is closed at 180.
    """

    theta_edges: np.ndarray
    rdb_edges: np.ndarray
    alphas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "theta_edges", np.asarray(self.theta_edges, dtype=float))
        object.__setattr__(self, "rdb_edges", np.asarray(self.rdb_edges, dtype=float))
        object.__setattr__(self, "alphas", np.asarray(self.alphas, dtype=float))
        if self.theta_edges[0] != 0.0 or self.rdb_edges[0] != 0.0:
            raise ValueError("first theta/r_db bin edge must be 0")
        if np.any(np.diff(self.theta_edges) <= 0) or np.any(np.diff(self.rdb_edges) <= 0):
            raise ValueError("bin edges must be strictly ascending")
        expected = (len(self.rdb_edges), len(self.theta_edges) - 1)
        if self.alphas.shape != expected:
            raise ValueError(f"alpha grid shape {self.alphas.shape} != {expected}")
        if np.any(np.abs(self.alphas) > 1.0):
            raise ValueError("alpha coefficients must lie in [-1, 1]")


def builtin_table(kind: str) -> CorrelationTable:
    """Built-in coefficient tables: 'predicted' (full grid) or 'measured'.

    The measured table has a single r_db bin; its missing 60-90 degree cell
    and the '>= 0.2' wide-angle entry are both filled with the floor value
    0.2.
    """
    if kind == "predicted":
        return CorrelationTable(
            theta_edges=[0.0, 30.0, 60.0, 90.0, 180.0],
            rdb_edges=[0.0, 2.0, 4.0],
            alphas=[
                [0.8, 0.5, 0.4, 0.2],
                [0.6, 0.4, 0.4, 0.2],
                [0.4, 0.2, 0.2, 0.2],
            ],
        )
    if kind == "measured":
        return CorrelationTable(
            theta_edges=[0.0, 30.0, 60.0, 90.0, 180.0],
            rdb_edges=[0.0],
            alphas=[[0.6, 0.25, 0.2, 0.2]],
        )
    raise ValueError(f"unknown table kind {kind!r}; expected 'predicted' or 'measured'")


def load_table(source) -> CorrelationTable:
    """Load a table from a JSON file path or an already-parsed dict."""
    if isinstance(source, dict):
        doc = source
    else:
        with open(source) as fh:
            doc = json.load(fh)
    return CorrelationTable(
        theta_edges=doc["theta_edges"],
        rdb_edges=doc["rdb_edges"],
        alphas=doc["alphas"],
    )


def table_to_dict(table: CorrelationTable) -> dict:
    return {
        "theta_edges": table.theta_edges.tolist(),
        "rdb_edges": table.rdb_edges.tolist(),
        "alphas": table.alphas.tolist(),
    }


def _bin_index(edges: np.ndarray, value: float, n_bins: int) -> int:
    # Half-open [lo, hi); values at/above the last edge fall in the last bin.
    idx = int(np.searchsorted(edges, value, side="right")) - 1
    return min(max(idx, 0), n_bins - 1)


def lookup_alpha(table: CorrelationTable, g: PairGeometry) -> float:
    """Coefficient of the bin containing (theta, r_db)."""
    ti = _bin_index(table.theta_edges, g.theta_deg, table.alphas.shape[1])
    ri = _bin_index(table.rdb_edges, g.r_db, table.alphas.shape[0])
    return float(table.alphas[ri, ti])


def build_matrix(
    mobile: Position, stations: Sequence[Position], table: CorrelationTable
) -> np.ndarray:
    """Unit-diagonal link correlation matrix from pairwise table lookups."""
    n = len(stations)
    m = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            alpha = lookup_alpha(table, pair_geometry(mobile, stations[i], stations[j]))
            m[i, j] = m[j, i] = alpha
    return m


def ensure_psd(m: np.ndarray, floor: float = DEFAULT_EIG_FLOOR) -> np.ndarray:
    """Return m if its smallest eigenvalue is >= floor, else a repaired copy.

    Repair clips eigenvalues at `floor`, reconstructs, and rescales back to
    unit diagonal. Idempotent, and the identity on already-PSD inputs.
    """
    m = np.asarray(m, dtype=float)
    eigvals, eigvecs = np.linalg.eigh(m)
    # The unit-diagonal rescale below can shrink the clipped eigenvalue a
    # little, so accept half the floor as "already repaired" to keep the
    # operation idempotent.
    if eigvals[0] >= 0.5 * floor - _PSD_SLACK:
        return m
    clipped = np.maximum(eigvals, floor)
    repaired = (eigvecs * clipped) @ eigvecs.T
    d = 1.0 / np.sqrt(np.diag(repaired))
    repaired = repaired * np.outer(d, d)
    # Congruence with a positive diagonal preserves definiteness; symmetrize
    # away round-off.
    return (repaired + repaired.T) / 2.0


def cholesky(m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Lower-triangular L with L @ L.T == m, tolerating singular PSD inputs.

    Unlike np.linalg.cholesky this accepts rank-deficient correlation
    matrices (e.g. the all-ones matrix of fully correlated links): pivots
    within `tol` of zero produce a zero column. A pivot below -tol raises
    NotPositiveSemiDefinite.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        pivot = m[j, j] - L[j, :j] @ L[j, :j]
        if pivot < -tol:
            raise NotPositiveSemiDefinite(
                f"negative pivot {pivot:.3e} at column {j}; matrix is not PSD"
            )
        if pivot <= tol:
            L[j, j] = 0.0
            continue
        L[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            L[j + 1 :, j] = (m[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L
