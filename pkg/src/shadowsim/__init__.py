"""Cross-correlated log-normal shadowing simulation and Monte Carlo C/I."""

from .ci_sim import BaseStation, CIGrid, Scenario, figure2_preset, run_grid, run_point
from .correlation import (
    CorrelationTable,
    build_matrix,
    builtin_table,
    cholesky,
    ensure_psd,
    load_table,
    lookup_alpha,
)
from .extraction import (
    Trace,
    empirical_cross_correlation,
    extract_regression,
    extract_sliding,
    remove_fast_fading,
)
from .geometry import PairGeometry, Position, distance, pair_geometry
from .propagation import PathLossParams, db_to_linear, linear_to_db, path_loss
from .shadowing import (
    ShadowParams,
    ShadowState,
    beta_from_distance,
    draw_static,
    generate,
    init_state,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "BaseStation",
    "CIGrid",
    "CorrelationTable",
    "PairGeometry",
    "PathLossParams",
    "Position",
    "Scenario",
    "ShadowParams",
    "ShadowState",
    "Trace",
    "beta_from_distance",
    "build_matrix",
    "builtin_table",
    "cholesky",
    "db_to_linear",
    "distance",
    "draw_static",
    "empirical_cross_correlation",
    "ensure_psd",
    "extract_regression",
    "extract_sliding",
    "figure2_preset",
    "generate",
    "init_state",
    "linear_to_db",
    "load_table",
    "lookup_alpha",
    "pair_geometry",
    "path_loss",
    "remove_fast_fading",
    "run_grid",
    "run_point",
    "step",
]
