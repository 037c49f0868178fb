"""Correlated log-normal shadowing generator.

N independent AR(1) Gaussian processes (stationary variance sigma^2,
lag-1 coefficient beta) are mixed through the lower-triangular Cholesky
factor of the link correlation matrix, giving shadowing vectors whose
lagged moments factor as sigma^2 * alpha_ij * beta^lag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DimensionMismatch

#: Substream purposes: drawing for one purpose never perturbs another, and
#: per-link substreams mean adding links leaves existing links' draws intact.
_PURPOSE_INIT = 0
_PURPOSE_STEP = 1
_PURPOSE_STATIC = 2


def _link_rng(seed: int, link: int, purpose: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(purpose, link)))


def _mix(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    # einsum keeps a fixed sequential reduction order, so mixing one column
    # at a time (step) and a whole batch (generate) agree bit for bit.
    return np.einsum("ij,j...->i...", L, b)


def beta_from_distance(step_m: float, decorrelation_m: float) -> float:
    """Lag-1 coefficient from a sample spacing and a decorrelation distance.

    Uses the exponential-decay convention beta = exp(-step / d_corr).
    """
    if step_m < 0 or decorrelation_m <= 0:
        raise ValueError("step must be >= 0 and decorrelation distance > 0")
    return math.exp(-step_m / decorrelation_m)


@dataclass(frozen=True)
class ShadowParams:
    sigma: float
    beta: float
    n_links: int

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")
        if self.n_links < 1:
            raise ValueError(f"n_links must be >= 1, got {self.n_links}")


@dataclass
class ShadowState:
    """Mutable generator state; advance from a single thread only."""

    params: ShadowParams
    L: np.ndarray
    b: np.ndarray
    rngs: list = field(repr=False, default_factory=list)
    k: int = 0


def _check_factor(params: ShadowParams, L: np.ndarray) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if L.shape != (params.n_links, params.n_links):
        raise DimensionMismatch(
            f"mixing factor shape {L.shape} does not match n_links={params.n_links}"
        )
    return L


def init_state(params: ShadowParams, L: np.ndarray, seed: int) -> ShadowState:
    """Stationary start: each AR(1) process begins as N(0, sigma^2)."""
    L = _check_factor(params, L)
    init_rngs = [_link_rng(seed, i, _PURPOSE_INIT) for i in range(params.n_links)]
    b0 = np.array([params.sigma * r.standard_normal() for r in init_rngs])
    step_rngs = [_link_rng(seed, i, _PURPOSE_STEP) for i in range(params.n_links)]
    return ShadowState(params=params, L=L, b=b0, rngs=step_rngs, k=0)


def step(state: ShadowState) -> np.ndarray:
    """Advance every process one sample and return the mixed vector s."""
    p = state.params
    gain = math.sqrt(1.0 - p.beta * p.beta)
    g = np.array([p.sigma * r.standard_normal() for r in state.rngs])
    state.b = p.beta * state.b + gain * g
    state.k += 1
    return _mix(state.L, state.b)


def generate(params: ShadowParams, L: np.ndarray, seed: int, n_steps: int) -> np.ndarray:
    """Matrix (n_links, n_steps) of shadowing in dB; column k is sample k+1.

    Identical to init_state followed by n_steps step() calls, but the AR
    recursion runs through the compiled kernel on batched noise.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    L = _check_factor(params, L)
    b0 = np.array(
        [params.sigma * _link_rng(seed, i, _PURPOSE_INIT).standard_normal()
         for i in range(params.n_links)]
    )
    noise = np.stack(
        [params.sigma * _link_rng(seed, i, _PURPOSE_STEP).standard_normal(n_steps)
         for i in range(params.n_links)]
    )
    b = kernels.ar1_filter(noise, b0, params.beta)
    return _mix(L, b)


def draw_static(params: ShadowParams, L: np.ndarray, seed: int, n_draws: int) -> np.ndarray:
    """n_draws independent same-instant shadowing vectors (no AR evolution)."""
    if n_draws < 1:
        raise ValueError(f"n_draws must be >= 1, got {n_draws}")
    L = _check_factor(params, L)
    g = np.stack(
        [_link_rng(seed, i, _PURPOSE_STATIC).standard_normal(n_draws)
         for i in range(params.n_links)]
    )
    return params.sigma * _mix(L, g)


def write_trace_csv(path, samples: np.ndarray) -> None:
    """CSV export: header step,s_1,...,s_N; one row per step."""
    samples = np.atleast_2d(samples)
    n_links, n_steps = samples.shape
    with open(path, "w", newline="") as fh:
        fh.write("step," + ",".join(f"s_{i + 1}" for i in range(n_links)) + "\n")
        for k in range(n_steps):
            row = ",".join(f"{samples[i, k]:.12g}" for i in range(n_links))
            fh.write(f"{k},{row}\n")
