"""Hot numeric kernels with numba-compiled and pure-numpy implementations.

The active backend is chosen at import time: set the environment variable
``SHADOWSIM_NUMBA=0`` to force the pure-numpy path (it is also used
automatically when numba is unavailable). Both implementations of each
kernel are exported so the benchmark can time them side by side.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.signal import lfilter


def _numba_enabled() -> bool:
    flag = os.environ.get("SHADOWSIM_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USE_NUMBA = _numba_enabled()


def ar1_filter_numpy(noise: np.ndarray, b0: np.ndarray, beta: float) -> np.ndarray:
    """First-order autoregressive filter, one process per row.

    out[i, k] = beta * out[i, k-1] + sqrt(1 - beta^2) * noise[i, k],
    with out[i, -1] taken as b0[i]. The initial state itself is not part
    of the output.
    """
    gain = np.sqrt(1.0 - beta * beta)
    zi = (beta * np.asarray(b0, dtype=float))[:, None]
    out, _ = lfilter([gain], [1.0, -beta], noise, axis=1, zi=zi)
    return out


def ci_db_numpy(carrier_dbm: np.ndarray, interferer_dbm: np.ndarray) -> np.ndarray:
    """C/I in dB per replica: carrier over the linear sum of interferers.

    carrier_dbm: shape (replicas,); interferer_dbm: shape (n_int, replicas).
    """
    total = np.sum(10.0 ** (interferer_dbm / 10.0), axis=0)
    return carrier_dbm - 10.0 * np.log10(total)


if USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def ar1_filter_numba(noise, b0, beta):
        n_proc, n_steps = noise.shape
        gain = np.sqrt(1.0 - beta * beta)
        out = np.empty_like(noise)
        for i in range(n_proc):
            b = b0[i]
            for k in range(n_steps):
                b = beta * b + gain * noise[i, k]
                out[i, k] = b
        return out

    @njit(cache=True)
    def ci_db_numba(carrier_dbm, interferer_dbm):
        # exp/log with a ln(10)/10 scale: cheaper than pow-of-10 per sample.
        scale = np.log(10.0) / 10.0
        n_int, n_rep = interferer_dbm.shape
        out = np.empty(n_rep)
        for r in range(n_rep):
            total = 0.0
            for i in range(n_int):
                total += np.exp(scale * interferer_dbm[i, r])
            out[r] = carrier_dbm[r] - np.log(total) / scale
        return out

    ar1_filter = ar1_filter_numba
    ci_db = ci_db_numba
else:
    ar1_filter_numba = None
    ci_db_numba = None
    ar1_filter = ar1_filter_numpy
    ci_db = ci_db_numpy


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
