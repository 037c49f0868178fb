"""Benchmark the numba-compiled kernels against the pure-numpy fallbacks.

Run from the repository root:

    python benchmarks/bench_kernels.py

Both implementations are imported directly, so a single process times the
two paths side by side (the SHADOWSIM_NUMBA env flag is not needed here).
"""

import time

import numpy as np

from shadowsim import kernels


def bench(label, fn, *args, repeats=5):
    fn(*args)  # warm-up (and JIT compile for the numba path)
    best = min(timeit(fn, *args) for _ in range(repeats))
    print(f"  {label:<12} {best * 1e3:9.2f} ms")
    return best


def timeit(fn, *args):
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def main():
    if not kernels.USE_NUMBA:
        raise SystemExit("numba backend unavailable; nothing to compare")
    rng = np.random.default_rng(0)

    print("ar1_filter: 4 links x 5,000,000 steps")
    noise = rng.standard_normal((4, 5_000_000))
    b0 = rng.standard_normal(4)
    t_np = bench("numpy", kernels.ar1_filter_numpy, noise, b0, 0.9)
    t_nb = bench("numba", kernels.ar1_filter_numba, noise, b0, 0.9)
    print(f"  speedup      {t_np / t_nb:9.2f}x")
    a = kernels.ar1_filter_numpy(noise, b0, 0.9)
    b = kernels.ar1_filter_numba(noise, b0, 0.9)
    print(f"  max |diff|   {np.max(np.abs(a - b)):9.2e}")

    print("ci_db: 5 interferers x 2,000,000 replicas")
    carrier = rng.normal(-80, 7, 2_000_000)
    interferers = rng.normal(-95, 7, (5, 2_000_000))
    t_np = bench("numpy", kernels.ci_db_numpy, carrier, interferers)
    t_nb = bench("numba", kernels.ci_db_numba, carrier, interferers)
    print(f"  speedup      {t_np / t_nb:9.2f}x")
    a = kernels.ci_db_numpy(carrier, interferers)
    b = kernels.ci_db_numba(carrier, interferers)
    print(f"  max |diff|   {np.max(np.abs(a - b)):9.2e}")


if __name__ == "__main__":
    main()
