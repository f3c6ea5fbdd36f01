"""Benchmark: numba vs pure-numpy iterative-detection kernel.

Run with `python benchmarks/bench_id.py`. The numba path is skipped when
numba is unavailable or FRCTNOFDM_NO_NUMBA=1 is set.
"""
import time

import numpy as np

from frctnofdm import correlation_matrix, make_basis
from frctnofdm import accel

N = 256
ALPHA = 0.8
N_SYMBOLS = 512
ITERATIONS = 20
REPEATS = 3


def main():
    rng = np.random.default_rng(0)
    basis = make_basis(N, ALPHA)
    corr = correlation_matrix(basis)
    cme = corr - np.eye(N)
    symbols = rng.choice([-1.0, 1.0], size=(N, N_SYMBOLS))
    rx = corr @ symbols + 0.05 * rng.standard_normal((N, N_SYMBOLS))

    def bench(fn, label, check_against=None):
        fn(rx[:, :4], cme, ITERATIONS)  # warm-up / JIT compile
        best = float("inf")
        out = None
        for _ in range(REPEATS):
            t0 = time.perf_counter()
            out = fn(rx, cme, ITERATIONS)
            best = min(best, time.perf_counter() - t0)
        rate = N_SYMBOLS / best
        print(f"{label:>10}: {best * 1e3:8.1f} ms  ({rate:8.0f} symbols/s)")
        if check_against is not None:
            assert np.array_equal(out, check_against), "paths disagree"
        return out, best

    ref, t_np = bench(accel.detect_batch_numpy, "numpy")
    if accel.HAVE_NUMBA:
        _, t_nb = bench(accel.detect_batch, "numba", check_against=ref)
        print(f"{'speedup':>10}: {t_np / t_nb:8.2f}x")
    else:
        print("numba path unavailable (not installed or FRCTNOFDM_NO_NUMBA set)")


if __name__ == "__main__":
    main()
