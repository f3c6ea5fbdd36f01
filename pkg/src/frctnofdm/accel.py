"""Optional numba acceleration for the hot detection kernel.

Set FRCTNOFDM_NO_NUMBA=1 to force the pure-numpy path (also used
automatically when numba is not importable). Both paths implement the
same recursion; see benchmarks/bench_id.py for a speed comparison.
"""
import os

import numpy as np

HAVE_NUMBA = False
if os.environ.get("FRCTNOFDM_NO_NUMBA", "0") not in ("1", "true", "yes"):
    try:
        import numba

        HAVE_NUMBA = True
    except ImportError:
        pass


def detect_batch_numpy(rx, corr_minus_eye, n_iters):
    """Iterative ICI cancellation over a batch of symbols.

    rx: (N, nsym) demultiplexed symbols, one column per symbol, scaled so
    the nominal 2-PAM constellation is +-1. Returns hard +-1 decisions.
    """
    rx = np.asarray(rx, dtype=np.float64)
    if n_iters == 0:
        return np.where(rx >= 0.0, 1.0, -1.0)
    est = np.zeros_like(rx)
    level = 1.0
    for i in range(1, n_iters + 1):
        est = rx - corr_minus_eye @ est
        est = np.where(est > level, 1.0, np.where(est < -level, -1.0, est))
        level = 1.0 - i / n_iters
    return np.where(est >= 0.0, 1.0, -1.0)


if HAVE_NUMBA:

    @numba.njit(cache=True, parallel=True)
    def _id_kernel(rx, cme, n_iters):  # pragma: no cover - exercised via wrapper
        n, nsym = rx.shape
        est = np.zeros((n, nsym))
        level = 1.0
        for i in range(1, n_iters + 1):
            nxt = np.dot(cme, est)
            for j in numba.prange(nsym):
                for l in range(n):
                    v = rx[l, j] - nxt[l, j]
                    if v > level:
                        est[l, j] = 1.0
                    elif v < -level:
                        est[l, j] = -1.0
                    else:
                        est[l, j] = v
            level = 1.0 - i / n_iters
        out = np.empty((n, nsym))
        for j in numba.prange(nsym):
            for l in range(n):
                out[l, j] = 1.0 if est[l, j] >= 0.0 else -1.0
        return out

    def detect_batch(rx, corr_minus_eye, n_iters):
        rx = np.ascontiguousarray(rx, dtype=np.float64)
        if n_iters == 0:
            return np.where(rx >= 0.0, 1.0, -1.0)
        cme = np.ascontiguousarray(corr_minus_eye, dtype=np.float64)
        return _id_kernel(rx, cme, n_iters)

else:
    detect_batch = detect_batch_numpy
