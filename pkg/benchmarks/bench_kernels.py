"""Timing comparison of the JIT and plain-numpy summation kernels.

Run:
    python3 benchmarks/bench_kernels.py

The JIT path warms up once before timing so compilation cost is not
mixed into the per-call numbers. Set DQDCAVITY_DISABLE_NUMBA=1 to check
what the fallback costs on your machine (the script then reports only
the numpy path).
"""

import time

import numpy as np

from dqdcavity import HAS_NUMBA, numba_enabled
from dqdcavity.kernels import (
    _exp_decay_sum_numba,
    _exp_decay_sum_numpy,
    _lorentzian_sum_numba,
    _lorentzian_sum_numpy,
)


def _time(fn, *args, repeats=7):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(1)
    cases = [
        ("spectrum 2001 pts x 256 modes", "lorentzian", 2001, 256),
        ("spectrum 8001 pts x 1024 modes", "lorentzian", 8001, 1024),
        ("decay curve 200 pts x 256 modes", "exp", 200, 256),
        ("decay curve 2000 pts x 1024 modes", "exp", 2000, 1024),
    ]
    print(f"numba available: {HAS_NUMBA}; jit enabled: {numba_enabled()}")
    header = f"{'case':38s} {'numpy':>12s} {'numba':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for label, kind, n_pts, n_modes in cases:
        xs = np.linspace(-3.0, 3.0, n_pts) if kind == "lorentzian" else np.geomspace(1e-3, 1e2, n_pts)
        amps = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
        poles = -(10.0 ** rng.uniform(-3, 0, size=n_modes)) + 1j * rng.normal(scale=2.0, size=n_modes)
        if kind == "lorentzian":
            np_fn, nb_fn = _lorentzian_sum_numpy, _lorentzian_sum_numba
        else:
            np_fn, nb_fn = _exp_decay_sum_numpy, _exp_decay_sum_numba
        t_np = _time(np_fn, xs, amps, poles)
        if HAS_NUMBA:
            nb_fn(xs, amps, poles)  # compile outside the timed region
            t_nb = _time(nb_fn, xs, amps, poles)
            err = np.abs(np_fn(xs, amps, poles) - nb_fn(xs, amps, poles)).max()
            assert err < 1e-10, f"kernel paths disagree by {err:.2e}"
            print(f"{label:38s} {t_np * 1e3:9.3f} ms {t_nb * 1e3:9.3f} ms {t_np / t_nb:8.1f}x")
        else:
            print(f"{label:38s} {t_np * 1e3:9.3f} ms {'-':>12s} {'-':>9s}")


if __name__ == "__main__":
    main()
