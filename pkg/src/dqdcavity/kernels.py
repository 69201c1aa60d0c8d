"""Hot numerical kernels with a numba path and a pure-numpy fallback.

Both paths are exercised in the test suite and must agree to float precision.
Set the environment variable DQDCAVITY_DISABLE_NUMBA to any non-empty value to
force the numpy path (useful on platforms where the JIT is unavailable or when
benchmarking the fallback).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


def numba_enabled() -> bool:
    """True when the JIT path will be used for kernel dispatch."""
    return HAS_NUMBA and not os.environ.get("DQDCAVITY_DISABLE_NUMBA")


def _lorentzian_sum_numpy(omegas: np.ndarray, amplitudes: np.ndarray, poles: np.ndarray) -> np.ndarray:
    # denom[k, i] = -poles[k] - 1j * omegas[i]
    denom = -poles[:, None] - 1j * omegas[None, :]
    return np.sum((amplitudes[:, None] / denom).real, axis=0)


@njit(cache=True)
def _lorentzian_sum_numba(omegas, amplitudes, poles):  # pragma: no cover - jit body
    n_w = omegas.shape[0]
    n_k = poles.shape[0]
    out = np.zeros(n_w)
    for i in range(n_w):
        acc = 0.0
        for k in range(n_k):
            d = -poles[k] - 1j * omegas[i]
            acc += (amplitudes[k] / d).real
        out[i] = acc
    return out


def lorentzian_sum(omegas: np.ndarray, amplitudes: np.ndarray, poles: np.ndarray) -> np.ndarray:
    """Sum of complex Lorentzians Re[c_k / (-lambda_k - i w)] on a frequency grid.

    Parameters
    ----------
    omegas : real array, shape (n_w,)
    amplitudes : complex array, shape (n_k,)
        Residues c_k.
    poles : complex array, shape (n_k,)
        Generator eigenvalues lambda_k (Re <= 0 for a relaxing system).
    """
    omegas = np.ascontiguousarray(omegas, dtype=float)
    amplitudes = np.ascontiguousarray(amplitudes, dtype=complex)
    poles = np.ascontiguousarray(poles, dtype=complex)
    if amplitudes.shape != poles.shape:
        raise ValueError("amplitudes and poles must have identical shapes")
    if numba_enabled():
        return _lorentzian_sum_numba(omegas, amplitudes, poles)
    return _lorentzian_sum_numpy(omegas, amplitudes, poles)


def _exp_decay_sum_numpy(taus: np.ndarray, weights: np.ndarray, rates: np.ndarray) -> np.ndarray:
    # out[m] = sum_k weights[k] * exp(rates[k] * taus[m])
    return np.sum(weights[:, None] * np.exp(rates[:, None] * taus[None, :]), axis=0)


@njit(cache=True)
def _exp_decay_sum_numba(taus, weights, rates):  # pragma: no cover - jit body
    n_t = taus.shape[0]
    n_k = rates.shape[0]
    out = np.zeros(n_t, dtype=np.complex128)
    for m in range(n_t):
        acc = 0.0 + 0.0j
        for k in range(n_k):
            acc += weights[k] * np.exp(rates[k] * taus[m])
        out[m] = acc
    return out


def exp_decay_sum(taus: np.ndarray, weights: np.ndarray, rates: np.ndarray) -> np.ndarray:
    """Complex mode sum sum_k w_k exp(lambda_k tau) on a delay grid."""
    taus = np.ascontiguousarray(taus, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=complex)
    rates = np.ascontiguousarray(rates, dtype=complex)
    if weights.shape != rates.shape:
        raise ValueError("weights and rates must have identical shapes")
    if numba_enabled():
        return _exp_decay_sum_numba(taus, weights, rates)
    return _exp_decay_sum_numpy(taus, weights, rates)
