"""Two-time correlations, emission spectrum, and photon statistics.

Everything here rides on the regression property of the master equation: a
correlation Tr[A e^{L tau}(C rho B)] is obtained by propagating the seeded
matrix C rho B with the same generator as the state. The spectrum is the
half-Fourier transform of <a^dag(0) a(tau)> in the steady state, evaluated
exactly as a sum of complex Lorentzians over generator eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.signal

from .errors import BasisMismatchError, DiagonalizationError, UndefinedObservableError
from .hilbert import CompositeBasis, OperatorMatrix, annihilation
from .kernels import exp_decay_sum, lorentzian_sum
from .liouvillian import SuperoperatorMatrix, build_liouvillian, vec
from .model import ModelParams
from .steadystate import DensityMatrix, expectation, steady_state

# relative residue cutoff; modes this far below the strongest carry no weight
_AMPLITUDE_CUTOFF = 1e-14


def _readout_row(op: np.ndarray) -> np.ndarray:
    # Tr[A unvec(x)] with column-stacked x is the row-major ravel of A dotted with x
    return op.ravel(order="C")


@dataclass(frozen=True)
class CorrelationResult:
    """Samples of G(tau) = <op_left(0) op_obs(tau) op_right(0)> in the steady state."""

    taus: np.ndarray
    values: np.ndarray
    used_expm_fallback: bool = False

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=float).copy()
        values = np.asarray(self.values, dtype=complex).copy()
        if taus.shape != values.shape:
            raise ValueError("taus and values must have identical shapes")
        taus.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SpectrumResult:
    """Emission intensity on a frequency grid plus its Lorentzian mode content.

    frequencies are absolute (meV); offsets are frequencies - omega0. The
    components property pairs each retained residue with its generator
    eigenvalue; summing Re[c_k / (-lambda_k - i w)] times kappa/pi over
    components reproduces intensities exactly.
    """

    frequencies: np.ndarray
    offsets: np.ndarray
    intensities: np.ndarray
    amplitudes: np.ndarray
    poles: np.ndarray
    kappa: float
    omega0: float

    def __post_init__(self):
        for name in ("frequencies", "offsets", "intensities"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("amplitudes", "poles"):
            arr = np.asarray(getattr(self, name), dtype=complex).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.amplitudes.shape != self.poles.shape:
            raise ValueError("amplitudes and poles must have identical shapes")

    @property
    def components(self) -> list[tuple[complex, complex]]:
        return [(complex(a), complex(p)) for a, p in zip(self.amplitudes, self.poles)]


@dataclass(frozen=True)
class SpectrumPeak:
    """One detected spectral peak: position, height, and half width from the grid."""

    frequency: float
    offset: float
    height: float
    hwhm: float
    prominence: float


def _mode_weights(
    l_entries: np.ndarray, seed: np.ndarray, obs_row: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Decompose obs_row @ e^{Lt} @ seed into sum_k w_k exp(lambda_k t).

    Raises DiagonalizationError when the eigenbasis fails to reproduce the
    t = 0 value, which is the practical symptom of a defective or severely
    ill-conditioned eigenvector matrix.
    """
    try:
        lams, vmat = np.linalg.eig(l_entries)
        coeff = np.linalg.solve(vmat, seed)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationError(f"generator eigendecomposition failed: {exc}") from exc
    weights = (obs_row @ vmat) * coeff
    direct = complex(obs_row @ seed)
    recon = complex(weights.sum())
    scale = max(abs(direct), float(np.abs(weights).max(initial=0.0)), 1e-300)
    if abs(recon - direct) > 1e-8 * scale:
        raise DiagonalizationError(
            f"eigenbasis reconstruction off by {abs(recon - direct):.3e} "
            f"(scale {scale:.3e}) at tau = 0"
        )
    return weights, lams


def _propagate_expm(
    l_entries: np.ndarray, seed: np.ndarray, obs_row: np.ndarray, taus: np.ndarray
) -> np.ndarray:
    values = np.empty(taus.shape, dtype=complex)
    order = np.argsort(taus, kind="stable")
    x = seed.astype(complex)
    reached = 0.0
    cache: dict[float, np.ndarray] = {}
    for i in order:
        dt = float(taus[i]) - reached
        if dt > 0.0:
            prop = cache.get(dt)
            if prop is None:
                prop = scipy.linalg.expm(l_entries * dt)
                cache[dt] = prop
            x = prop @ x
            reached = float(taus[i])
        values[i] = obs_row @ x
    return values


def two_time_correlation(
    liouvillian: SuperoperatorMatrix,
    rho_ss: DensityMatrix,
    op_left: OperatorMatrix,
    op_right: OperatorMatrix,
    op_obs: OperatorMatrix,
    taus,
    *,
    method: str = "eigen",
) -> CorrelationResult:
    """G(tau) = Tr[op_obs unvec(e^{L tau} vec(op_right rho_ss op_left))], tau >= 0.

    The seed op_right rho op_left places op_left at time zero on the left of
    the time-tau observable and op_right on its right, so
    G(0) = <op_left op_obs op_right> in the steady state.

    method="eigen" (default) expands the seed over generator eigenvectors; if
    the eigenbasis is unusable it falls back to stepwise matrix exponentials
    and flags that on the result. method="expm" forces the fallback path.
    """
    basis = liouvillian.basis
    for op in (op_left, op_right, op_obs):
        if op.basis != basis:
            raise BasisMismatchError("correlation operators must share the generator's basis")
    if rho_ss.basis != basis:
        raise BasisMismatchError("density matrix basis does not match the generator")
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if taus.size and taus.min() < 0.0:
        raise ValueError("delay times must be >= 0")

    seed = vec(op_right.entries @ rho_ss.entries @ op_left.entries)
    obs_row = _readout_row(op_obs.entries)

    if method == "eigen":
        try:
            weights, lams = _mode_weights(liouvillian.entries, seed, obs_row)
        except DiagonalizationError:
            values = _propagate_expm(liouvillian.entries, seed, obs_row, taus)
            return CorrelationResult(taus, values, used_expm_fallback=True)
        return CorrelationResult(taus, exp_decay_sum(taus, weights, lams))
    if method == "expm":
        values = _propagate_expm(liouvillian.entries, seed, obs_row, taus)
        return CorrelationResult(taus, values, used_expm_fallback=True)
    raise ValueError(f"unknown method {method!r}; use 'eigen' or 'expm'")


def default_omega_grid(params: ModelParams, half_span: float = 3.0, points: int = 2001) -> np.ndarray:
    """Uniform frequency grid centered on the cavity energy (meV)."""
    if half_span <= 0.0 or points < 2:
        raise ValueError("need half_span > 0 and at least 2 grid points")
    return np.linspace(params.omega0 - half_span, params.omega0 + half_span, points)


def pl_spectrum(
    params: ModelParams,
    omega_grid=None,
    *,
    n_max: int = 3,
    amplitude_cutoff: float = _AMPLITUDE_CUTOFF,
) -> SpectrumResult:
    """Cavity emission spectrum I(w) = (kappa/pi) Re sum_k c_k / (-lambda_k - i w).

    The residues c_k come from expanding vec(rho_ss a^dag) over generator
    eigenvectors and reading out with a, i.e. the half-Fourier transform of
    <a^dag(0) a(tau)>. No overall normalization beyond the kappa/pi prefactor,
    so integrating I over a wide grid recovers kappa <a^dag a>.
    """
    if omega_grid is None:
        omega_grid = default_omega_grid(params)
    omega_grid = np.asarray(omega_grid, dtype=float)
    basis = CompositeBasis(n_max)
    lio = build_liouvillian(params, basis)
    rho = steady_state(lio)
    a = annihilation(basis)
    seed = vec(rho.entries @ a.dag().entries)
    obs_row = _readout_row(a.entries)
    weights, lams = _mode_weights(lio.entries, seed, obs_row)
    top = float(np.abs(weights).max(initial=0.0))
    keep = np.abs(weights) > amplitude_cutoff * top
    if not keep.any():
        keep = np.abs(weights) == top
    weights, lams = weights[keep], lams[keep]
    intensities = (params.kappa / np.pi) * lorentzian_sum(omega_grid, weights, lams)
    return SpectrumResult(
        frequencies=omega_grid,
        offsets=omega_grid - params.omega0,
        intensities=intensities,
        amplitudes=weights,
        poles=lams,
        kappa=params.kappa,
        omega0=params.omega0,
    )


def find_spectrum_peaks(spectrum: SpectrumResult, rel_prominence: float = 0.05) -> list[SpectrumPeak]:
    """Peaks of the intensity curve with prominence >= rel_prominence * max.

    Requires a uniform frequency grid. The half width is half the peak's width
    measured at half prominence, which for an isolated line on a flat
    background is the usual Lorentzian HWHM.
    """
    freqs = spectrum.frequencies
    y = spectrum.intensities
    if freqs.size < 3:
        return []
    steps = np.diff(freqs)
    dw = steps[0]
    if dw <= 0 or not np.allclose(steps, dw, rtol=1e-9, atol=0.0):
        raise ValueError("peak detection requires a uniformly spaced frequency grid")
    top = float(y.max(initial=0.0))
    if top <= 0.0:
        return []
    idx, props = scipy.signal.find_peaks(y, prominence=rel_prominence * top)
    if idx.size == 0:
        return []
    widths, _, _, _ = scipy.signal.peak_widths(y, idx, rel_height=0.5)
    peaks = [
        SpectrumPeak(
            frequency=float(freqs[i]),
            offset=float(freqs[i] - spectrum.omega0),
            height=float(y[i]),
            hwhm=float(0.5 * w * dw),
            prominence=float(p),
        )
        for i, w, p in zip(idx, widths, props["prominences"])
    ]
    return peaks


def _second_moment_ops(basis: CompositeBasis):
    a = annihilation(basis)
    num = a.dag() @ a
    pair = a.dag() @ a.dag() @ a @ a
    return a, num, pair


def g2_zero(params: ModelParams, *, n_max: int = 3) -> float:
    """g2(0) = <a^dag a^dag a a> / <a^dag a>^2 from the steady state alone."""
    basis = CompositeBasis(n_max)
    rho = steady_state(build_liouvillian(params, basis))
    return g2_zero_from_state(rho)


def g2_zero_from_state(rho: DensityMatrix) -> float:
    """Equal-time g2 evaluated on an already-computed steady state."""
    _, num, pair = _second_moment_ops(rho.basis)
    n_avg = expectation(rho, num).real
    if n_avg <= 1e-12:
        raise UndefinedObservableError(
            f"photon number {n_avg:.3e} too small for a normalized g2"
        )
    return expectation(rho, pair).real / n_avg**2


def g2_zero_unsquared(params: ModelParams, *, n_max: int = 3) -> float:
    """The raw ratio <a^dag a^dag a a> / <a^dag a> (denominator not squared).

    Exposed for comparison only; the normalized statistics use g2_zero.
    """
    basis = CompositeBasis(n_max)
    rho = steady_state(build_liouvillian(params, basis))
    _, num, pair = _second_moment_ops(basis)
    n_avg = expectation(rho, num).real
    if n_avg <= 1e-12:
        raise UndefinedObservableError(
            f"photon number {n_avg:.3e} too small for a normalized g2"
        )
    return expectation(rho, pair).real / n_avg


def default_tau_grid(params: ModelParams, points: int = 200) -> np.ndarray:
    """Geometric delay grid from 1e-3/kappa to 1e2/kappa (units hbar/meV)."""
    if params.kappa <= 0.0:
        raise ValueError("tau grid needs kappa > 0 to set the delay scale")
    return np.geomspace(1e-3 / params.kappa, 1e2 / params.kappa, points)


def g2(params: ModelParams, taus=None, *, n_max: int = 3) -> list[tuple[float, float]]:
    """Normalized second-order coherence g2(tau) on a delay grid.

    g2(tau) = Tr[a^dag a e^{L tau}(a rho_ss a^dag)] / <a^dag a>^2. Raises
    UndefinedObservableError when the steady photon number is negligible.
    """
    basis = CompositeBasis(n_max)
    lio = build_liouvillian(params, basis)
    rho = steady_state(lio)
    a, num, _ = _second_moment_ops(basis)
    n_avg = expectation(rho, num).real
    if n_avg <= 1e-12:
        raise UndefinedObservableError(
            f"photon number {n_avg:.3e} too small for a normalized g2"
        )
    if taus is None:
        taus = default_tau_grid(params)
    corr = two_time_correlation(lio, rho, a.dag(), a, num, taus)
    normalized = corr.values.real / n_avg**2
    return [(float(t), float(v)) for t, v in zip(corr.taus, normalized)]
