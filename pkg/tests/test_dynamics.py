import numpy as np
import pytest

from dqdcavity import (
    BasisMismatchError,
    SpectrumResult,
    UndefinedObservableError,
    annihilation,
    build_liouvillian,
    build_space,
    default_omega_grid,
    default_tau_grid,
    expectation,
    find_spectrum_peaks,
    g2,
    g2_zero,
    g2_zero_unsquared,
    identity,
    pl_spectrum,
    steady_state,
    two_time_correlation,
)

import oracles


def _decoupled_cavity(laucht):
    return laucht.replace(g1=0.0, g2=0.0, tunneling_T=0.0, zeta=0.0, pump1=0.0, pump2=0.0)


def test_correlation_starts_at_equal_time_moment(laucht):
    basis = build_space(2)
    lop = build_liouvillian(laucht, basis)
    rho = steady_state(lop)
    a = annihilation(basis)
    corr = two_time_correlation(lop, rho, a.dag(), identity(basis), a, np.array([0.0, 1.0]))
    want = expectation(rho, a.dag() @ a)
    assert corr.values[0] == pytest.approx(want, rel=1e-10)
    assert not corr.used_expm_fallback


def test_eigen_and_expm_propagation_agree(laucht):
    basis = build_space(1)
    lop = build_liouvillian(laucht, basis)
    rho = steady_state(lop)
    a = annihilation(basis)
    taus = np.linspace(0.0, 40.0, 9)
    ev = two_time_correlation(lop, rho, a.dag(), identity(basis), a, taus, method="eigen")
    ex = two_time_correlation(lop, rho, a.dag(), identity(basis), a, taus, method="expm")
    assert ex.used_expm_fallback
    scale = np.abs(ev.values[0])
    assert np.abs(ev.values - ex.values).max() < 1e-8 * scale


def test_empty_cavity_coherence_decay_closed_form(laucht):
    # gain/loss-only mode: G(tau) = n exp[(-i w0 - (kappa-P)/2) tau]
    dec = _decoupled_cavity(laucht)
    basis = build_space(4)
    lop = build_liouvillian(dec, basis)
    rho = steady_state(lop)
    a = annihilation(basis)
    n = expectation(rho, a.dag() @ a).real
    taus = np.linspace(0.0, 60.0, 31)
    corr = two_time_correlation(lop, rho, a.dag(), identity(basis), a, taus)
    rate = (dec.kappa - dec.cavity_pump) / 2.0
    want = n * np.exp((-1j * dec.omega0 - rate) * taus)
    # residual deviation is the truncated-ladder correction, O(thermal tail)
    assert np.abs(corr.values - want).max() < 1e-4 * n
    # long-delay falloff: 50/kappa is ~24 coherence lifetimes here
    far = two_time_correlation(
        lop, rho, a.dag(), identity(basis), a, np.array([0.0, 50.0 / dec.kappa])
    )
    assert abs(far.values[1]) < 1e-6 * abs(far.values[0])


def test_correlation_input_validation(laucht):
    basis = build_space(1)
    lop = build_liouvillian(laucht, basis)
    rho = steady_state(lop)
    a = annihilation(basis)
    with pytest.raises(ValueError):
        two_time_correlation(lop, rho, a.dag(), identity(basis), a, np.array([-1.0, 0.0]))
    with pytest.raises(BasisMismatchError):
        two_time_correlation(lop, rho, a.dag(), identity(basis), annihilation(build_space(2)),
                             np.array([0.0]))
    with pytest.raises(ValueError, match="unknown method"):
        two_time_correlation(lop, rho, a.dag(), identity(basis), a, np.array([0.0]),
                             method="magic")


def test_spectrum_of_empty_cavity_is_single_line(laucht):
    dec = _decoupled_cavity(laucht)
    grid = default_omega_grid(dec, half_span=1.5, points=3001)
    spec = pl_spectrum(dec, grid, n_max=6)
    peaks = find_spectrum_peaks(spec)
    assert len(peaks) == 1
    step = grid[1] - grid[0]
    hwhm_want = (dec.kappa - dec.cavity_pump) / 2.0
    assert abs(peaks[0].frequency - dec.omega0) <= step
    assert peaks[0].hwhm == pytest.approx(hwhm_want, rel=0.02)
    # emission sits at positive detuning from zero, near the cavity energy
    assert spec.frequencies[np.argmax(spec.intensities)] > 0


def test_spectrum_sum_rule(laucht):
    # integrated intensity equals the photon escape flux kappa <a^dag a>;
    # the finite window leaves a Lorentzian-tail deficit that shrinks as
    # the grid widens
    basis = build_space(3)
    rho = steady_state(build_liouvillian(laucht, basis))
    a = annihilation(basis)
    flux = laucht.kappa * expectation(rho, a.dag() @ a).real
    narrow = pl_spectrum(laucht, default_omega_grid(laucht), n_max=3)
    total_narrow = np.trapezoid(narrow.intensities, narrow.frequencies)
    assert total_narrow == pytest.approx(flux, rel=0.02)
    wide_grid = default_omega_grid(laucht, half_span=12.0, points=8001)
    wide = pl_spectrum(laucht, wide_grid, n_max=3)
    total_wide = np.trapezoid(wide.intensities, wide_grid)
    assert total_wide == pytest.approx(flux, rel=0.005)
    assert abs(total_wide - flux) < abs(total_narrow - flux)


def test_spectrum_matches_half_fourier_of_correlation(laucht):
    basis = build_space(2)
    lop = build_liouvillian(laucht, basis)
    rho = steady_state(lop)
    a = annihilation(basis)
    taus = np.arange(0.0, 600.0 + 1e-9, 0.05)
    corr = two_time_correlation(lop, rho, a.dag(), identity(basis), a, taus, method="expm")
    grid = default_omega_grid(laucht, points=401)
    spec = pl_spectrum(laucht, grid, n_max=2)
    # demodulate so the trapezoid only sees the slow envelope
    envelope = corr.values * np.exp(1j * laucht.omega0 * taus)
    brute = laucht.kappa * oracles.half_fourier(taus, envelope, grid - laucht.omega0)
    assert np.abs(brute - spec.intensities).max() < 1e-4 * spec.intensities.max()


def test_spectrum_metadata_and_component_filter(laucht):
    grid = default_omega_grid(laucht, points=201)
    spec = pl_spectrum(laucht, grid, n_max=2)
    assert spec.kappa == laucht.kappa
    assert spec.omega0 == laucht.omega0
    assert np.allclose(spec.offsets, spec.frequencies - laucht.omega0)
    dim = build_space(2).dim
    assert 0 < len(spec.components) < dim * dim  # negligible modes dropped
    for amp, pole in spec.components:
        assert pole.real <= 1e-12  # stable modes only


def test_peak_detector_on_synthetic_lines():
    grid = np.linspace(-2.0, 2.0, 4001)
    truth = [(-0.7, 0.05, 1.0), (0.1, 0.02, 0.4), (0.9, 0.08, 0.7)]
    y = sum(oracles.lorentzian(grid, c, w, s) for c, w, s in truth)
    spec = SpectrumResult(
        frequencies=grid, offsets=grid, intensities=y,
        amplitudes=np.array([1.0 + 0j]), poles=np.array([-1.0 + 0j]),
        kappa=1.0, omega0=0.0,
    )
    peaks = find_spectrum_peaks(spec)
    assert len(peaks) == 3
    for pk, (center, hwhm, _) in zip(peaks, truth):
        assert abs(pk.frequency - center) <= grid[1] - grid[0]
        assert pk.hwhm == pytest.approx(hwhm, rel=0.1)


def test_peak_detector_needs_uniform_grid():
    grid = np.geomspace(0.1, 1.0, 64)
    spec = SpectrumResult(
        frequencies=grid, offsets=grid, intensities=np.ones_like(grid),
        amplitudes=np.array([1.0 + 0j]), poles=np.array([-1.0 + 0j]),
        kappa=1.0, omega0=0.0,
    )
    with pytest.raises(ValueError, match="uniform"):
        find_spectrum_peaks(spec)


def test_thermal_photons_bunch(laucht):
    dec = _decoupled_cavity(laucht)
    _, g2_want = oracles.thermal_cavity_moments(dec.cavity_pump, dec.kappa)
    assert g2_zero(dec, n_max=8) == pytest.approx(g2_want, abs=1e-6)


def test_g2_normalization_variants(laucht, fig3):
    basis = build_space(3)
    rho = steady_state(build_liouvillian(laucht, basis))
    a = annihilation(basis)
    n = expectation(rho, a.dag() @ a).real
    assert g2_zero_unsquared(laucht, n_max=3) == pytest.approx(
        g2_zero(laucht, n_max=3) * n, rel=1e-10
    )
    # frozen regression: strongly pumped preset antibunches at zero delay
    assert g2_zero(fig3, n_max=3) == pytest.approx(0.847522765751644, rel=1e-9)
    assert g2_zero(fig3, n_max=3) < 1.0


def test_g2_curve_shape_and_long_delay_limit(laucht):
    taus = np.array([0.0, 1.0 / laucht.kappa, 100.0 / laucht.kappa])
    curve = g2(laucht, taus, n_max=2)
    assert isinstance(curve, list) and len(curve) == 3
    for tau, val in curve:
        assert isinstance(tau, float) and isinstance(val, float)
    assert curve[0][1] == pytest.approx(g2_zero(laucht, n_max=2), rel=1e-8)
    assert curve[-1][1] == pytest.approx(1.0, abs=1e-3)


def test_g2_undefined_for_dark_cavity(laucht):
    dark = laucht.replace(pump1=0.0, pump2=0.0, cavity_pump=0.0, zeta=0.0)
    with pytest.raises(UndefinedObservableError):
        g2_zero(dark, n_max=2)


def test_default_grids(laucht):
    grid = default_omega_grid(laucht)
    assert len(grid) == 2001
    assert grid[0] == pytest.approx(laucht.omega0 - 3.0)
    assert grid[-1] == pytest.approx(laucht.omega0 + 3.0)
    taus = default_tau_grid(laucht)
    assert taus[0] == pytest.approx(1e-3 / laucht.kappa)
    assert taus[-1] == pytest.approx(1e2 / laucht.kappa)
    assert np.all(np.diff(taus) > 0)
