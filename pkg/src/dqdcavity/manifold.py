"""Transition block between the zero- and one-excitation manifolds.

With gain channels switched off, coherences between one-excitation kets and the
vacuum bra evolve under a closed 3x3 non-Hermitian block of the generator. Its
eigenvalues encode the emission lines: |imaginary part| is the transition
frequency, |real part| the half width at half maximum. Eigenvalue collisions of
this block are the exceptional points where lines coalesce.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import G, X, CompositeBasis, annihilation, qubit_lowering
from .liouvillian import build_liouvillian
from .model import ModelParams, hamiltonian, phat_rates


@dataclass(frozen=True)
class TransitionLine:
    """One emission line: absolute frequency, offset from the cavity, half width."""

    frequency: float
    offset: float
    hwhm: float
    eigenvalue: complex


def transition_matrix_explicit(params: ModelParams) -> np.ndarray:
    """Closed-form 3x3 block in the ket order (|1GG>, |0XG>, |0GX>).

    Diagonal entries carry the state energy minus i/2 times its total outflow
    rate (cavity loss, exciton decay, and the PhAT channel that empties the
    state); off-diagonals are the coherent couplings g1, g2 and the tunneling
    amplitude. The whole matrix is divided by i so eigenvalue imaginary parts
    are frequencies.
    """
    rates = phat_rates(params)
    m = np.array(
        [
            [params.omega0 - 0.5j * params.kappa, params.g1, params.g2],
            [
                params.g1,
                params.omega1 - 0.5j * params.gamma1 - 0.5j * rates.p_T,
                params.tunneling_T,
            ],
            [
                params.g2,
                params.tunneling_T,
                params.omega2 - 0.5j * params.gamma2 - 0.5j * rates.gamma_T,
            ],
        ],
        dtype=complex,
    )
    return m / 1j


def _manifold_indices(basis: CompositeBasis) -> tuple[list[int], list[int]]:
    zero = [basis.index_of(0, G, G)]
    one = [basis.index_of(1, G, G), basis.index_of(0, X, G), basis.index_of(0, G, X)]
    return zero, one


def transition_matrix_generic(params: ModelParams, basis: CompositeBasis) -> np.ndarray:
    """Same block assembled from projected operators, without closed-form input.

    Builds the non-Hermitian drift K = H - (i/2)(gamma_1 n_1 + gamma_2 n_2 +
    kappa a^dag a), projects K and the two PhAT transfer operators onto the
    zero- and one-excitation manifolds, and combines them in the vectorized
    (ket block) x (conjugated bra block) form. Must agree with
    transition_matrix_explicit to machine precision.
    """
    rates = phat_rates(params)
    h = hamiltonian(params, basis).entries
    a = annihilation(basis).entries
    s1 = qubit_lowering(basis, 1).entries
    s2 = qubit_lowering(basis, 2).entries
    k = h - 0.5j * (
        params.gamma1 * (s1.conj().T @ s1)
        + params.gamma2 * (s2.conj().T @ s2)
        + params.kappa * (a.conj().T @ a)
    )
    zero, one = _manifold_indices(basis)

    def block(op: np.ndarray, rows: list[int]) -> np.ndarray:
        return op[np.ix_(rows, rows)]

    eye0 = np.eye(len(zero))
    eye1 = np.eye(len(one))
    m = (np.kron(block(k, one), eye0) - np.kron(eye1, block(k, zero).conj())) / 1j
    transfers = (
        (rates.gamma_T, s1.conj().T @ s2),
        (rates.p_T, s2.conj().T @ s1),
    )
    for xi, c in transfers:
        if xi == 0.0:
            continue
        cdc = c.conj().T @ c
        m += 0.5 * xi * (
            2.0 * np.kron(block(c, one), block(c, zero).conj())
            - np.kron(block(cdc, one), eye0)
            - np.kron(eye1, block(cdc, zero).T)
        )
    return m


def transition_lines(params: ModelParams) -> tuple[TransitionLine, TransitionLine, TransitionLine]:
    """The three emission lines, sorted by frequency then width (both ascending)."""
    eigvals = np.linalg.eigvals(transition_matrix_explicit(params))
    lines = [
        TransitionLine(
            frequency=abs(float(lam.imag)),
            offset=abs(float(lam.imag)) - params.omega0,
            hwhm=abs(float(lam.real)),
            eigenvalue=complex(lam),
        )
        for lam in eigvals
    ]
    lines.sort(key=lambda ln: (ln.frequency, ln.hwhm))
    return tuple(lines)


def liouvillian_block_crosscheck(
    params: ModelParams, basis: CompositeBasis, *, zero_gains: bool = True
) -> float:
    """Max entrywise gap between the projected block and the full generator's.

    The generator rows/columns belonging to (one-excitation ket, vacuum bra)
    coherences are extracted directly from the assembled superoperator and
    compared with transition_matrix_generic. With the gain channels (both dot
    pumps and the cavity feed) zeroed the two agree to machine precision; with
    gains left on they must not, which is what makes this a real cross-check.
    """
    if zero_gains:
        params_used = params.replace(pump1=0.0, pump2=0.0, cavity_pump=0.0)
    else:
        params_used = params
    lio = build_liouvillian(params_used, basis)
    zero, one = _manifold_indices(basis)
    d = basis.dim
    # rho[r, c] sits at vectorized index c*d + r; the vacuum bra has c = 0
    vec_idx = [zero[0] * d + r for r in one]
    sub = lio.entries[np.ix_(vec_idx, vec_idx)]
    target = transition_matrix_generic(params_used, basis)
    return float(np.abs(sub - target).max())


@dataclass(frozen=True)
class ExceptionalPointScan:
    """Line-coalescence scan along the PhAT coupling axis at fixed tunneling.

    min_gaps[i] is the smallest adjacent frequency spacing among the three
    lines at zetas[i]; width_gaps[i] is the width spacing of that same pair.
    zeta_star marks the global minimum: past an exceptional point frequencies
    merge while widths split, so a deep minimum with a sizable width gap is
    the coalescence signature.
    """

    zetas: np.ndarray
    min_gaps: np.ndarray
    width_gaps: np.ndarray
    zeta_star: float
    min_gap: float
    width_gap_at_star: float

    def __post_init__(self):
        for name in ("zetas", "min_gaps", "width_gaps"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def exceptional_point_scan(params: ModelParams, zeta_values=None) -> ExceptionalPointScan:
    """Scan zeta for the closest approach of two transition-line frequencies."""
    if zeta_values is None:
        zeta_values = np.geomspace(1e-3, 10.0, 200)
    zeta_values = np.asarray(zeta_values, dtype=float)
    if zeta_values.size < 2 or zeta_values.min() <= 0.0:
        raise ValueError("zeta scan needs at least 2 strictly positive values")
    min_gaps = np.empty(zeta_values.size)
    width_gaps = np.empty(zeta_values.size)
    for i, z in enumerate(zeta_values):
        lines = transition_lines(params.replace(zeta=float(z)))
        freq_gaps = [lines[1].frequency - lines[0].frequency, lines[2].frequency - lines[1].frequency]
        pair = int(np.argmin(freq_gaps))
        min_gaps[i] = freq_gaps[pair]
        width_gaps[i] = abs(lines[pair + 1].hwhm - lines[pair].hwhm)
    best = int(np.argmin(min_gaps))
    return ExceptionalPointScan(
        zetas=zeta_values,
        min_gaps=min_gaps,
        width_gaps=width_gaps,
        zeta_star=float(zeta_values[best]),
        min_gap=float(min_gaps[best]),
        width_gap_at_star=float(width_gaps[best]),
    )
