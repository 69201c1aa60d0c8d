"""Steady-state extraction from the vectorized Liouvillian and related observables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .errors import (
    BasisMismatchError,
    DegenerateSteadyStateError,
    SteadyStateConvergenceError,
)
from .hilbert import CompositeBasis, OperatorMatrix, annihilation, qubit_lowering
from .liouvillian import SuperoperatorMatrix, build_liouvillian, trace_functional, unvec, vec
from .model import ModelParams

# reciprocal condition of the trace-row system below this means the kernel
# itself is degenerate, not merely a slow relaxation mode
_RCOND_FLOOR = 1e-13


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace density matrix on a CompositeBasis."""

    basis: CompositeBasis
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        if arr.shape != (self.basis.dim, self.basis.dim):
            raise ValueError(
                f"entries shape {arr.shape} does not match basis dim {self.basis.dim}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])


def steady_state(
    liouvillian: SuperoperatorMatrix,
    *,
    method: str = "lu",
    rtol: float = 1e-10,
) -> DensityMatrix:
    """Unique stationary density matrix of the generator.

    Parameters
    ----------
    liouvillian : SuperoperatorMatrix
        Generator in the column-stacking convention.
    method : {"lu", "eigen"}
        "lu" replaces the first (redundant) row with the trace functional and
        solves the dense linear system. "eigen" extracts the eigenvector of the
        smallest-magnitude eigenvalue; it is the slower cross-check path.
    rtol : float
        Residual bound: the result satisfies ||L vec(rho)||_inf <= rtol * ||L||_inf.

    Raises
    ------
    DegenerateSteadyStateError
        If the kernel of the generator is more than one-dimensional.
    SteadyStateConvergenceError
        If no vector meets the residual bound.
    """
    dim = liouvillian.basis.dim
    l_mat = liouvillian.entries
    if method == "lu":
        x = _solve_trace_row(l_mat, dim)
    elif method == "eigen":
        x = _solve_eigen(l_mat)
    else:
        raise ValueError(f"unknown method {method!r}; use 'lu' or 'eigen'")

    rho = unvec(x, dim)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-300:
        raise SteadyStateConvergenceError("steady-state candidate has vanishing trace")
    rho = rho / tr

    norm_l = liouvillian.norm_inf()
    residual = float(np.abs(l_mat @ vec(rho)).max())
    if norm_l > 0 and residual > rtol * norm_l:
        raise SteadyStateConvergenceError(
            f"steady-state residual {residual:.3e} exceeds {rtol:.1e} * ||L||_inf = {rtol * norm_l:.3e}"
        )
    return DensityMatrix(liouvillian.basis, rho)


def _solve_trace_row(l_mat: np.ndarray, dim: int) -> np.ndarray:
    m = l_mat.copy()
    m[0, :] = trace_functional(dim)
    anorm = float(np.abs(m).sum(axis=0).max())
    lu, piv, info = lapack.zgetrf(m)
    if info != 0:
        raise DegenerateSteadyStateError(
            "trace-row system is singular: the stationary state is not unique"
        )
    rcond, info = lapack.zgecon(lu, anorm, norm="1")
    if info != 0 or not np.isfinite(rcond) or rcond < _RCOND_FLOOR:
        raise DegenerateSteadyStateError(
            f"trace-row system is numerically singular (rcond = {rcond:.2e}): "
            "the stationary state is not unique"
        )
    b = np.zeros(dim * dim, dtype=complex)
    b[0] = 1.0
    x, info = lapack.zgetrs(lu, piv, b)
    if info != 0:
        raise SteadyStateConvergenceError("LU back substitution failed")
    return x


def _solve_eigen(l_mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eig(l_mat)
    order = np.argsort(np.abs(w))
    scale = float(np.abs(l_mat).sum(axis=1).max())
    if np.abs(w[order[0]]) > 1e-8 * scale:
        raise SteadyStateConvergenceError(
            f"no eigenvalue within tolerance of zero (closest |lambda| = {np.abs(w[order[0]]):.3e})"
        )
    if len(order) > 1 and np.abs(w[order[1]]) < 1e-8 * scale:
        raise DegenerateSteadyStateError(
            "second eigenvalue within tolerance of zero: stationary state is not unique"
        )
    return v[:, order[0]]


def expectation(rho: DensityMatrix, op: OperatorMatrix) -> complex:
    """Tr(rho O). Imaginary parts are the caller's to discard for Hermitian O."""
    if rho.basis != op.basis:
        raise BasisMismatchError(
            f"density matrix and operator bases differ (n_max {rho.basis.n_max} vs {op.basis.n_max})"
        )
    return complex(np.trace(rho.entries @ op.entries))


def steady_observables(params: ModelParams, n_max: int = 3) -> dict[str, float]:
    """Stationary occupations: photons and the two exciton populations."""
    basis = CompositeBasis(n_max)
    rho = steady_state(build_liouvillian(params, basis))
    a = annihilation(basis)
    s1 = qubit_lowering(basis, 1)
    s2 = qubit_lowering(basis, 2)
    return {
        "n_cavity": expectation(rho, a.dag() @ a).real,
        "n_qd1": expectation(rho, s1.dag() @ s1).real,
        "n_qd2": expectation(rho, s2.dag() @ s2).real,
    }
