"""Field-free Dirac eigenbasis on the lattice and branch projections.

The 1+1D Dirac Hamiltonian is represented with alpha_z = sigma_1 and
beta = sigma_3, so each momentum mode carries the 2x2 block

    H0(k) = [[c^2, c*k], [c*k, -c^2]],   eigenvalues +-E(k), E = sqrt(c^4 + c^2 k^2).

Position-space eigenstates are plane waves e^{ikz}/sqrt(L) times the 2-spinor
eigenvector; with the grid inner product sum_j psi^dag(z_j) chi(z_j) dz they
form an orthonormal basis of 2*n states.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .units import ATOMIC, Constants, Grid


class Branch(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class BranchLabel:
    """One basis state: lattice mode index plus energy branch."""

    mode_index: int
    branch: Branch


def free_energy(k: float, branch: Branch, constants: Constants = ATOMIC) -> float:
    """Relativistic dispersion +-sqrt(c^4 + c^2 k^2)."""
    e = np.sqrt(constants.c2 * constants.c2 + constants.c2 * k * k)
    return float(e if branch is Branch.POSITIVE else -e)


def free_spinor(k: float, branch: Branch, constants: Constants = ATOMIC) -> np.ndarray:
    """Unit eigenvector of H0(k); first nonzero component kept real positive."""
    a = constants.c2
    b = constants.c * k
    e = np.hypot(a, b)
    norm = np.sqrt(2.0 * e * (e + a))
    if branch is Branch.POSITIVE:
        v = np.array([(a + e) / norm, b / norm], dtype=np.complex128)
    else:
        v = np.array([-b / norm, (a + e) / norm], dtype=np.complex128)
    lead = v[0] if v[0] != 0 else v[1]
    if lead.real < 0:
        v = -v
    return v


@dataclass(frozen=True)
class SpinorField:
    """Two complex amplitudes per grid point, position representation."""

    grid: Grid
    values: np.ndarray  # shape (2, n_points), complex128

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (2, self.grid.n_points):
            raise DimensionMismatchError(
                f"values shape {v.shape} != (2, {self.grid.n_points})")
        object.__setattr__(self, "values", v)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.spacing)


@dataclass(frozen=True)
class FreeBasis:
    """Per-mode eigenvectors and energies of both branches, FFT bin order."""

    grid: Grid
    constants: Constants
    pos_energies: np.ndarray   # (n,)
    neg_energies: np.ndarray   # (n,)
    pos_spinors: np.ndarray    # (2, n)
    neg_spinors: np.ndarray    # (2, n)

    @property
    def n_states(self) -> int:
        return 2 * self.grid.n_points


def build_basis(grid: Grid, constants: Constants = ATOMIC) -> FreeBasis:
    """Diagonalize H0(k) on every lattice mode at once."""
    k = grid.momenta
    a = constants.c2
    b = constants.c * k
    e = np.hypot(a, b)
    norm = np.sqrt(2.0 * e * (e + a))
    pos = np.stack([(a + e) / norm, b / norm]).astype(np.complex128)
    neg = np.stack([-b / norm, (a + e) / norm]).astype(np.complex128)
    # phase convention: leading nonzero component real positive
    lead = np.where(neg[0] != 0, neg[0], neg[1]).real
    neg = neg * np.where(lead < 0, -1.0, 1.0)
    for arr in (pos, neg):
        arr.setflags(write=False)
    return FreeBasis(grid=grid, constants=constants,
                     pos_energies=e, neg_energies=-e,
                     pos_spinors=pos, neg_spinors=neg)


def _twiddle(grid: Grid) -> np.ndarray:
    # e^{i k_m L/2} = (-1)^m : accounts for the box starting at -L/2
    return np.where(grid.mode_indices % 2 == 0, 1.0, -1.0)


def position_to_momentum(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Coefficients <k,m| applied to position samples; exact inverse of
    :func:`momentum_to_position`."""
    scale = grid.spacing / np.sqrt(grid.length)
    return _twiddle(grid) * np.fft.fft(values, axis=-1) * scale


def momentum_to_position(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Synthesize position samples from orthonormal plane-wave coefficients."""
    scale = grid.n_points / np.sqrt(grid.length)
    return np.fft.ifft(coeffs * _twiddle(grid), axis=-1) * scale


def basis_state(basis: FreeBasis, label: BranchLabel) -> SpinorField:
    """Position-space W_{m,branch} as a SpinorField."""
    grid = basis.grid
    spinors = basis.pos_spinors if label.branch is Branch.POSITIVE else basis.neg_spinors
    slot = int(np.flatnonzero(grid.mode_indices == label.mode_index)[0])
    coeffs = np.zeros((2, grid.n_points), dtype=np.complex128)
    coeffs[:, slot] = spinors[:, slot]
    return SpinorField(grid=grid, values=momentum_to_position(coeffs, grid))


def project_branch(state: SpinorField, basis: FreeBasis, branch: Branch) -> np.ndarray:
    """All <W_{k,branch}|state> via one FFT pass plus a 2-vector contraction.

    Returned coefficients follow FFT bin order, matching ``grid.momenta``.
    """
    if state.grid != basis.grid:
        raise DimensionMismatchError("state and basis live on different grids")
    coeffs = position_to_momentum(state.values, basis.grid)
    spinors = basis.pos_spinors if branch is Branch.POSITIVE else basis.neg_spinors
    return np.einsum("ck,ck->k", spinors.conj(), coeffs)
