"""Atomic-unit constants and the periodic space/momentum lattice.

Everything downstream works in Hartree atomic units (hbar = e = m_e = 1),
where the speed of light is c = 137.035999, the Compton wavelength is 1/c
and the electron rest energy is c^2.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

C_LIGHT = 137.035999


@dataclass(frozen=True)
class Constants:
    """Atomic-unit constants; lambda_c * c == 1 and c2 == c * c hold exactly."""

    c: float = C_LIGHT
    lambda_c: float = 1.0 / C_LIGHT
    c2: float = C_LIGHT * C_LIGHT


ATOMIC = Constants()


@dataclass(frozen=True)
class Grid:
    """Uniform periodic lattice on [-L/2, L/2) with its Fourier-conjugate momenta.

    ``positions`` are in ascending order.  ``mode_indices`` and ``momenta``
    follow FFT bin order (0, 1, ..., n/2-1, -n/2, ..., -1), which is the
    layout every momentum-space array in this package uses.
    """

    length: float
    n_points: int
    spacing: float
    positions: np.ndarray = field(repr=False)
    mode_indices: np.ndarray = field(repr=False)
    momenta: np.ndarray = field(repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self.length == other.length and self.n_points == other.n_points

    def __hash__(self) -> int:
        return hash((self.length, self.n_points))

    @property
    def momentum_cutoff(self) -> float:
        """Largest |k| representable on the lattice (the -n/2 Nyquist mode)."""
        return float(np.pi * self.n_points / self.length)


def make_grid(length: float, n_points: int) -> Grid:
    """Build the periodic lattice z_j = -L/2 + j*dz and momenta k_m = 2*pi*m/L."""
    if not length > 0:
        raise ConfigurationError(f"length must be positive, got {length}")
    if n_points % 2 != 0 or n_points < 8:
        raise ConfigurationError(f"n_points must be even, >= 8, got {n_points}")
    spacing = length / n_points
    positions = -length / 2 + spacing * np.arange(n_points)
    mode_indices = np.fft.fftfreq(n_points, d=1.0 / n_points).astype(np.int64)
    momenta = 2.0 * np.pi * mode_indices / length
    for arr in (positions, mode_indices, momenta):
        arr.setflags(write=False)
    return Grid(length=float(length), n_points=int(n_points), spacing=spacing,
                positions=positions, mode_indices=mode_indices, momenta=momenta)


def momentum_of(grid: Grid, mode_index: int) -> float:
    """Momentum 2*pi*m/L of one lattice mode; m must lie in [-n/2, n/2)."""
    half = grid.n_points // 2
    if not -half <= mode_index < half:
        raise ConfigurationError(
            f"mode_index {mode_index} outside [{-half}, {half})")
    return 2.0 * np.pi * mode_index / grid.length


def check_simulation_grid(grid: Grid, constants: Constants = ATOMIC) -> None:
    """Require the momentum cutoff to clear 3c.

    Created particles carry momenta of a few c; production runs need the
    lattice to resolve them with margin.  Analysis-only helpers (dense
    diagonalization, toy propagator checks) may use coarser grids and skip
    this check.
    """
    if grid.momentum_cutoff <= 3.0 * constants.c:
        raise ConfigurationError(
            f"momentum cutoff pi*n/L = {grid.momentum_cutoff:.1f} must exceed "
            f"3c = {3.0 * constants.c:.1f}; increase n_points or shrink length")
