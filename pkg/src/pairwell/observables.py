"""Pair-creation observables built from amplitude snapshots.

The cross-branch amplitude matrix U_pn (projections of the time-evolved
negative-energy states onto positive-energy states) carries all of it:

    N(t)      = sum_{p,n} |U_pn(t)|^2             created-electron number
    rho(z,t)  = sum_n |sum_p U_pn(t) W_p(z)|^2    created-electron density

and the positron count is the mirror block U_np.  Summations run in a fixed
order (vectorized per column, exact float summation across columns and
chunks) so results are reproducible bit-for-bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import Branch, FreeBasis, momentum_to_position
from .errors import DimensionMismatchError, NumericError
from .propagator import SnapshotBlock
from .units import Grid

COLUMN_NORM_TOL = 1e-8


@dataclass(frozen=True)
class AmplitudeMatrix:
    """Cross-branch amplitudes at one time; axes in ascending mode order."""

    t: float
    entries: np.ndarray  # complex, shape (n_projection_modes, n_states)

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.complex128)
        object.__setattr__(self, "entries", e)
        col = np.sum(e.real ** 2 + e.imag ** 2, axis=0)
        if col.size and float(col.max()) > 1.0 + COLUMN_NORM_TOL:
            raise NumericError(
                f"column norm {float(col.max()):.12f} exceeds 1 + {COLUMN_NORM_TOL}")


@dataclass(frozen=True)
class NumberSeries:
    """Ordered (t, N) samples of the created-particle count."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if t.shape != v.shape:
            raise DimensionMismatchError("times and values differ in shape")
        if v.size and float(v.min()) < 0:
            raise NumericError(f"negative particle number {float(v.min()):.3e}")
        if t.size and t[0] == 0.0 and abs(v[0]) > 1e-10:
            raise NumericError(f"N(0) = {v[0]:.3e} should vanish")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def final(self) -> float:
        return float(self.values[-1])


@dataclass(frozen=True)
class DensityProfile:
    """Created-particle probability density over the grid at one time."""

    t: float
    grid: Grid
    values: np.ndarray

    def integral(self) -> float:
        return float(np.sum(self.values) * self.grid.spacing)


def _abs_sq_column_sums(entries: np.ndarray) -> np.ndarray:
    return np.einsum("pn->n", entries.real ** 2 + entries.imag ** 2)


def electron_number(matrix: AmplitudeMatrix | np.ndarray) -> float:
    """sum |U_pn|^2: vectorized per column, exact summation across columns."""
    entries = matrix.entries if isinstance(matrix, AmplitudeMatrix) else np.asarray(matrix)
    if entries.size == 0:
        return 0.0
    return math.fsum(_abs_sq_column_sums(entries).tolist())


def pair_symmetry_defect(u_pn: AmplitudeMatrix | np.ndarray,
                         u_np: AmplitudeMatrix | np.ndarray) -> float:
    """|N_electrons - N_positrons| from the two cross blocks of one snapshot."""
    return abs(electron_number(u_pn) - electron_number(u_np))


def electron_density(matrix: AmplitudeMatrix | np.ndarray, basis: FreeBasis,
                     branch: Branch = Branch.POSITIVE) -> DensityProfile:
    """Synthesize sum_n |sum_p U_pn W_p(z)|^2 on the grid.

    ``matrix`` must use ascending mode order on the projection axis (as
    produced by the collectors below); ``branch`` names the projection
    branch the rows refer to.
    """
    entries = matrix.entries if isinstance(matrix, AmplitudeMatrix) else np.asarray(matrix)
    t = matrix.t if isinstance(matrix, AmplitudeMatrix) else 0.0
    grid = basis.grid
    if entries.shape[0] != grid.n_points:
        raise DimensionMismatchError(
            f"projection axis {entries.shape[0]} != n_points {grid.n_points}")
    order = np.argsort(grid.mode_indices, kind="stable")
    rows_fft = np.empty_like(entries)
    rows_fft[order] = entries  # back to FFT bin order for synthesis
    spinors = basis.pos_spinors if branch is Branch.POSITIVE else basis.neg_spinors
    coeffs = spinors[:, None, :] * rows_fft.T[None, :, :]
    fields = momentum_to_position(coeffs, grid)
    values = np.einsum("csj->j", fields.real ** 2 + fields.imag ** 2)
    return DensityProfile(t=t, grid=grid, values=values)


class NumberCollector:
    """Accumulates N(t) from snapshot blocks, one partial sum per chunk."""

    def __init__(self):
        self._times: dict[int, float] = {}
        self._partials: dict[int, list[float]] = {}

    def __call__(self, block: SnapshotBlock) -> None:
        self._times[block.index] = block.t
        s = float(np.einsum("sk->", block.u.real ** 2 + block.u.imag ** 2))
        self._partials.setdefault(block.index, []).append(s)

    def series(self) -> NumberSeries:
        idx = sorted(self._times)
        times = np.array([self._times[i] for i in idx])
        values = np.array([math.fsum(self._partials[i]) for i in idx])
        return NumberSeries(times=times, values=values)


class ColumnNormCollector:
    """Tracks the worst |column norm - 1| at each snapshot."""

    def __init__(self):
        self.worst_by_index: dict[int, float] = {}

    def __call__(self, block: SnapshotBlock) -> None:
        err = float(np.max(np.abs(block.col_norm_sq - 1.0))) if block.col_norm_sq.size else 0.0
        prev = self.worst_by_index.get(block.index, 0.0)
        self.worst_by_index[block.index] = max(prev, err)

    @property
    def worst(self) -> float:
        return max(self.worst_by_index.values(), default=0.0)


class FinalAmplitudeCollector:
    """Assembles the full cross-branch matrix at the last snapshot."""

    def __init__(self, grid: Grid, final_index: int):
        self._grid = grid
        self._final_index = final_index
        self._t = 0.0
        self._blocks: list[tuple[np.ndarray, np.ndarray]] = []

    def __call__(self, block: SnapshotBlock) -> None:
        if block.index != self._final_index:
            return
        self._t = block.t
        self._blocks.append((block.state_modes, block.u))

    def matrix(self) -> AmplitudeMatrix:
        grid = self._grid
        n = grid.n_points
        total_states = sum(len(modes) for modes, _ in self._blocks)
        entries = np.zeros((n, total_states), dtype=np.complex128)
        half = n // 2
        for modes, u in self._blocks:
            cols = modes + half  # ascending mode index -> column
            entries[:, cols] = u.T
        order = np.argsort(grid.mode_indices, kind="stable")
        return AmplitudeMatrix(t=self._t, entries=entries[order])


class DensityCollector:
    """Accumulates the created-particle density at every snapshot."""

    def __init__(self, basis: FreeBasis, branch: Branch = Branch.POSITIVE):
        self._basis = basis
        self._spinors = (basis.pos_spinors if branch is Branch.POSITIVE
                         else basis.neg_spinors)
        self._times: dict[int, float] = {}
        self._sums: dict[int, np.ndarray] = {}

    def __call__(self, block: SnapshotBlock) -> None:
        grid = self._basis.grid
        coeffs = self._spinors[:, None, :] * block.u[None, :, :]
        fields = momentum_to_position(coeffs, grid)
        dens = np.einsum("csj->j", fields.real ** 2 + fields.imag ** 2)
        self._times[block.index] = block.t
        if block.index in self._sums:
            self._sums[block.index] += dens
        else:
            self._sums[block.index] = dens

    def profiles(self) -> list[DensityProfile]:
        return [DensityProfile(t=self._times[i], grid=self._basis.grid,
                               values=self._sums[i])
                for i in sorted(self._times)]


class MultiObserver:
    """Fans one snapshot stream out to several collectors."""

    def __init__(self, *observers):
        self._observers = [o for o in observers if o is not None]

    def __call__(self, block: SnapshotBlock) -> None:
        for obs in self._observers:
            obs(block)
