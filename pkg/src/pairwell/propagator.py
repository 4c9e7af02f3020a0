"""Split-operator time evolution of Dirac states under the driven well.

One Strang step over h is

    exp(-i H0 h/2) . exp(-i V(z, t+h/2) h) . exp(-i H0 h/2)

with the kinetic factor applied analytically per momentum mode,

    exp(-i H0(k) tau) = cos(E tau) I - i sin(E tau) H0(k)/E,

so the free theory is propagated exactly for any step size and every factor
is unitary to round-off.  The ensemble driver evolves whole batches of basis
states at once (vectorized over states, FFT along the mode axis) and hands
cross-branch projection snapshots to an observer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.fft as sfft

from .basis import Branch, FreeBasis, SpinorField, position_to_momentum, momentum_to_position
from .errors import ConfigurationError, DimensionMismatchError
from .potential import WellParams, depth_at, width_at, well_profile
from .units import ATOMIC, Grid

#: canonical run length: one full drive period of the low-frequency scan
T_FINAL_DEFAULT = 50.0 * math.pi / ATOMIC.c2

#: largest tolerated potential phase V0*dt per step
MAX_POTENTIAL_PHASE = 0.1

DEFAULT_STEPS_PER_PERIOD = 8192
DEFAULT_SNAPSHOT_STRIDE = 32
DEFAULT_CHUNK_STATES = 128


@dataclass(frozen=True)
class TimeStepping:
    """Step size, horizon and snapshot cadence for one run."""

    dt: float
    t_final: float
    snapshot_stride: int = DEFAULT_SNAPSHOT_STRIDE

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be > 0, got {self.dt}")
        if not self.t_final > 0:
            raise ConfigurationError(f"t_final must be > 0, got {self.t_final}")
        if self.snapshot_stride < 1:
            raise ConfigurationError(
                f"snapshot_stride must be >= 1, got {self.snapshot_stride}")

    @property
    def n_steps(self) -> int:
        return max(1, math.ceil(self.t_final / self.dt - 1e-9))

    def snapshot_steps(self) -> list[int]:
        steps = list(range(0, self.n_steps, self.snapshot_stride))
        steps.append(self.n_steps)
        return steps


def default_stepping(params: WellParams, t_final: float | None = None, *,
                     steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
                     snapshot_stride: int = DEFAULT_SNAPSHOT_STRIDE) -> TimeStepping:
    """Resolve the drive with ``steps_per_period`` samples, clipped so that
    the potential phase per step stays below MAX_POTENTIAL_PHASE."""
    dt = params.drive_period / steps_per_period
    if params.v0 > 0:
        dt = min(dt, MAX_POTENTIAL_PHASE / params.v0)
    return TimeStepping(dt=dt, t_final=T_FINAL_DEFAULT if t_final is None else t_final,
                        snapshot_stride=snapshot_stride)


def check_stepping(params: WellParams, stepping: TimeStepping) -> None:
    """Accuracy guard: max_t V0(t) * dt must not exceed MAX_POTENTIAL_PHASE."""
    worst = params.v0 * stepping.dt
    if worst > MAX_POTENTIAL_PHASE * (1 + 1e-9):
        raise ConfigurationError(
            f"V0*dt = {worst:.3g} exceeds {MAX_POTENTIAL_PHASE}; shrink dt")


class _KineticFactor:
    """Per-mode 2x2 exponential exp(-i H0(k) tau), stored as three arrays."""

    def __init__(self, grid: Grid, tau: float, constants=ATOMIC):
        k = grid.momenta
        a = constants.c2
        b = constants.c * k
        e = np.hypot(a, b)
        ph, amp = np.cos(e * tau), np.sin(e * tau)
        self.f00 = ph - 1j * amp * a / e
        self.f11 = ph + 1j * amp * a / e
        self.f01 = -1j * amp * b / e

    def apply(self, coeffs: np.ndarray, buf0: np.ndarray | None = None,
              buf1: np.ndarray | None = None) -> None:
        """In-place multiply of (2, ..., n) coefficient arrays."""
        if buf0 is None:
            buf0 = np.empty_like(coeffs[0])
        if buf1 is None:
            buf1 = np.empty_like(coeffs[0])
        np.multiply(coeffs[1], self.f01, out=buf0)
        np.multiply(coeffs[0], self.f01, out=buf1)
        coeffs[0] *= self.f00
        coeffs[0] += buf0
        coeffs[1] *= self.f11
        coeffs[1] += buf1


def kinetic_half_step(state: SpinorField, grid: Grid, dt: float) -> SpinorField:
    """Apply exp(-i H0 dt/2) exactly; norm preserved to round-off."""
    if state.grid != grid:
        raise DimensionMismatchError("state and grid disagree")
    coeffs = position_to_momentum(state.values, grid)
    _KineticFactor(grid, dt / 2).apply(coeffs)
    return SpinorField(grid=grid, values=momentum_to_position(coeffs, grid))


def potential_step(state: SpinorField, v_slice: np.ndarray, dt: float) -> SpinorField:
    """Pointwise phase exp(-i V(z_j) dt) on both spinor components."""
    v = np.asarray(v_slice, dtype=np.float64)
    if v.shape != (state.grid.n_points,):
        raise DimensionMismatchError(
            f"potential slice shape {v.shape} != ({state.grid.n_points},)")
    return SpinorField(grid=state.grid,
                       values=state.values * np.exp(-1j * v * dt))


@dataclass(frozen=True)
class SnapshotBlock:
    """Cross-branch amplitudes of one state chunk at one snapshot time.

    ``u`` has shape (n_chunk_states, n_modes): row s holds the projections of
    evolved state ``state_modes[s]`` onto every opposite-branch basis state,
    in FFT bin order along the mode axis.  ``col_norm_sq`` is each state's
    total norm (equal to its full-basis projection weight).
    """

    index: int
    t: float
    state_modes: np.ndarray
    u: np.ndarray
    col_norm_sq: np.ndarray


Observer = Callable[[SnapshotBlock], None]


def _wrapped_positions(grid: Grid) -> np.ndarray:
    # position samples in FFT bin order (what ifft of mode coefficients yields)
    return np.fft.ifftshift(grid.positions)


def _evolve_coeffs(coeffs: np.ndarray, params: WellParams, stepping: TimeStepping,
                   grid: Grid, *, fft_workers: int = 1, t_start: float = 0.0,
                   emit: Callable[[int, int, float, np.ndarray], None] | None = None) -> np.ndarray:
    """Drive momentum-space coefficient arrays (2, m, n) through all steps.

    ``stepping.t_final`` is the evolved duration; ``t_start`` offsets the
    drive clock so windows can be chained.  ``emit(snapshot_index, step, t,
    coeffs)`` fires at every snapshot step, at the exact step boundary.
    """
    n_steps = stepping.n_steps
    dt = stepping.dt
    snap_steps = stepping.snapshot_steps() if emit else [n_steps]
    kin = _KineticFactor(grid, dt / 2)
    zw = _wrapped_positions(grid)
    buf0 = np.empty_like(coeffs[0])
    buf1 = np.empty_like(coeffs[0])
    t = 0.0
    si = 0
    for step in range(n_steps + 1):
        if emit and si < len(snap_steps) and step == snap_steps[si]:
            emit(si, step, t_start + t, coeffs)
            si += 1
        if step == n_steps:
            break
        h = min(dt, stepping.t_final - t)
        k = kin if abs(h - dt) <= 1e-15 * dt else _KineticFactor(grid, h / 2)
        k.apply(coeffs, buf0, buf1)
        psi = sfft.ifft(coeffs, axis=-1, workers=fft_workers, overwrite_x=True)
        v = well_profile(zw, depth_at(params, t_start + t + h / 2),
                         width_at(params, t_start + t + h / 2), params.w)
        psi *= np.exp(-1j * v * h)
        coeffs = sfft.fft(psi, axis=-1, workers=fft_workers, overwrite_x=True)
        k.apply(coeffs, buf0, buf1)
        t += h
    return coeffs


def evolve(state: SpinorField, params: WellParams, stepping: TimeStepping,
           *, t_start: float = 0.0, fft_workers: int = 1) -> SpinorField:
    """Propagate a single state over ``stepping.t_final``, starting the drive
    clock at ``t_start``."""
    check_stepping(params, stepping)
    grid = state.grid
    coeffs = position_to_momentum(state.values, grid)[:, None, :]
    coeffs = _evolve_coeffs(coeffs, params, stepping, grid,
                            fft_workers=fft_workers, t_start=t_start)
    return SpinorField(grid=grid, values=momentum_to_position(coeffs[:, 0, :], grid))


def evolve_ensemble(basis: FreeBasis, params: WellParams, stepping: TimeStepping,
                    observer: Observer, *, branch: Branch = Branch.NEGATIVE,
                    chunk_states: int = DEFAULT_CHUNK_STATES,
                    fft_workers: int = 1) -> None:
    """Evolve every basis state of ``branch`` and stream snapshot blocks.

    States are processed in ascending mode-index order, in fixed-size chunks,
    so observers accumulate deterministically no matter how work is threaded
    underneath.  At each snapshot the observer receives the projections of
    each evolved state onto the opposite branch (the pair amplitudes).
    """
    check_stepping(params, stepping)
    grid = basis.grid
    n = grid.n_points
    own = basis.neg_spinors if branch is Branch.NEGATIVE else basis.pos_spinors
    other = basis.pos_spinors if branch is Branch.NEGATIVE else basis.neg_spinors
    other_conj = other.conj()
    order = np.argsort(grid.mode_indices, kind="stable")

    for c0 in range(0, n, chunk_states):
        slots = order[c0:min(c0 + chunk_states, n)]
        m = len(slots)
        coeffs = np.zeros((2, m, n), dtype=np.complex128)
        coeffs[0, np.arange(m), slots] = own[0, slots]
        coeffs[1, np.arange(m), slots] = own[1, slots]
        state_modes = grid.mode_indices[slots]

        def emit(si: int, step: int, t: float, a: np.ndarray,
                 state_modes=state_modes) -> None:
            u = other_conj[0] * a[0] + other_conj[1] * a[1]
            col = np.sum(a.real ** 2 + a.imag ** 2, axis=(0, 2))
            observer(SnapshotBlock(index=si, t=t, state_modes=state_modes,
                                   u=u, col_norm_sq=col))

        _evolve_coeffs(coeffs, params, stepping, grid,
                       fft_workers=fft_workers, emit=emit)
