"""Campaign orchestration: single runs, phase sweeps, frequency tables.

Every sweep point is an independent full simulation; points run either
inline or across a process pool, and partial results always merge in input
order so repeated sweeps with the same configuration are bit-identical
regardless of worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .basis import Branch, FreeBasis, build_basis
from .errors import ConfigurationError, NumericError
from .observables import (AmplitudeMatrix, ColumnNormCollector, DensityCollector,
                          DensityProfile, FinalAmplitudeCollector, MultiObserver,
                          NumberCollector, NumberSeries)
from .potential import TWO_PI, WellParams
from .propagator import (DEFAULT_CHUNK_STATES, TimeStepping, default_stepping,
                         evolve_ensemble)
from .units import ATOMIC, Constants, Grid, make_grid

DEFAULT_PHASE_COUNT = 21  # 0 .. 2*pi inclusive in steps of 0.1*pi
TABLE_FREQUENCIES_C2 = (0.04, 0.3, 0.6, 0.8, 1.0, 2.0)


def default_phases() -> list[float]:
    """0, 0.1*pi, ..., 2*pi (endpoint included; it aliases phi = 0)."""
    return [i * TWO_PI / (DEFAULT_PHASE_COUNT - 1) for i in range(DEFAULT_PHASE_COUNT)]


@dataclass(frozen=True)
class SimulationResult:
    """Everything one ensemble run produced."""

    params: WellParams
    stepping: TimeStepping
    series: NumberSeries
    max_column_norm_error: float
    positron_series: NumberSeries | None = None
    symmetry_defect_max: float | None = None
    final_matrix: AmplitudeMatrix | None = None
    densities: list[DensityProfile] | None = None

    @property
    def final_number(self) -> float:
        return self.series.final


def run_single(params: WellParams, grid: Grid, stepping: TimeStepping, *,
               basis: FreeBasis | None = None, collect_density: bool = False,
               collect_final_matrix: bool = False, validate_charge: bool = False,
               fft_workers: int = 1, chunk_states: int = DEFAULT_CHUNK_STATES,
               constants: Constants = ATOMIC) -> SimulationResult:
    """One full ensemble evolution with the requested collectors attached.

    ``validate_charge`` additionally evolves the positive-energy ensemble so
    the created-positron count can be compared against the electron count.
    """
    if basis is None:
        basis = build_basis(grid, constants)
    n_snapshots = len(stepping.snapshot_steps())
    numbers = NumberCollector()
    norms = ColumnNormCollector()
    dens = DensityCollector(basis) if collect_density else None
    final = (FinalAmplitudeCollector(grid, n_snapshots - 1)
             if collect_final_matrix else None)
    evolve_ensemble(basis, params, stepping,
                    MultiObserver(numbers, norms, dens, final),
                    branch=Branch.NEGATIVE, chunk_states=chunk_states,
                    fft_workers=fft_workers)
    series = numbers.series()
    worst_norm = norms.worst

    positron_series = None
    defect_max = None
    if validate_charge:
        p_numbers = NumberCollector()
        p_norms = ColumnNormCollector()
        evolve_ensemble(basis, params, stepping,
                        MultiObserver(p_numbers, p_norms),
                        branch=Branch.POSITIVE, chunk_states=chunk_states,
                        fft_workers=fft_workers)
        positron_series = p_numbers.series()
        worst_norm = max(worst_norm, p_norms.worst)
        defect_max = float(np.max(np.abs(series.values - positron_series.values)))

    return SimulationResult(
        params=params, stepping=stepping, series=series,
        max_column_norm_error=worst_norm,
        positron_series=positron_series, symmetry_defect_max=defect_max,
        final_matrix=final.matrix() if final else None,
        densities=dens.profiles() if dens else None)


@dataclass(frozen=True)
class SweepPoint:
    omega0: float
    phi: float
    final_number: float
    series: NumberSeries | None = None

    def __post_init__(self):
        if self.final_number < 0:
            raise NumericError(f"negative final number {self.final_number}")


@dataclass(frozen=True)
class FrequencySummary:
    omega0: float
    n_max: float
    phi_at_max: float
    n_min: float
    phi_at_min: float
    ratio: float


@dataclass(frozen=True)
class OptimalPhasePoint:
    omega0: float
    phi_opt_low: float
    phi_opt_high: float


def _normalize_phase(phi: float) -> float:
    """Accept the closed interval [0, 2*pi]; 2*pi aliases 0."""
    if not 0.0 <= phi <= TWO_PI * (1 + 1e-12):
        raise ConfigurationError(f"phase {phi} outside [0, 2*pi]")
    return phi % TWO_PI


def _run_job(payload: dict) -> tuple[int, np.ndarray, np.ndarray, float]:
    params = WellParams(v0=payload["v0"], d0=payload["d0"], w=payload["w"],
                        omega0=payload["omega0"], phi=payload["phi"])
    grid = make_grid(payload["length"], payload["n_points"])
    stepping = TimeStepping(dt=payload["dt"], t_final=payload["t_final"],
                            snapshot_stride=payload["stride"])
    try:
        result = run_single(params, grid, stepping,
                            fft_workers=payload["fft_workers"],
                            chunk_states=payload["chunk_states"])
    except Exception as exc:  # annotate with the failing point
        raise type(exc)(
            f"sweep point omega0={payload['omega0']:.6g}, "
            f"phi={payload['phi']:.6g} failed: {exc}") from exc
    return (payload["index"], result.series.times, result.series.values,
            result.max_column_norm_error)


def _execute_jobs(payloads: list[dict], workers: int) -> list[tuple]:
    if workers <= 1 or len(payloads) <= 1:
        done = [_run_job(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(payloads))) as pool:
            done = list(pool.map(_run_job, payloads, chunksize=1))
    return sorted(done, key=lambda r: r[0])


def _stepping_for(base: WellParams, omega0: float, stepping: TimeStepping | None,
                  steps_per_period: int, t_final: float | None,
                  snapshot_stride: int) -> TimeStepping:
    if stepping is not None:
        return stepping
    probe = WellParams(v0=base.v0, d0=base.d0, w=base.w, omega0=omega0, phi=0.0)
    return default_stepping(probe, t_final, steps_per_period=steps_per_period,
                            snapshot_stride=snapshot_stride)


def phase_sweep(base: WellParams, phases, stepping: TimeStepping | None = None, *,
                grid: Grid, workers: int = 1, fft_workers: int = 1,
                steps_per_period: int = 8192, t_final: float | None = None,
                snapshot_stride: int = 32,
                chunk_states: int = DEFAULT_CHUNK_STATES,
                keep_series: bool = True) -> list[SweepPoint]:
    """One full simulation per phase, output order matching input order."""
    phases = list(phases)
    if not phases:
        raise ConfigurationError("phases must be non-empty")
    per_job_fft = fft_workers if workers <= 1 else 1
    payloads = []
    for i, phi in enumerate(phases):
        step = _stepping_for(base, base.omega0, stepping, steps_per_period,
                             t_final, snapshot_stride)
        payloads.append(dict(index=i, v0=base.v0, d0=base.d0, w=base.w,
                             omega0=base.omega0, phi=_normalize_phase(phi),
                             length=grid.length, n_points=grid.n_points,
                             dt=step.dt, t_final=step.t_final,
                             stride=step.snapshot_stride,
                             fft_workers=per_job_fft, chunk_states=chunk_states))
    out = []
    for (i, times, values, _), phi in zip(_execute_jobs(payloads, workers), phases):
        series = NumberSeries(times=times, values=values)
        out.append(SweepPoint(omega0=base.omega0, phi=phi,
                              final_number=series.final,
                              series=series if keep_series else None))
    return out


def _extrema(phases: list[float], numbers: list[float]) -> tuple[float, float, float, float]:
    n_max = max(numbers)
    n_min = min(numbers)
    phi_at_max = min(p for p, v in zip(phases, numbers) if v == n_max)
    phi_at_min = min(p for p, v in zip(phases, numbers) if v == n_min)
    return n_max, phi_at_max, n_min, phi_at_min


def frequency_table(frequencies, phases, *, base: WellParams, grid: Grid,
                    workers: int = 1, fft_workers: int = 1,
                    steps_per_period: int = 8192, t_final: float | None = None,
                    snapshot_stride: int = 32,
                    chunk_states: int = DEFAULT_CHUNK_STATES,
                    ) -> tuple[list[FrequencySummary], list[SweepPoint]]:
    """Phase sweep at every frequency; extrema per frequency plus all points."""
    frequencies = list(frequencies)
    phases = list(phases)
    if not frequencies or not phases:
        raise ConfigurationError("frequencies and phases must be non-empty")
    per_job_fft = fft_workers if workers <= 1 else 1
    payloads = []
    for fi, omega0 in enumerate(frequencies):
        step = _stepping_for(base, omega0, None, steps_per_period, t_final,
                             snapshot_stride)
        for pi, phi in enumerate(phases):
            payloads.append(dict(index=fi * len(phases) + pi, v0=base.v0,
                                 d0=base.d0, w=base.w, omega0=omega0,
                                 phi=_normalize_phase(phi),
                                 length=grid.length, n_points=grid.n_points,
                                 dt=step.dt, t_final=step.t_final,
                                 stride=step.snapshot_stride,
                                 fft_workers=per_job_fft,
                                 chunk_states=chunk_states))
    done = _execute_jobs(payloads, workers)
    points: list[SweepPoint] = []
    summaries: list[FrequencySummary] = []
    for fi, omega0 in enumerate(frequencies):
        rows = done[fi * len(phases):(fi + 1) * len(phases)]
        numbers = [NumberSeries(times=t, values=v).final for _, t, v, _ in rows]
        for phi, n in zip(phases, numbers):
            points.append(SweepPoint(omega0=omega0, phi=phi, final_number=n))
        n_max, phi_at_max, n_min, phi_at_min = _extrema(phases, numbers)
        ratio = n_max / n_min if n_min > 0 else math.inf
        summaries.append(FrequencySummary(omega0=omega0, n_max=n_max,
                                          phi_at_max=phi_at_max, n_min=n_min,
                                          phi_at_min=phi_at_min, ratio=ratio))
    return summaries, points


def optimal_phase_curve(frequencies, phases, *, base: WellParams, grid: Grid,
                        **kwargs) -> tuple[list[OptimalPhasePoint], list[SweepPoint]]:
    """Argmax phase per frequency plus the mirror branch 2*pi - phi."""
    phases = list(phases)
    if len(phases) > 1:
        gaps = np.diff(sorted(_normalize_phase(p) for p in phases))
        if gaps.size and float(np.max(gaps)) > 0.1 * math.pi * (1 + 1e-9):
            raise ConfigurationError(
                "phase sampling must be no coarser than 0.1*pi for argmax extraction")
    summaries, points = frequency_table(frequencies, phases, base=base,
                                        grid=grid, **kwargs)
    curve = []
    for s in summaries:
        phi = _normalize_phase(s.phi_at_max)
        lo, hi = min(phi, TWO_PI - phi), max(phi, TWO_PI - phi)
        curve.append(OptimalPhasePoint(omega0=s.omega0, phi_opt_low=lo,
                                       phi_opt_high=hi))
    return curve, points
