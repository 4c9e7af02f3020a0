"""Typed request/response layer shared by the HTTP service and the CLI.

Handlers are plain functions from request model to response model; the
FastAPI app in :mod:`pairwell.service` wraps them in routes and the CLI
calls them in-process (or POSTs them to a remote service).
"""
from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
from pydantic import BaseModel, Field

from .boundstates import (DEFAULT_DETACHMENT, default_trajectory_times,
                          spectrum_trajectory)
from .config import RunConfig
from .potential import sample_potential
from .sweep import (frequency_table, optimal_phase_curve, phase_sweep,
                    run_single)
from .units import ATOMIC


class WellModel(BaseModel):
    v0_c2: float = Field(2.53, ge=0, description="depth amplitude, units of c^2")
    d0_lc: float = Field(10.0, ge=0, description="width amplitude, Compton wavelengths")
    w_lc: float = Field(0.3, gt=0, description="edge width, Compton wavelengths")
    omega0_c2: float = Field(0.04, gt=0, description="drive frequency, units of c^2")
    phi_pi: float = Field(0.0, ge=0, le=2, description="phase difference, units of pi")


class GridModel(BaseModel):
    length: float = Field(2.5, gt=0)
    n_points: int = Field(2048, ge=8)


class SteppingModel(BaseModel):
    dt: float | None = Field(None, gt=0, description="a.u.; derived when omitted")
    t_final: float | None = Field(None, gt=0, description="a.u.; one slow-drive period when omitted")
    snapshot_stride: int = Field(32, ge=1)
    steps_per_period: int = Field(8192, ge=16)


def _to_config(well: WellModel, grid: GridModel | None = None,
               stepping: SteppingModel | None = None, workers: int = 1) -> RunConfig:
    grid = grid or GridModel()
    stepping = stepping or SteppingModel()
    config = RunConfig(
        v0=well.v0_c2, d0=well.d0_lc, w=well.w_lc, omega0=well.omega0_c2,
        phi=well.phi_pi, length=grid.length, n_points=grid.n_points,
        dt=stepping.dt,
        t_final=(stepping.t_final if stepping.t_final is not None
                 else RunConfig().t_final),
        snapshot_stride=stepping.snapshot_stride,
        steps_per_period=stepping.steps_per_period, workers=workers)
    config.validate()
    return config


class SimulateRequest(BaseModel):
    well: WellModel = WellModel()
    grid: GridModel = GridModel()
    stepping: SteppingModel = SteppingModel()
    validate_charge: bool = False
    collect_density: bool = False
    include_well_grid: bool = False
    well_grid_z_samples: int = Field(129, ge=2, le=4097)
    well_grid_t_samples: int = Field(129, ge=2, le=4097)
    workers: int = Field(1, ge=1, description="FFT threads for this run")


class DensityPayload(BaseModel):
    times: list[float]
    z: list[float]
    values: list[list[float]]


class WellGridPayload(BaseModel):
    times: list[float]
    z: list[float]
    values: list[list[float]]


class SimulateResponse(BaseModel):
    times: list[float]
    numbers: list[float]
    final_number: float
    max_column_norm_error: float
    positron_numbers: list[float] | None = None
    symmetry_defect_max: float | None = None
    density: DensityPayload | None = None
    well_grid: WellGridPayload | None = None
    manifest: dict


def handle_simulate(req: SimulateRequest) -> SimulateResponse:
    config = _to_config(req.well, req.grid, req.stepping, req.workers)
    params = config.well()
    grid = config.grid()
    stepping = config.stepping()
    result = run_single(params, grid, stepping,
                        collect_density=req.collect_density,
                        validate_charge=req.validate_charge,
                        fft_workers=req.workers)
    density = None
    if result.densities is not None:
        density = DensityPayload(
            times=[p.t for p in result.densities],
            z=grid.positions.tolist(),
            values=[p.values.tolist() for p in result.densities])
    well_grid = None
    if req.include_well_grid:
        zs = np.linspace(-grid.length / 2, grid.length / 2, req.well_grid_z_samples)
        ts = np.linspace(0.0, stepping.t_final, req.well_grid_t_samples)
        probe_grid = grid
        rows = []
        for t in ts:
            v = sample_potential(params, probe_grid, float(t))
            rows.append(np.interp(zs, probe_grid.positions, v).tolist())
        well_grid = WellGridPayload(times=ts.tolist(), z=zs.tolist(), values=rows)
    return SimulateResponse(
        times=result.series.times.tolist(),
        numbers=result.series.values.tolist(),
        final_number=result.final_number,
        max_column_norm_error=result.max_column_norm_error,
        positron_numbers=(result.positron_series.values.tolist()
                          if result.positron_series is not None else None),
        symmetry_defect_max=result.symmetry_defect_max,
        density=density, well_grid=well_grid,
        manifest=config.to_manifest())


class SpectrumRequest(BaseModel):
    well: WellModel = WellModel()
    t_final: float | None = Field(None, gt=0)
    samples_per_period: int = Field(512, ge=64)
    detachment: float = Field(DEFAULT_DETACHMENT, ge=0, lt=1)


class DiveEventModel(BaseModel):
    level_rank: int
    t_enter: float
    t_exit: float


class SpectrumResponse(BaseModel):
    times: list[float]
    levels: list[list[float]]
    ranks: list[list[int]]
    dive_events: list[DiveEventModel]
    curve_count: int
    resolved_level_count: int
    manifest: dict


def handle_spectrum(req: SpectrumRequest) -> SpectrumResponse:
    config = _to_config(req.well)
    if req.t_final is not None:
        config = replace(config, t_final=req.t_final)
    params = config.well()
    times = default_trajectory_times(params, config.t_final,
                                     req.samples_per_period)
    traj = spectrum_trajectory(params, times)
    return SpectrumResponse(
        times=traj.times.tolist(),
        levels=[e.tolist() for e in traj.levels],
        ranks=[r.tolist() for r in traj.ranks],
        dive_events=[DiveEventModel(level_rank=ev.level_rank, t_enter=ev.t_enter,
                                    t_exit=ev.t_exit) for ev in traj.dive_events],
        curve_count=traj.curve_count(),
        resolved_level_count=traj.resolved_level_count(req.detachment),
        manifest=config.to_manifest())


class PhaseSweepRequest(BaseModel):
    well: WellModel = WellModel()
    grid: GridModel = GridModel()
    stepping: SteppingModel = SteppingModel()
    phases_pi: list[float] | None = None
    workers: int = Field(1, ge=1)


class SweepPointModel(BaseModel):
    omega0: float
    phi: float
    n_final: float


class PhaseSweepResponse(BaseModel):
    points: list[SweepPointModel]
    manifest: dict


def handle_phase_sweep(req: PhaseSweepRequest) -> PhaseSweepResponse:
    config = _to_config(req.well, req.grid, req.stepping, req.workers)
    if req.phases_pi is not None:
        config = replace(config, phases=tuple(req.phases_pi))
        config.validate()
    points = phase_sweep(config.well(), config.sweep_phases_rad(),
                         grid=config.grid(), workers=req.workers,
                         fft_workers=1 if req.workers > 1 else req.workers,
                         steps_per_period=config.steps_per_period,
                         t_final=config.t_final,
                         snapshot_stride=config.snapshot_stride,
                         keep_series=False)
    return PhaseSweepResponse(
        points=[SweepPointModel(omega0=p.omega0, phi=p.phi,
                                n_final=p.final_number) for p in points],
        manifest=config.to_manifest())


class FrequencyTableRequest(BaseModel):
    well: WellModel = WellModel()
    grid: GridModel = GridModel()
    stepping: SteppingModel = SteppingModel()
    frequencies_c2: list[float] | None = None
    phases_pi: list[float] | None = None
    workers: int = Field(1, ge=1)


class FrequencyRowModel(BaseModel):
    omega0: float
    n_max: float
    phi_at_max: float
    n_min: float
    phi_at_min: float
    ratio: float


class FrequencyTableResponse(BaseModel):
    rows: list[FrequencyRowModel]
    points: list[SweepPointModel]
    manifest: dict


def _sweep_config(req) -> RunConfig:
    config = _to_config(req.well, req.grid, req.stepping, req.workers)
    updates = {}
    if req.phases_pi is not None:
        updates["phases"] = tuple(req.phases_pi)
    if getattr(req, "frequencies_c2", None) is not None:
        updates["frequencies"] = tuple(req.frequencies_c2)
    if updates:
        config = replace(config, **updates)
        config.validate()
    return config


def handle_frequency_table(req: FrequencyTableRequest) -> FrequencyTableResponse:
    config = _sweep_config(req)
    summaries, points = frequency_table(
        config.sweep_frequencies_au(), config.sweep_phases_rad(),
        base=config.well(), grid=config.grid(), workers=req.workers,
        fft_workers=1 if req.workers > 1 else req.workers,
        steps_per_period=config.steps_per_period, t_final=config.t_final,
        snapshot_stride=config.snapshot_stride)
    return FrequencyTableResponse(
        rows=[FrequencyRowModel(omega0=s.omega0, n_max=s.n_max,
                                phi_at_max=s.phi_at_max, n_min=s.n_min,
                                phi_at_min=s.phi_at_min, ratio=s.ratio)
              for s in summaries],
        points=[SweepPointModel(omega0=p.omega0, phi=p.phi,
                                n_final=p.final_number) for p in points],
        manifest=config.to_manifest())


class OptimalPhaseRequest(FrequencyTableRequest):
    pass


class OptimalPhasePointModel(BaseModel):
    omega0: float
    phi_opt_low: float
    phi_opt_high: float


class OptimalPhaseResponse(BaseModel):
    curve: list[OptimalPhasePointModel]
    points: list[SweepPointModel]
    manifest: dict


def handle_optimal_phase(req: OptimalPhaseRequest) -> OptimalPhaseResponse:
    config = _sweep_config(req)
    curve, points = optimal_phase_curve(
        config.sweep_frequencies_au(), config.sweep_phases_rad(),
        base=config.well(), grid=config.grid(), workers=req.workers,
        fft_workers=1 if req.workers > 1 else req.workers,
        steps_per_period=config.steps_per_period, t_final=config.t_final,
        snapshot_stride=config.snapshot_stride)
    return OptimalPhaseResponse(
        curve=[OptimalPhasePointModel(omega0=c.omega0, phi_opt_low=c.phi_opt_low,
                                      phi_opt_high=c.phi_opt_high) for c in curve],
        points=[SweepPointModel(omega0=p.omega0, phi=p.phi,
                                n_final=p.final_number) for p in points],
        manifest=config.to_manifest())


VERB_HANDLERS = {
    "simulate": (SimulateRequest, handle_simulate),
    "spectrum": (SpectrumRequest, handle_spectrum),
    "sweep-phase": (PhaseSweepRequest, handle_phase_sweep),
    "table1": (FrequencyTableRequest, handle_frequency_table),
    "optimal-phase": (OptimalPhaseRequest, handle_optimal_phase),
}
