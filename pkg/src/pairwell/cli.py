"""Command-line client: runs verbs locally or against a remote service.

Local mode calls the handler functions in-process; ``--server URL`` submits
the same typed request to a running service's job queue and polls.  Either
way the results land as CSV files plus a manifest in the output directory.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

from .api import (FrequencyTableRequest, FrequencyTableResponse, GridModel,
                  OptimalPhaseRequest, OptimalPhaseResponse, PhaseSweepRequest,
                  PhaseSweepResponse, SimulateRequest, SimulateResponse,
                  SpectrumRequest, SpectrumResponse, SteppingModel, VERB_HANDLERS,
                  WellModel)
from .boundstates import DEFAULT_DETACHMENT
from .config import RunConfig, parse_config, with_overrides
from .errors import ConfigurationError, PairwellError, ResourceLimitError
from .serialize import manifest_stamp, write_manifest, write_series

POLL_SECONDS = 1.0


def _load_config(args) -> RunConfig:
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}")
        config = parse_config(text)
    else:
        config = RunConfig()
        config.validate()
    overrides = list(args.set or [])
    if args.outdir is not None:
        overrides.append(f"outdir={args.outdir}")
    if args.workers is not None:
        overrides.append(f"workers={args.workers}")
    if overrides:
        config = with_overrides(config, overrides)
    return config


def _models(config: RunConfig) -> tuple[WellModel, GridModel, SteppingModel]:
    well = WellModel(v0_c2=config.v0, d0_lc=config.d0, w_lc=config.w,
                     omega0_c2=config.omega0, phi_pi=config.phi)
    grid = GridModel(length=config.length, n_points=config.n_points)
    stepping = SteppingModel(dt=config.dt, t_final=config.t_final,
                             snapshot_stride=config.snapshot_stride,
                             steps_per_period=config.steps_per_period)
    return well, grid, stepping


def build_request(verb: str, config: RunConfig, args):
    well, grid, stepping = _models(config)
    if verb == "simulate":
        return SimulateRequest(well=well, grid=grid, stepping=stepping,
                               validate_charge=args.validate_charge,
                               collect_density=args.density,
                               include_well_grid=args.well_grid,
                               workers=config.workers)
    if verb == "spectrum":
        return SpectrumRequest(well=well, t_final=config.t_final,
                               detachment=args.detachment)
    if verb == "sweep-phase":
        return PhaseSweepRequest(well=well, grid=grid, stepping=stepping,
                                 phases_pi=list(config.phases) if config.phases else None,
                                 workers=config.workers)
    if verb == "table1":
        return FrequencyTableRequest(
            well=well, grid=grid, stepping=stepping,
            frequencies_c2=list(config.frequencies) if config.frequencies else None,
            phases_pi=list(config.phases) if config.phases else None,
            workers=config.workers)
    if verb == "optimal-phase":
        return OptimalPhaseRequest(
            well=well, grid=grid, stepping=stepping,
            frequencies_c2=list(config.frequencies) if config.frequencies else None,
            phases_pi=list(config.phases) if config.phases else None,
            workers=config.workers)
    raise ConfigurationError(f"unknown verb {verb!r}")


def _run_remote(server: str, verb: str, request) -> dict:
    import httpx

    payload = request.model_dump()
    base = server.rstrip("/")
    with httpx.Client(timeout=60.0) as client:
        resp = client.post(f"{base}/api/jobs",
                           json={"verb": verb, "payload": payload})
        if resp.status_code >= 400:
            raise ResourceLimitError(f"job submit failed: {resp.text}")
        job_id = resp.json()["job_id"]
        while True:
            status = client.get(f"{base}/api/jobs/{job_id}").json()
            if status["state"] == "done":
                break
            if status["state"] == "failed":
                raise PairwellError(f"remote job failed: {status['error']}")
            time.sleep(POLL_SECONDS)
        result = client.get(f"{base}/api/jobs/{job_id}/result")
        if result.status_code >= 400:
            raise PairwellError(f"result fetch failed: {result.text}")
        return result.json()


def dispatch(verb: str, request, server: str | None):
    request_model, handler = VERB_HANDLERS[verb]
    if server:
        data = _run_remote(server, verb, request)
        response_types = {
            "simulate": SimulateResponse, "spectrum": SpectrumResponse,
            "sweep-phase": PhaseSweepResponse, "table1": FrequencyTableResponse,
            "optimal-phase": OptimalPhaseResponse,
        }
        return response_types[verb].model_validate(data)
    return handler(request)


def write_outputs(verb: str, response, outdir: Path, precision: int) -> list[Path]:
    written: list[Path] = []
    if verb == "simulate":
        rows = list(zip(response.times, response.numbers))
        written.append(write_series(outdir / "number_series.csv",
                                    "number_series", rows, precision))
        if response.density is not None:
            d = response.density
            rows = [(t, z, v) for t, values in zip(d.times, d.values)
                    for z, v in zip(d.z, values)]
            written.append(write_series(outdir / "density_profiles.csv",
                                        "density_profiles", rows, precision))
        if response.well_grid is not None:
            g = response.well_grid
            rows = [(t, z, v) for t, values in zip(g.times, g.values)
                    for z, v in zip(g.z, values)]
            written.append(write_series(outdir / "well_grid.csv", "well_grid",
                                        rows, precision))
    elif verb == "spectrum":
        rows = [(t, int(rank), e)
                for t, levels, ranks in zip(response.times, response.levels,
                                            response.ranks)
                for e, rank in zip(levels, ranks)]
        written.append(write_series(outdir / "spectrum.csv", "spectrum", rows,
                                    precision))
        dive_rows = [(ev.level_rank, ev.t_enter, ev.t_exit)
                     for ev in response.dive_events]
        written.append(write_series(outdir / "dive_events.csv", "dive_events",
                                    dive_rows, precision))
    elif verb in ("sweep-phase", "table1", "optimal-phase"):
        points = [(p.omega0, p.phi, p.n_final) for p in response.points]
        written.append(write_series(outdir / "phase_sweep.csv", "phase_sweep",
                                    points, precision))
        if verb == "table1":
            rows = [(r.omega0, r.n_max, r.phi_at_max, r.n_min, r.phi_at_min,
                     r.ratio) for r in response.rows]
            written.append(write_series(outdir / "frequency_summary.csv",
                                        "frequency_summary", rows, precision))
        if verb == "optimal-phase":
            rows = [(c.omega0, c.phi_opt_low, c.phi_opt_high)
                    for c in response.curve]
            written.append(write_series(outdir / "optimal_phase.csv",
                                        "optimal_phase", rows, precision))
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairwell",
        description="Pair creation in an oscillating Sauter well")
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    parser.add_argument("--outdir", help="output directory")
    parser.add_argument("--workers", type=int, help="max concurrent workers")
    parser.add_argument("--server", help="base URL of a running service; "
                                         "compute remotely instead of in-process")
    sub = parser.add_subparsers(dest="verb", required=True)
    p_sim = sub.add_parser("simulate", help="time evolution, N(t) series")
    p_sim.add_argument("--density", action="store_true",
                       help="also write density_profiles.csv")
    p_sim.add_argument("--well-grid", action="store_true",
                       help="also write the sampled potential well_grid.csv")
    p_sim.add_argument("--validate-charge", action="store_true",
                       help="also evolve the positron ensemble and check symmetry")
    p_spec = sub.add_parser("spectrum", help="instantaneous bound levels over time")
    p_spec.add_argument("--detachment", type=float, default=DEFAULT_DETACHMENT,
                        help="continuum-detachment fraction for counting levels")
    sub.add_parser("sweep-phase", help="N versus phase difference")
    sub.add_parser("table1", help="phase extrema per frequency")
    sub.add_parser("optimal-phase", help="optimal phase versus frequency")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    try:
        config = _load_config(args)
        request = build_request(args.verb, config, args)
        response = dispatch(args.verb, request, args.server)
        outdir = Path(config.outdir)
        written = write_outputs(args.verb, response, outdir, config.precision)
        manifest = manifest_stamp(response.manifest,
                                  command=" ".join([args.verb] + (args.set or [])),
                                  wall_seconds=time.time() - started)
        written.append(write_manifest(outdir / "manifest.json", manifest))
        for path in written:
            print(path)
        return 0
    except PairwellError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error (io): {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
