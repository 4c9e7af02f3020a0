"""Bit-stable CSV and manifest writers.

Numbers are written with fixed decimal formatting at a configured precision,
columns in a fixed order, LF line endings: serializing the same data twice
yields byte-identical files.
"""
from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ResourceLimitError

SCHEMAS = {
    "number_series": ("t", "N"),
    "density_profiles": ("t", "z", "rho"),
    "well_grid": ("t", "z", "V"),
    "spectrum": ("t", "level_rank", "E"),
    "dive_events": ("level_rank", "t_enter", "t_exit"),
    "phase_sweep": ("omega0", "phi", "N_final"),
    "frequency_summary": ("omega0", "N_max", "phi_at_max", "N_min",
                          "phi_at_min", "ratio"),
    "optimal_phase": ("omega0", "phi_opt_low", "phi_opt_high"),
}


def format_value(value, precision: int) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.{precision}f}"
    return str(value)


def write_series(path: str | Path, schema: str, rows: Iterable[Sequence],
                 precision: int = 12) -> Path:
    """Write rows under a named schema; returns the written path."""
    if schema not in SCHEMAS:
        raise ValueError(f"unknown schema {schema!r}; known: {sorted(SCHEMAS)}")
    header = SCHEMAS[schema]
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(
                f"row {row!r} has {len(row)} fields, schema {schema} wants {len(header)}")
        lines.append(",".join(format_value(v, precision) for v in row))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    except OSError as exc:
        raise ResourceLimitError(f"cannot write {path}: {exc}") from exc
    return path


def write_manifest(path: str | Path, manifest: dict) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")
    except OSError as exc:
        raise ResourceLimitError(f"cannot write {path}: {exc}") from exc
    return path


def manifest_stamp(manifest: dict, *, command: str, wall_seconds: float) -> dict:
    """Attach provenance fields that identify how a result was produced."""
    import numpy
    import scipy

    from . import __version__
    out = dict(manifest)
    out["provenance"] = {
        "command": command,
        "package_version": __version__,
        "numpy_version": numpy.__version__,
        "scipy_version": scipy.__version__,
        "wall_seconds": round(wall_seconds, 3),
        "written_at_unix": int(time.time()),
    }
    return out
