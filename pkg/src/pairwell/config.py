"""Run configuration: paper-native units in, atomic units out.

Config files are line-oriented ``key = value`` documents with ``#``
comments.  Physical inputs use the natural quoting units (depths in c^2,
lengths in Compton wavelengths, frequencies in c^2, phases in multiples of
pi); conversion to atomic units happens exactly once, here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigurationError
from .potential import WellParams
from .propagator import T_FINAL_DEFAULT, TimeStepping, default_stepping
from .units import ATOMIC, Constants, Grid, check_simulation_grid, make_grid


@dataclass(frozen=True)
class RunConfig:
    """All knobs of a run, stored in the units the config file uses."""

    v0: float = 2.53          # depth amplitude, units of c^2
    d0: float = 10.0          # width oscillation amplitude, Compton wavelengths
    w: float = 0.3            # fixed edge width, Compton wavelengths
    omega0: float = 0.04      # drive frequency, units of c^2
    phi: float = 0.0          # phase difference, units of pi
    length: float = 2.5       # box size, a.u.
    n_points: int = 2048
    dt: float | None = None   # a.u.; None -> derived from the drive period
    t_final: float = T_FINAL_DEFAULT          # a.u.
    snapshot_stride: int = 32
    steps_per_period: int = 8192
    phases: tuple[float, ...] | None = None   # sweep phases, units of pi
    frequencies: tuple[float, ...] | None = None  # sweep frequencies, units of c^2
    outdir: str = "."
    precision: int = 12
    workers: int = 1

    def well(self, constants: Constants = ATOMIC) -> WellParams:
        lam = constants.lambda_c
        return WellParams(v0=self.v0 * constants.c2, d0=self.d0 * lam,
                          w=self.w * lam, omega0=self.omega0 * constants.c2,
                          phi=self.phi * math.pi)

    def grid(self) -> Grid:
        return make_grid(self.length, self.n_points)

    def stepping(self, constants: Constants = ATOMIC) -> TimeStepping:
        if self.dt is not None:
            return TimeStepping(dt=self.dt, t_final=self.t_final,
                                snapshot_stride=self.snapshot_stride)
        return default_stepping(self.well(constants), self.t_final,
                                steps_per_period=self.steps_per_period,
                                snapshot_stride=self.snapshot_stride)

    def sweep_phases_rad(self) -> list[float]:
        from .sweep import default_phases
        if self.phases is None:
            return default_phases()
        return [p * math.pi for p in self.phases]

    def sweep_frequencies_au(self, constants: Constants = ATOMIC) -> list[float]:
        from .sweep import TABLE_FREQUENCIES_C2
        freqs = TABLE_FREQUENCIES_C2 if self.frequencies is None else self.frequencies
        return [f * constants.c2 for f in freqs]

    def validate(self, constants: Constants = ATOMIC) -> None:
        """Construct every derived object once so invariants fire early."""
        self.well(constants)
        grid = self.grid()
        check_simulation_grid(grid, constants)
        self.stepping(constants)
        if self.precision < 1 or self.precision > 17:
            raise ConfigurationError(f"precision must be in [1, 17], got {self.precision}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.phases is not None:
            for p in self.phases:
                if not 0.0 <= p <= 2.0 + 1e-12:
                    raise ConfigurationError(
                        f"phases entries must lie in [0, 2] (units of pi), got {p}")
        if self.frequencies is not None:
            for f in self.frequencies:
                if not f > 0:
                    raise ConfigurationError(
                        f"frequencies entries must be positive, got {f}")

    def to_manifest(self, constants: Constants = ATOMIC) -> dict:
        well = self.well(constants)
        stepping = self.stepping(constants)
        return {
            "config": {f.name: getattr(self, f.name) for f in fields(self)},
            "atomic_units": {
                "c": constants.c,
                "v0": well.v0, "d0": well.d0, "w": well.w,
                "omega0": well.omega0, "phi": well.phi,
                "dt": stepping.dt, "t_final": stepping.t_final,
                "n_steps": stepping.n_steps,
                "momentum_cutoff": self.grid().momentum_cutoff,
            },
        }


def _parse_float(text: str) -> float:
    return float(text)


def _parse_int(text: str) -> int:
    v = float(text)
    if v != int(v):
        raise ValueError(f"expected integer, got {text}")
    return int(v)


def _parse_float_list(text: str) -> tuple[float, ...]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ValueError("empty list")
    return tuple(float(s) for s in items)


def _parse_optional_float(text: str) -> float | None:
    return None if text.lower() == "none" else float(text)


_PARSERS = {
    "v0": _parse_float, "d0": _parse_float, "w": _parse_float,
    "omega0": _parse_float, "phi": _parse_float,
    "length": _parse_float, "n_points": _parse_int,
    "dt": _parse_optional_float, "t_final": _parse_float,
    "snapshot_stride": _parse_int, "steps_per_period": _parse_int,
    "phases": _parse_float_list, "frequencies": _parse_float_list,
    "outdir": str, "precision": _parse_int, "workers": _parse_int,
}


def parse_config(text: str, constants: Constants = ATOMIC) -> RunConfig:
    """Parse a key = value document; unknown keys and bad values are errors."""
    overrides: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(
                f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _PARSERS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if key in overrides:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        try:
            overrides[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigurationError(
                f"line {lineno}: bad value for {key!r}: {exc}") from exc
    config = RunConfig(**overrides)
    try:
        config.validate(constants)
    except ConfigurationError:
        raise
    except Exception as exc:
        raise ConfigurationError(str(exc)) from exc
    return config


def render_config(config: RunConfig) -> str:
    """Emit a document that parses back to an identical RunConfig."""
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if value is None:
            if f.name == "dt":
                lines.append("dt = none")
            continue
        if isinstance(value, tuple):
            lines.append(f"{f.name} = {', '.join(repr(v) for v in value)}")
        elif isinstance(value, float):
            lines.append(f"{f.name} = {value!r}")
        else:
            lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def with_overrides(config: RunConfig, pairs: list[str],
                   constants: Constants = ATOMIC) -> RunConfig:
    """Apply CLI ``key=value`` overrides through the same parser."""
    overrides: dict = {}
    for item in pairs:
        if "=" not in item:
            raise ConfigurationError(f"override {item!r} is not key=value")
        key, _, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _PARSERS:
            raise ConfigurationError(f"unknown key {key!r}")
        try:
            overrides[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigurationError(f"bad value for {key!r}: {exc}") from exc
    out = replace(config, **overrides)
    out.validate(constants)
    return out
