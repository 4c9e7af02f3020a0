"""The Sauter well with harmonically driven depth and width.

V(z,t) = V0(t)/2 * {tanh[(z - D(t)/2)/W] - tanh[(z + D(t)/2)/W]}
V0(t)  = v0/2 * [1 - cos(w0*t + phi)]
D(t)   = w  + d0/2 * [1 - cos(w0*t)]

The depth and width oscillate at the same angular frequency; ``phi`` is the
phase lead of the depth drive relative to the width drive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .units import Grid

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WellParams:
    """Drive parameters, all in atomic units (phi in radians, wrapped to [0, 2pi))."""

    v0: float
    d0: float
    w: float
    omega0: float
    phi: float = 0.0

    def __post_init__(self):
        if self.v0 < 0:
            raise ConfigurationError(f"v0 must be >= 0, got {self.v0}")
        if self.d0 < 0:
            raise ConfigurationError(f"d0 must be >= 0, got {self.d0}")
        if not self.w > 0:
            raise ConfigurationError(f"w must be > 0, got {self.w}")
        if not self.omega0 > 0:
            raise ConfigurationError(f"omega0 must be > 0, got {self.omega0}")
        object.__setattr__(self, "phi", self.phi % TWO_PI)

    @property
    def drive_period(self) -> float:
        return TWO_PI / self.omega0


def depth_at(params: WellParams, t: float) -> float:
    """Instantaneous well depth V0(t) in [0, v0]."""
    return 0.5 * params.v0 * (1.0 - math.cos(params.omega0 * t + params.phi))


def width_at(params: WellParams, t: float) -> float:
    """Instantaneous well width D(t) in [w, w + d0]."""
    return params.w + 0.5 * params.d0 * (1.0 - math.cos(params.omega0 * t))


def well_profile(z, depth: float, width: float, edge: float):
    """Static Sauter well -depth..0 sampled at position(s) z."""
    z = np.asarray(z, dtype=np.float64)
    return 0.5 * depth * (np.tanh((z - width / 2) / edge)
                          - np.tanh((z + width / 2) / edge))


def sample_potential(params: WellParams, grid: Grid, t: float) -> np.ndarray:
    """V(z_j, t) over the grid; even in z and bounded by [-V0(t), 0]."""
    return well_profile(grid.positions, depth_at(params, t),
                        width_at(params, t), params.w)
