import math

import numpy as np
import pytest

from pairwell.potential import WellParams
from pairwell.propagator import TimeStepping
from pairwell.units import ATOMIC, make_grid


def pytest_collection_modifyitems(items):
    # acceptance checks are the slowest; run the unit suite first
    items.sort(key=lambda item: item.get_closest_marker("acceptance") is not None)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

C2 = ATOMIC.c2
LAM = ATOMIC.lambda_c


@pytest.fixture(scope="session")
def paper_well() -> WellParams:
    """Canonical drive: V0=2.53c^2, D0=10 lam_C, W=0.3 lam_C, w0=0.04c^2."""
    return WellParams(v0=2.53 * C2, d0=10 * LAM, w=0.3 * LAM,
                      omega0=0.04 * C2, phi=0.0)


@pytest.fixture(scope="session")
def tiny_grid():
    """Coarse but cutoff-safe lattice for fast end-to-end runs."""
    return make_grid(0.25, 64)


@pytest.fixture(scope="session")
def toy_grid():
    return make_grid(0.25, 16)


def tiny_stepping(n_steps: int = 8, dt: float = 1e-6, stride: int = 4) -> TimeStepping:
    return TimeStepping(dt=dt, t_final=n_steps * dt, snapshot_stride=stride)


def static_reference_well(width_lc: float = 4.55, edge_lc: float = 0.3):
    """WellParams + time at which the drive sits at depth 2.53c^2 and the
    requested width (the static benchmark geometry)."""
    params = WellParams(v0=2.53 * C2, d0=(width_lc - edge_lc) * LAM,
                        w=edge_lc * LAM, omega0=0.04 * C2, phi=0.0)
    return params, math.pi / params.omega0


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_state(grid, seed: int = 0):
    from pairwell.basis import SpinorField
    r = rng(seed)
    values = r.standard_normal((2, grid.n_points)) + 1j * r.standard_normal((2, grid.n_points))
    values /= np.sqrt(np.sum(np.abs(values) ** 2) * grid.spacing)
    return SpinorField(grid=grid, values=values)
