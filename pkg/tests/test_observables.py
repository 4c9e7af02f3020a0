import math

import numpy as np
import pytest

from pairwell.basis import Branch, build_basis
from pairwell.errors import NumericError
from pairwell.observables import (AmplitudeMatrix, ColumnNormCollector,
                                  DensityCollector, FinalAmplitudeCollector,
                                  NumberCollector, NumberSeries,
                                  electron_density, electron_number,
                                  pair_symmetry_defect)
from pairwell.potential import WellParams
from pairwell.propagator import TimeStepping, evolve_ensemble
from pairwell.units import ATOMIC, make_grid

from conftest import rng

C2 = ATOMIC.c2
LAM = ATOMIC.lambda_c


def random_subunitary(n, seed=0):
    # random matrix with all column norms <= 1
    r = rng(seed)
    m = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    m /= np.linalg.norm(m, axis=0, keepdims=True) * 1.5
    return m


def test_number_of_zero_matrix():
    assert electron_number(np.zeros((8, 8), dtype=complex)) == 0.0


def test_number_single_entry():
    m = np.zeros((4, 4), dtype=complex)
    m[2, 1] = 0.5j
    assert electron_number(m) == pytest.approx(0.25, rel=0, abs=1e-16)


def test_number_matches_naive_sum():
    m = random_subunitary(32, seed=3)
    naive = float(np.sum(np.abs(m) ** 2))
    assert electron_number(m) == pytest.approx(naive, rel=1e-13)


def test_amplitude_matrix_rejects_overfull_column():
    m = np.zeros((4, 4), dtype=complex)
    m[:, 0] = 1.0  # column norm 2
    with pytest.raises(NumericError):
        AmplitudeMatrix(t=0.0, entries=m)


def test_number_series_invariants():
    with pytest.raises(NumericError):
        NumberSeries(times=np.array([0.0, 1.0]), values=np.array([0.0, -0.1]))
    with pytest.raises(NumericError):
        NumberSeries(times=np.array([0.0, 1.0]), values=np.array([1e-3, 0.1]))
    ok = NumberSeries(times=np.array([0.0, 1.0]), values=np.array([0.0, 0.5]))
    assert ok.final == 0.5


def test_symmetry_defect_trivial_cases():
    z = np.zeros((6, 6), dtype=complex)
    assert pair_symmetry_defect(z, z) == 0.0
    m = random_subunitary(16, seed=5)
    assert pair_symmetry_defect(m, m) == 0.0


def test_density_zero_matrix():
    grid = make_grid(0.5, 32)
    basis = build_basis(grid)
    profile = electron_density(np.zeros((32, 32), dtype=complex), basis)
    np.testing.assert_array_equal(profile.values, 0.0)


def test_density_single_plane_wave_is_uniform():
    grid = make_grid(0.5, 32)
    basis = build_basis(grid)
    m = np.zeros((32, 32), dtype=complex)
    m[7, 4] = 1.0  # one state fully on one projection mode
    profile = electron_density(AmplitudeMatrix(t=0.0, entries=m), basis)
    np.testing.assert_allclose(profile.values, 1.0 / grid.length, rtol=1e-12)
    assert profile.integral() == pytest.approx(1.0, rel=1e-12)


def test_density_integral_equals_number():
    grid = make_grid(0.5, 48)
    basis = build_basis(grid)
    m = random_subunitary(48, seed=9)
    profile = electron_density(AmplitudeMatrix(t=0.0, entries=m), basis)
    assert np.all(profile.values >= 0)
    assert profile.integral() == pytest.approx(electron_number(m), abs=1e-8)


def _run_tiny_ensemble(collectors, stride=4):
    grid = make_grid(0.25, 32)
    basis = build_basis(grid)
    params = WellParams(v0=0.4 * C2, d0=2 * LAM, w=0.3 * LAM, omega0=0.6 * C2)
    stepping = TimeStepping(dt=1e-6, t_final=16e-6, snapshot_stride=stride)
    from pairwell.observables import MultiObserver
    evolve_ensemble(basis, params, stepping, MultiObserver(*collectors),
                    chunk_states=7)
    return grid, basis, stepping


def test_collectors_consistent():
    numbers = NumberCollector()
    norms = ColumnNormCollector()
    grid, basis, stepping = _run_tiny_ensemble([numbers, norms])
    final = FinalAmplitudeCollector(grid, len(stepping.snapshot_steps()) - 1)
    dens = DensityCollector(basis)
    _run_tiny_ensemble([final, dens])
    series = numbers.series()
    assert series.times[0] == 0.0 and series.values[0] < 1e-20
    assert series.times[-1] == pytest.approx(stepping.t_final, rel=1e-12)
    # final snapshot number agrees with the assembled matrix
    matrix = final.matrix()
    assert electron_number(matrix) == pytest.approx(series.final, rel=1e-12, abs=1e-18)
    # density integral tracks N(t) at every snapshot
    for profile, n in zip(dens.profiles(), series.values):
        assert profile.integral() == pytest.approx(n, abs=1e-8)
    assert norms.worst < 1e-10
