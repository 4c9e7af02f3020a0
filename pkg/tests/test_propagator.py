import math

import numpy as np
import pytest

from pairwell.basis import (Branch, BranchLabel, SpinorField, basis_state,
                            build_basis, free_energy, project_branch)
from pairwell.errors import ConfigurationError, DimensionMismatchError
from pairwell.potential import WellParams, sample_potential
from pairwell.propagator import (TimeStepping, check_stepping, default_stepping,
                                 evolve, evolve_ensemble, kinetic_half_step,
                                 potential_step)
from pairwell.units import ATOMIC, make_grid

from conftest import random_state, static_reference_well

C2 = ATOMIC.c2
LAM = ATOMIC.lambda_c


def small_well(v0_c2=0.4, omega0_c2=0.6):
    # cheap drive for coarse grids: modest depth, fast period
    return WellParams(v0=v0_c2 * C2, d0=2 * LAM, w=0.3 * LAM,
                      omega0=omega0_c2 * C2, phi=0.0)


def free_well():
    return WellParams(v0=0.0, d0=2 * LAM, w=0.3 * LAM, omega0=0.6 * C2, phi=0.0)


@pytest.mark.parametrize("kwargs", [dict(dt=0.0, t_final=1.0),
                                    dict(dt=-1e-6, t_final=1.0),
                                    dict(dt=1e-6, t_final=0.0),
                                    dict(dt=1e-6, t_final=1.0, snapshot_stride=0)])
def test_stepping_validation(kwargs):
    with pytest.raises(ConfigurationError):
        TimeStepping(**{"snapshot_stride": 32, **kwargs})


def test_default_stepping_clips_to_potential_phase(paper_well):
    stepping = default_stepping(paper_well)
    assert stepping.dt == pytest.approx(paper_well.drive_period / 8192, rel=1e-12)
    assert paper_well.v0 * stepping.dt < 0.1
    deep = WellParams(v0=20 * C2, d0=paper_well.d0, w=paper_well.w,
                      omega0=paper_well.omega0)
    clipped = default_stepping(deep)
    assert clipped.dt == pytest.approx(0.1 / deep.v0, rel=1e-12)


def test_check_stepping_guard(paper_well):
    with pytest.raises(ConfigurationError, match="V0"):
        check_stepping(paper_well, TimeStepping(dt=1e-4, t_final=1e-3))


def test_kinetic_half_step_on_eigenstate(tiny_grid):
    basis = build_basis(tiny_grid)
    label = BranchLabel(5, Branch.NEGATIVE)
    state = basis_state(basis, label)
    dt = 3e-7
    out = kinetic_half_step(state, tiny_grid, dt)
    k = 2 * math.pi * 5 / tiny_grid.length
    phase = np.exp(-1j * free_energy(k, Branch.NEGATIVE) * dt / 2)
    np.testing.assert_allclose(out.values, phase * state.values, atol=1e-12)


def test_kinetic_half_step_zero_dt_is_identity(tiny_grid):
    state = random_state(tiny_grid, seed=2)
    out = kinetic_half_step(state, tiny_grid, 0.0)
    np.testing.assert_allclose(out.values, state.values, atol=1e-14)


def test_kinetic_half_step_unitary(tiny_grid):
    state = random_state(tiny_grid, seed=4)
    out = kinetic_half_step(state, tiny_grid, 1e-6)
    assert abs(out.norm_sq() - state.norm_sq()) < 1e-13


def test_potential_step_zero_identity(tiny_grid):
    state = random_state(tiny_grid, seed=6)
    out = potential_step(state, np.zeros(tiny_grid.n_points), 1e-6)
    np.testing.assert_array_equal(out.values, state.values)


def test_potential_step_constant_is_global_phase(tiny_grid):
    state = random_state(tiny_grid, seed=8)
    v = 123.4
    dt = 2e-6
    out = potential_step(state, np.full(tiny_grid.n_points, v), dt)
    np.testing.assert_allclose(out.values, np.exp(-1j * v * dt) * state.values,
                               rtol=1e-14)


def test_potential_step_norm_exact(tiny_grid):
    state = random_state(tiny_grid, seed=10)
    v = np.sin(np.linspace(0, 7, tiny_grid.n_points)) * 5e4
    out = potential_step(state, v, 1e-6)
    assert abs(out.norm_sq() - state.norm_sq()) < 1e-15 * state.norm_sq()


def test_potential_step_grid_mismatch(tiny_grid):
    state = random_state(tiny_grid, seed=1)
    with pytest.raises(DimensionMismatchError):
        potential_step(state, np.zeros(tiny_grid.n_points * 2), 1e-6)


def test_free_evolution_is_exact_phase(tiny_grid):
    basis = build_basis(tiny_grid)
    state = basis_state(basis, BranchLabel(-7, Branch.NEGATIVE))
    stepping = TimeStepping(dt=1.3e-6, t_final=17 * 1.3e-6)
    out = evolve(state, free_well(), stepping)
    k = 2 * math.pi * (-7) / tiny_grid.length
    e = free_energy(k, Branch.NEGATIVE)
    np.testing.assert_allclose(out.values,
                               np.exp(-1j * e * stepping.t_final) * state.values,
                               atol=1e-10)


def test_strang_convergence_is_second_order(tiny_grid):
    params = small_well()
    state = random_state(tiny_grid, seed=13)
    t_final = 4e-6
    finals = []
    for steps in (16, 32, 64):
        stepping = TimeStepping(dt=t_final / steps, t_final=t_final)
        finals.append(evolve(state, params, stepping).values)
    err_coarse = np.linalg.norm(finals[0] - finals[1])
    err_fine = np.linalg.norm(finals[1] - finals[2])
    assert 3.0 < err_coarse / err_fine < 5.0


def test_evolve_norm_drift(tiny_grid):
    params = small_well()
    state = random_state(tiny_grid, seed=14)
    stepping = TimeStepping(dt=1e-6, t_final=2e-4)
    out = evolve(state, params, stepping)
    assert abs(out.norm_sq() - 1.0) < 1e-8


def test_time_ordering_composition(tiny_grid):
    # two chained windows on the same step lattice match one long window
    params = small_well()
    state = random_state(tiny_grid, seed=15)
    dt = 1e-6
    t1, t2 = 32 * dt, 80 * dt
    a = evolve(state, params, TimeStepping(dt=dt, t_final=t1))
    a = evolve(a, params, TimeStepping(dt=dt, t_final=t2 - t1), t_start=t1)
    b = evolve(state, params, TimeStepping(dt=dt, t_final=t2))
    assert abs(a.norm_sq() - b.norm_sq()) < 1e-9
    np.testing.assert_allclose(a.values, b.values, atol=1e-9)


def test_dense_exponential_oracle(toy_grid):
    # Strang composition of the public ops against the exact exponential of
    # the same discretized Hamiltonian, frozen well, 50 steps
    from pairwell.boundstates import dense_hamiltonian

    params, t_star = static_reference_well()
    grid = make_grid(0.25, 64)
    v = sample_potential(params, grid, t_star)
    h = dense_hamiltonian(params, grid, t_star)
    state = random_state(grid, seed=21)
    dt = 5e-7
    psi = state
    for _ in range(50):
        psi = kinetic_half_step(psi, grid, dt)
        psi = potential_step(psi, v, dt)
        psi = kinetic_half_step(psi, grid, dt)
    evals, evecs = np.linalg.eigh(h)
    flat = state.values.reshape(-1)
    oracle = evecs @ (np.exp(-1j * evals * 50 * dt) * (evecs.conj().T @ flat))
    # grid inner product carries the lattice measure
    overlap = abs(np.vdot(oracle, psi.values.reshape(-1))) * grid.spacing
    assert overlap > 1 - 1e-6


class _Recorder:
    def __init__(self):
        self.blocks = []

    def __call__(self, block):
        self.blocks.append(block)


def test_ensemble_free_theory_has_zero_amplitudes(tiny_grid):
    basis = build_basis(tiny_grid)
    rec = _Recorder()
    stepping = TimeStepping(dt=1e-6, t_final=8e-6, snapshot_stride=4)
    evolve_ensemble(basis, free_well(), stepping, rec)
    assert rec.blocks
    for block in rec.blocks:
        assert np.max(np.abs(block.u)) < 1e-13
        assert np.max(np.abs(block.col_norm_sq - 1)) < 1e-12


def test_ensemble_matches_single_state_evolution(tiny_grid):
    params = small_well()
    basis = build_basis(tiny_grid)
    stepping = TimeStepping(dt=1e-6, t_final=16e-6, snapshot_stride=16)
    rec = _Recorder()
    evolve_ensemble(basis, params, stepping, rec, chunk_states=5)
    final_blocks = [b for b in rec.blocks if b.index == max(b.index for b in rec.blocks)]
    mode = -3
    col = None
    for block in final_blocks:
        hit = np.flatnonzero(block.state_modes == mode)
        if hit.size:
            col = block.u[int(hit[0])]
    state = basis_state(basis, BranchLabel(mode, Branch.NEGATIVE))
    evolved = evolve(state, params, stepping)
    expected = project_branch(evolved, basis, Branch.POSITIVE)
    np.testing.assert_allclose(col, expected, atol=1e-10)


def test_ensemble_column_unitarity(tiny_grid):
    params = small_well()
    basis = build_basis(tiny_grid)
    stepping = TimeStepping(dt=1e-6, t_final=64e-6, snapshot_stride=16)
    rec = _Recorder()
    evolve_ensemble(basis, params, stepping, rec)
    worst = max(float(np.max(np.abs(b.col_norm_sq - 1))) for b in rec.blocks)
    assert worst < 1e-8


def test_ensemble_chunking_is_bit_stable(tiny_grid):
    # same chunk size, repeated run: identical amplitudes
    params = small_well()
    basis = build_basis(tiny_grid)
    stepping = TimeStepping(dt=1e-6, t_final=8e-6, snapshot_stride=8)
    rec1, rec2 = _Recorder(), _Recorder()
    evolve_ensemble(basis, params, stepping, rec1)
    evolve_ensemble(basis, params, stepping, rec2)
    for a, b in zip(rec1.blocks, rec2.blocks):
        np.testing.assert_array_equal(a.u, b.u)
