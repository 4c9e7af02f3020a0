import math

import numpy as np
import pytest

from pairwell.errors import ConfigurationError
from pairwell.potential import WellParams
from pairwell.propagator import TimeStepping
from pairwell.sweep import (FrequencySummary, OptimalPhasePoint, SweepPoint,
                            default_phases, frequency_table,
                            optimal_phase_curve, phase_sweep, run_single)
from pairwell.units import ATOMIC, make_grid

C2 = ATOMIC.c2
LAM = ATOMIC.lambda_c

WELL = WellParams(v0=0.4 * C2, d0=2 * LAM, w=0.3 * LAM, omega0=0.6 * C2)
GRID = make_grid(0.25, 64)
STEPPING = TimeStepping(dt=1e-6, t_final=32e-6, snapshot_stride=8)


def test_default_phase_grid():
    phases = default_phases()
    assert len(phases) == 21
    assert phases[0] == 0.0
    assert phases[-1] == pytest.approx(2 * math.pi, rel=1e-15)
    assert np.allclose(np.diff(phases), 0.1 * math.pi)


def test_phase_sweep_single_point_matches_direct_run():
    points = phase_sweep(WELL, [0.0], STEPPING, grid=GRID)
    direct = run_single(WELL, GRID, STEPPING)
    assert points[0].final_number == direct.final_number
    np.testing.assert_array_equal(points[0].series.values, direct.series.values)


def test_phase_sweep_order_and_normalization():
    phases = [0.0, math.pi, 2 * math.pi]
    points = phase_sweep(WELL, phases, STEPPING, grid=GRID)
    assert [p.phi for p in points] == phases
    # 2*pi aliases 0: identical physics
    assert points[2].final_number == points[0].final_number


def test_phase_sweep_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        phase_sweep(WELL, [], STEPPING, grid=GRID)
    with pytest.raises(ConfigurationError):
        phase_sweep(WELL, [-0.1], STEPPING, grid=GRID)
    with pytest.raises(ConfigurationError):
        phase_sweep(WELL, [2 * math.pi + 0.01], STEPPING, grid=GRID)


def test_phase_sweep_worker_count_invariance():
    phases = [0.0, 0.5 * math.pi, math.pi]
    seq = phase_sweep(WELL, phases, STEPPING, grid=GRID, workers=1)
    par = phase_sweep(WELL, phases, STEPPING, grid=GRID, workers=2)
    for a, b in zip(seq, par):
        assert a.final_number == b.final_number
        np.testing.assert_array_equal(a.series.values, b.series.values)


def test_sweep_point_error_annotated_with_phase():
    bad_step = TimeStepping(dt=1e-3, t_final=3e-3)  # violates V0*dt guard
    with pytest.raises(ConfigurationError, match="phi=0.5"):
        phase_sweep(WELL, [0.5], bad_step, grid=GRID)


def test_frequency_table_single_cell():
    summaries, points = frequency_table([WELL.omega0], [0.7], base=WELL,
                                        grid=GRID, steps_per_period=256,
                                        t_final=32e-6)
    assert len(summaries) == 1 and len(points) == 1
    s = summaries[0]
    assert s.n_max == s.n_min == points[0].final_number
    assert s.ratio == 1.0
    assert s.phi_at_max == s.phi_at_min == 0.7


def test_frequency_table_extrema_and_tie_break():
    phases = [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi, 2 * math.pi]
    summaries, points = frequency_table([WELL.omega0], phases, base=WELL,
                                        grid=GRID, steps_per_period=256,
                                        t_final=32e-6)
    s = summaries[0]
    numbers = [p.final_number for p in points]
    assert s.n_max == max(numbers)
    assert s.n_min == min(numbers)
    # 0 and 2*pi tie exactly; the smaller phase wins
    if s.n_max == numbers[0]:
        assert s.phi_at_max == 0.0
    assert s.ratio == pytest.approx(s.n_max / s.n_min)


def test_optimal_phase_mirror_branch():
    phases = [i * 0.1 * math.pi for i in range(21)]
    curve, _ = optimal_phase_curve([WELL.omega0], phases, base=WELL, grid=GRID,
                                   steps_per_period=64, t_final=16e-6,
                                   snapshot_stride=64)
    (pt,) = curve
    assert pt.phi_opt_low <= pt.phi_opt_high
    assert pt.phi_opt_low + pt.phi_opt_high == pytest.approx(2 * math.pi, rel=1e-12) \
        or (pt.phi_opt_low == pt.phi_opt_high == pytest.approx(math.pi))


def test_optimal_phase_rejects_sparse_sampling():
    with pytest.raises(ConfigurationError, match="sampling"):
        optimal_phase_curve([WELL.omega0], [0.0, math.pi], base=WELL, grid=GRID)


def test_argmax_stable_under_phase_refinement():
    # refining the phase grid from 0.1*pi to 0.05*pi steps moves the argmax
    # by at most one coarse step
    coarse = [i * 0.1 * math.pi for i in range(21)]
    fine = [i * 0.05 * math.pi for i in range(41)]
    kwargs = dict(base=WELL, grid=GRID, steps_per_period=64, t_final=16e-6,
                  snapshot_stride=64)
    curve_c, _ = optimal_phase_curve([WELL.omega0], coarse, **kwargs)
    curve_f, _ = optimal_phase_curve([WELL.omega0], fine, **kwargs)
    assert abs(curve_c[0].phi_opt_low - curve_f[0].phi_opt_low) <= 0.1 * math.pi + 1e-12


def test_run_single_charge_validation():
    result = run_single(WELL, GRID, STEPPING, validate_charge=True)
    assert result.positron_series is not None
    assert result.symmetry_defect_max < 1e-10 + 1e-6 * max(result.final_number, 1e-12)
    assert result.max_column_norm_error < 1e-10
