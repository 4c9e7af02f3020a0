"""Pair creation from the vacuum in an oscillating Sauter potential well.

Core pipeline: build the free Dirac basis on a periodic lattice, evolve the
whole negative-energy ensemble under the driven well with a split-operator
propagator, and reduce the cross-branch amplitudes to particle numbers,
densities and sweep tables.  A bound-state tracker solves the instantaneous
quantization condition for the same drive.
"""

__version__ = "0.1.0"

from .basis import Branch, BranchLabel, FreeBasis, SpinorField, build_basis
from .boundstates import (LevelCondition, SpectrumTrajectory, bound_levels,
                          diag_oracle, level_residual, spectrum_trajectory)
from .config import RunConfig, parse_config, render_config
from .errors import (ConfigurationError, DimensionMismatchError, DomainError,
                     NumericError, PairwellError, ResourceLimitError)
from .observables import (AmplitudeMatrix, DensityProfile, NumberSeries,
                          electron_density, electron_number,
                          pair_symmetry_defect)
from .potential import WellParams, depth_at, sample_potential, width_at
from .propagator import (TimeStepping, default_stepping, evolve,
                         evolve_ensemble, kinetic_half_step, potential_step)
from .sweep import (FrequencySummary, SimulationResult, SweepPoint,
                    frequency_table, optimal_phase_curve, phase_sweep,
                    run_single)
from .units import ATOMIC, Constants, Grid, make_grid, momentum_of
