/**
 * Shared types and physical display constants for the figure renderers.
 *
 * All CSV inputs carry atomic-unit values; figures label energies and
 * frequencies in units of c^2 and phases in units of pi, matching the
 * conventions of the simulation write-up.
 */

/** Speed of light in Hartree atomic units. */
export const C_LIGHT = 137.035999;
/** Electron rest energy c^2 in atomic units. */
export const C2 = C_LIGHT * C_LIGHT;

export type FigureId =
  | 'well-heatmap'
  | 'number-vs-phase'
  | 'spectrum'
  | 'number-vs-time'
  | 'multi-frequency-phase'
  | 'number-vs-time-hf'
  | 'optimal-phase';

export const FIGURE_IDS: FigureId[] = [
  'well-heatmap',
  'number-vs-phase',
  'spectrum',
  'number-vs-time',
  'multi-frequency-phase',
  'number-vs-time-hf',
  'optimal-phase',
];

export interface NumberSeriesRow {
  t: number;
  N: number;
}

export interface WellGridRow {
  t: number;
  z: number;
  V: number;
}

export interface SpectrumRow {
  t: number;
  level_rank: number;
  E: number;
}

export interface DiveEventRow {
  level_rank: number;
  t_enter: number;
  t_exit: number;
}

export interface PhaseSweepRow {
  omega0: number;
  phi: number;
  N_final: number;
}

export interface FrequencySummaryRow {
  omega0: number;
  N_max: number;
  phi_at_max: number;
  N_min: number;
  phi_at_min: number;
  ratio: number;
}

export interface OptimalPhaseRow {
  omega0: number;
  phi_opt_low: number;
  phi_opt_high: number;
}

export interface StyleOptions {
  width: number;
  height: number;
  title?: string;
  /** Optional per-input display labels (aligned with the input file list). */
  labels?: string[];
}

export const DEFAULT_STYLE: StyleOptions = { width: 800, height: 560 };

/** Raised when an input file does not match its expected schema. */
export class SchemaError extends Error {
  constructor(file: string, detail: string) {
    super(`${file}: ${detail}`);
    this.name = 'SchemaError';
  }
}
