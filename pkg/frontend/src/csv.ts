/**
 * Typed CSV loading with explicit schema checks.
 *
 * Loaders fail fast with the offending file and column named, so a figure
 * never silently renders from a mismatched input.
 */
import { readFileSync } from 'node:fs';
import Papa from 'papaparse';
import { SchemaError } from './types.js';

const SCHEMAS: Record<string, string[]> = {
  number_series: ['t', 'N'],
  well_grid: ['t', 'z', 'V'],
  spectrum: ['t', 'level_rank', 'E'],
  dive_events: ['level_rank', 't_enter', 't_exit'],
  phase_sweep: ['omega0', 'phi', 'N_final'],
  frequency_summary: ['omega0', 'N_max', 'phi_at_max', 'N_min', 'phi_at_min', 'ratio'],
  optimal_phase: ['omega0', 'phi_opt_low', 'phi_opt_high'],
};

export type SchemaName = keyof typeof SCHEMAS;

export function loadRows<T>(file: string, schema: SchemaName): T[] {
  let text: string;
  try {
    text = readFileSync(file, 'utf-8');
  } catch (err) {
    throw new SchemaError(file, `cannot read file (${(err as Error).message})`);
  }
  const parsed = Papa.parse<Record<string, number>>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(file, `parse error at row ${first.row}: ${first.message}`);
  }
  const wanted = SCHEMAS[schema];
  const got = parsed.meta.fields ?? [];
  for (const column of wanted) {
    if (!got.includes(column)) {
      throw new SchemaError(file, `missing column '${column}' (expected ${wanted.join(',')}, found ${got.join(',')})`);
    }
  }
  parsed.data.forEach((row, i) => {
    for (const column of wanted) {
      const value = row[column];
      if (typeof value !== 'number' || Number.isNaN(value)) {
        throw new SchemaError(file, `non-numeric value in column '${column}' at data row ${i + 1}`);
      }
    }
  });
  return parsed.data as T[];
}

/** Distinct values in first-appearance order (series grouping helper). */
export function distinct<T, K>(rows: T[], key: (row: T) => K): K[] {
  const seen = new Set<K>();
  const out: K[] = [];
  for (const row of rows) {
    const k = key(row);
    if (!seen.has(k)) {
      seen.add(k);
      out.push(k);
    }
  }
  return out;
}
