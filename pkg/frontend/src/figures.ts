/**
 * Chart builders: one per figure id, CSV rows in, ECharts option out.
 *
 * Builders are pure (no I/O); the CLI wires file loading and SVG rendering
 * around them.  Energies are displayed in units of c^2, phases in units of
 * pi, times in atomic units.
 */
import type { EChartsOption } from 'echarts';

/** Structural series entry; cast into the echarts union on assembly. */
type SeriesEntry = Record<string, unknown>;
import { distinct, loadRows } from './csv.js';
import {
  C2,
  DEFAULT_STYLE,
  DiveEventRow,
  FigureId,
  NumberSeriesRow,
  OptimalPhaseRow,
  PhaseSweepRow,
  SchemaError,
  SpectrumRow,
  StyleOptions,
  WellGridRow,
} from './types.js';

const PALETTE = ['#1f1f1f', '#c23531', '#2f4b99', '#1a7f37', '#7b3fa0', '#b8860b'];

function baseOption(style: StyleOptions, xName: string, yName: string): EChartsOption {
  return {
    animation: false,
    color: PALETTE,
    title: style.title ? { text: style.title, left: 'center' } : undefined,
    grid: { left: 70, right: 30, top: style.title ? 60 : 30, bottom: 55 },
    xAxis: { type: 'value', name: xName, nameLocation: 'middle', nameGap: 30 },
    yAxis: { type: 'value', name: yName, nameLocation: 'middle', nameGap: 48 },
    legend: { top: style.title ? 28 : 4, right: 10, orient: 'vertical' },
  };
}

function requireInputs(figure: FigureId, inputs: string[], count: number): void {
  if (inputs.length < count) {
    throw new SchemaError(figure, `needs at least ${count} input file(s), got ${inputs.length}`);
  }
}

export function buildWellHeatmap(inputs: string[], style: StyleOptions): EChartsOption {
  requireInputs('well-heatmap', inputs, 1);
  const rows = loadRows<WellGridRow>(inputs[0], 'well_grid');
  const ts = distinct(rows, (r) => r.t).sort((a, b) => a - b);
  const zs = distinct(rows, (r) => r.z).sort((a, b) => a - b);
  const tIndex = new Map(ts.map((t, i) => [t, i]));
  const zIndex = new Map(zs.map((z, i) => [z, i]));
  const data = rows.map((r) => [tIndex.get(r.t), zIndex.get(r.z), r.V / C2]);
  const vMin = Math.min(...rows.map((r) => r.V / C2));
  return {
    animation: false,
    title: style.title ? { text: style.title, left: 'center' } : undefined,
    grid: { left: 70, right: 90, top: style.title ? 60 : 30, bottom: 55 },
    xAxis: {
      type: 'category',
      name: 't (a.u.)',
      nameLocation: 'middle',
      nameGap: 30,
      data: ts.map((t) => t.toExponential(3)),
    },
    yAxis: {
      type: 'category',
      name: 'z (a.u.)',
      nameLocation: 'middle',
      nameGap: 48,
      data: zs.map((z) => z.toFixed(4)),
    },
    visualMap: {
      min: vMin,
      max: 0,
      calculable: false,
      orient: 'vertical',
      right: 10,
      top: 'center',
      text: ['0', `${vMin.toFixed(2)} c^2`],
      inRange: { color: ['#08306b', '#4292c6', '#deebf7', '#ffffff'] },
    },
    series: [{ type: 'heatmap', data, progressive: 0 }],
  };
}

function phaseLines(rows: PhaseSweepRow[]): SeriesEntry[] {
  const omegas = distinct(rows, (r) => r.omega0);
  return omegas.map((omega0) => ({
    type: 'line',
    name: `omega0 = ${(omega0 / C2).toFixed(2)} c^2`,
    symbol: 'circle',
    symbolSize: 7,
    data: rows
      .filter((r) => r.omega0 === omega0)
      .map((r) => [r.phi / Math.PI, r.N_final]),
  }));
}

export function buildNumberVsPhase(inputs: string[], style: StyleOptions): EChartsOption {
  requireInputs('number-vs-phase', inputs, 1);
  const rows = loadRows<PhaseSweepRow>(inputs[0], 'phase_sweep');
  return {
    ...baseOption(style, 'phase difference (pi)', 'created electrons N'),
    series: phaseLines(rows) as EChartsOption['series'],
  };
}

export function buildMultiFrequencyPhase(inputs: string[], style: StyleOptions): EChartsOption {
  requireInputs('multi-frequency-phase', inputs, 1);
  const rows = loadRows<PhaseSweepRow>(inputs[0], 'phase_sweep');
  return {
    ...baseOption(style, 'phase difference (pi)', 'created electrons N'),
    series: phaseLines(rows) as EChartsOption['series'],
  };
}

export function buildSpectrum(inputs: string[], style: StyleOptions): EChartsOption {
  requireInputs('spectrum', inputs, 1);
  const rows = loadRows<SpectrumRow>(inputs[0], 'spectrum');
  const dives = inputs[1] ? loadRows<DiveEventRow>(inputs[1], 'dive_events') : [];
  const ranks = distinct(rows, (r) => r.level_rank).sort((a, b) => a - b);
  const tMax = Math.max(...rows.map((r) => r.t));
  const series: SeriesEntry[] = ranks.map((rank) => ({
    type: 'line',
    name: `level ${rank}`,
    showSymbol: false,
    lineStyle: { width: 1.5 },
    data: rows.filter((r) => r.level_rank === rank).map((r) => [r.t, r.E / C2]),
  }));
  // shaded continua above +c^2 and below -c^2
  series.push({
    type: 'line',
    name: 'continua',
    silent: true,
    data: [],
    markArea: {
      itemStyle: { color: 'rgba(120,120,120,0.25)' },
      data: [
        [{ coord: [0, 1] }, { coord: [tMax, 1.6] }],
        [{ coord: [0, -1.6] }, { coord: [tMax, -1] }],
      ],
    },
  });
  if (dives.length > 0) {
    series.push({
      type: 'scatter',
      name: 'dive boundary crossings',
      symbol: 'triangle',
      symbolSize: 9,
      data: dives.flatMap((d) => [
        [d.t_enter, -1],
        [d.t_exit, -1],
      ]),
    });
  }
  const option = baseOption(style, 't (a.u.)', 'E (c^2)');
  return {
    ...option,
    yAxis: { ...(option.yAxis as object), min: -1.6, max: 1.6 },
    series: series as EChartsOption['series'],
  };
}

function seriesFromNumberFiles(inputs: string[], labels?: string[]): SeriesEntry[] {
  return inputs.map((file, i) => {
    const rows = loadRows<NumberSeriesRow>(file, 'number_series');
    return {
      type: 'line' as const,
      name: labels?.[i] ?? file.replace(/^.*\//, ''),
      showSymbol: false,
      data: rows.map((r) => [r.t, r.N]),
    };
  });
}

export function buildNumberVsTime(inputs: string[], style: StyleOptions): EChartsOption {
  requireInputs('number-vs-time', inputs, 1);
  return {
    ...baseOption(style, 't (a.u.)', 'created electrons N'),
    series: seriesFromNumberFiles(inputs, style.labels) as EChartsOption['series'],
  };
}

export function buildNumberVsTimeHighFrequency(inputs: string[], style: StyleOptions): EChartsOption {
  requireInputs('number-vs-time-hf', inputs, 1);
  // same layout as number-vs-time; stepwise growth over many drive cycles
  return {
    ...baseOption(style, 't (a.u.)', 'created electrons N'),
    series: seriesFromNumberFiles(inputs, style.labels) as EChartsOption['series'],
  };
}

export function buildOptimalPhase(inputs: string[], style: StyleOptions): EChartsOption {
  requireInputs('optimal-phase', inputs, 1);
  const rows = loadRows<OptimalPhaseRow>(inputs[0], 'optimal_phase');
  const sorted = [...rows].sort((a, b) => a.omega0 - b.omega0);
  return {
    ...baseOption(style, 'omega0 (c^2)', 'optimal phase (pi)'),
    series: [
      {
        type: 'line',
        name: 'lower branch',
        symbol: 'circle',
        symbolSize: 7,
        data: sorted.map((r) => [r.omega0 / C2, r.phi_opt_low / Math.PI]),
      },
      {
        type: 'line',
        name: 'mirror branch',
        symbol: 'diamond',
        symbolSize: 7,
        data: sorted.map((r) => [r.omega0 / C2, r.phi_opt_high / Math.PI]),
      },
    ] as EChartsOption['series'],
  };
}

export const BUILDERS: Record<FigureId, (inputs: string[], style: StyleOptions) => EChartsOption> = {
  'well-heatmap': buildWellHeatmap,
  'number-vs-phase': buildNumberVsPhase,
  spectrum: buildSpectrum,
  'number-vs-time': buildNumberVsTime,
  'multi-frequency-phase': buildMultiFrequencyPhase,
  'number-vs-time-hf': buildNumberVsTimeHighFrequency,
  'optimal-phase': buildOptimalPhase,
};

export function buildFigure(
  figure: FigureId,
  inputs: string[],
  style: StyleOptions = DEFAULT_STYLE,
): EChartsOption {
  const builder = BUILDERS[figure];
  if (!builder) {
    throw new SchemaError(figure, `unknown figure id; known: ${Object.keys(BUILDERS).join(', ')}`);
  }
  return builder(inputs, style);
}
