/**
 * Server-side SVG rendering: ECharts option in, SVG file out.  No DOM, no
 * browser; output depends only on the option and the pinned echarts
 * version.
 */
import { mkdirSync, writeFileSync } from 'node:fs';
import { dirname } from 'node:path';
import * as echarts from 'echarts';
import type { EChartsOption } from 'echarts';
import { DEFAULT_STYLE, StyleOptions } from './types.js';

export function renderToSvg(option: EChartsOption, style: StyleOptions = DEFAULT_STYLE): string {
  const chart = echarts.init(null, null, {
    renderer: 'svg',
    ssr: true,
    width: style.width,
    height: style.height,
  });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

export function writeSvg(path: string, svg: string): void {
  mkdirSync(dirname(path), { recursive: true });
  writeFileSync(path, svg, 'utf-8');
}
