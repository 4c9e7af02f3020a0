/**
 * Figure rendering CLI.
 *
 * Usage:
 *   node dist/cli.js render --figure spectrum \
 *     --input out/spectrum.csv --input out/dive_events.csv \
 *     --output fig3.svg [--width 800] [--height 560] [--title "..."]
 *     [--label "phi=0" --label "phi=pi/2" ...]
 */
import { parseArgs } from 'node:util';
import { buildFigure } from './figures.js';
import { renderToSvg, writeSvg } from './render.js';
import { DEFAULT_STYLE, FIGURE_IDS, FigureId, SchemaError } from './types.js';

export function runCli(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== 'render') {
    process.stderr.write(`unknown command '${command ?? ''}'; expected 'render'\n`);
    return 2;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: rest,
      options: {
        figure: { type: 'string' },
        input: { type: 'string', multiple: true },
        output: { type: 'string' },
        width: { type: 'string' },
        height: { type: 'string' },
        title: { type: 'string' },
        label: { type: 'string', multiple: true },
      },
    });
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 2;
  }
  const { figure, input, output, width, height, title, label } = parsed.values;
  if (!figure || !FIGURE_IDS.includes(figure as FigureId)) {
    process.stderr.write(`--figure must be one of: ${FIGURE_IDS.join(', ')}\n`);
    return 2;
  }
  if (!input || input.length === 0 || !output) {
    process.stderr.write('--input (repeatable) and --output are required\n');
    return 2;
  }
  const style = {
    width: width ? Number(width) : DEFAULT_STYLE.width,
    height: height ? Number(height) : DEFAULT_STYLE.height,
    title,
    labels: label,
  };
  try {
    const option = buildFigure(figure as FigureId, input, style);
    writeSvg(output, renderToSvg(option, style));
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      return 3;
    }
    throw err;
  }
  process.stdout.write(`${output}\n`);
  return 0;
}

const invokedDirectly = process.argv[1]?.endsWith('cli.js') ?? false;
if (invokedDirectly) {
  process.exit(runCli(process.argv.slice(2)));
}
