#!/usr/bin/env node
/**
 * `plot history|solution|contour --in <csv> [--ref <csv>] [--levels N]
 *  [--component name] --out <file.svg|file.png>`
 *
 * Output format follows the --out extension; schema violations exit 1 with
 * the offending column named on stderr.
 */

import { writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";

import { readHistory, readReference, readSnapshot, SchemaError } from
  "./csv.js";
import { buildContourPlot, buildHistoryPlot, buildSolutionPlot, BuiltPlot }
  from "./plots.js";
import { renderPng } from "./raster.js";
import { renderSvg } from "./svg.js";

const USAGE = `usage: mwdg-plot <history|solution|contour> --in <csv> \
[--ref <csv>] [--levels N] [--component name] --out <file.svg|file.png>`;

interface Options {
  command: string;
  input: string;
  output: string;
  ref?: string;
  levels: number;
  component?: string;
}

export function parseArgs(argv: string[]): Options {
  if (argv.length === 0) throw new UsageError("missing subcommand");
  const [command, ...rest] = argv;
  if (!["history", "solution", "contour"].includes(command)) {
    throw new UsageError(`unknown subcommand "${command}"`);
  }
  const opts: Partial<Options> = { command, levels: 30 };
  for (let i = 0; i < rest.length; i += 2) {
    const key = rest[i];
    const val = rest[i + 1];
    if (val === undefined) throw new UsageError(`missing value for ${key}`);
    switch (key) {
      case "--in": opts.input = val; break;
      case "--out": opts.output = val; break;
      case "--ref": opts.ref = val; break;
      case "--component": opts.component = val; break;
      case "--levels": {
        const n = Number(val);
        if (!Number.isInteger(n) || n < 0) {
          throw new UsageError(`--levels expects a non-negative integer`);
        }
        opts.levels = n;
        break;
      }
      default:
        throw new UsageError(`unknown option "${key}"`);
    }
  }
  if (!opts.input) throw new UsageError("--in is required");
  if (!opts.output) throw new UsageError("--out is required");
  return opts as Options;
}

class UsageError extends Error {}

export function buildPlot(opts: Options): BuiltPlot {
  switch (opts.command) {
    case "history":
      return buildHistoryPlot(readHistory(opts.input));
    case "solution": {
      const ref = opts.ref ? readReference(opts.ref) : null;
      return buildSolutionPlot(readSnapshot(opts.input), ref,
                               opts.component);
    }
    default:
      return buildContourPlot(readSnapshot(opts.input), opts.levels,
                              opts.component);
  }
}

export function run(argv: string[]): number {
  let opts: Options;
  try {
    opts = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`${err.message}\n${USAGE}\n`);
      return 2;
    }
    throw err;
  }
  try {
    const built = buildPlot(opts);
    if (opts.output.toLowerCase().endsWith(".png")) {
      writeFileSync(opts.output, renderPng(built.scene));
    } else {
      writeFileSync(opts.output, renderSvg(built.scene));
    }
    process.stdout.write(
      `wrote ${opts.output} (${built.markers} markers, ` +
      `${built.lines} lines)\n`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] !== undefined
    && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(run(process.argv.slice(2)));
}
