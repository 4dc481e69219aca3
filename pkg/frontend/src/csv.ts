/**
 * Strict readers for the solver's CSV products.
 *
 * All files are plain comma-separated values without quoting; history files
 * carry one leading `#` metadata line (elements/steps/domain and, in 2D,
 * nx/ny) that makes them self-describing.  Schema violations throw
 * SchemaError naming the offending column so the CLI can exit nonzero with
 * a useful message.
 */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface HistoryData {
  meta: Record<string, string>;
  rows: { step: number; time: number; i: number; j?: number; mode?: string }[];
  dim: number;
}

export interface SnapshotPoint {
  x: number;
  y?: number;
  component: string;
  value: number;
}

function splitLines(path: string): string[] {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  return text.split(/\r?\n/).filter((l) => l.length > 0);
}

function parseMeta(line: string): Record<string, string> {
  const meta: Record<string, string> = {};
  for (const tok of line.slice(1).trim().split(/\s+/)) {
    const eq = tok.indexOf("=");
    if (eq > 0) meta[tok.slice(0, eq)] = tok.slice(eq + 1);
  }
  return meta;
}

function requireColumns(header: string[], required: string[], path: string) {
  for (const col of required) {
    if (!header.includes(col)) {
      throw new SchemaError(`${path}: missing column "${col}" ` +
        `(found: ${header.join(",")})`);
    }
  }
}

function num(raw: string, column: string, path: string): number {
  const v = Number(raw);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`${path}: non-numeric value "${raw}" ` +
      `in column "${column}"`);
  }
  return v;
}

export function readHistory(path: string): HistoryData {
  const lines = splitLines(path);
  let meta: Record<string, string> = {};
  let start = 0;
  if (lines.length > 0 && lines[0].startsWith("#")) {
    meta = parseMeta(lines[0]);
    start = 1;
  }
  if (lines.length <= start) {
    throw new SchemaError(`${path}: empty history file`);
  }
  const header = lines[start].split(",");
  requireColumns(header, ["step", "time", "element_i"], path);
  const idx = (name: string) => header.indexOf(name);
  const stepCol = idx("step");
  const timeCol = idx("time");
  const iCol = idx("element_i");
  const jCol = idx("element_j");
  const modeCol = idx("mode");
  const rows = lines.slice(start + 1).map((line) => {
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(
        `${path}: row has ${parts.length} fields, header has ` +
        `${header.length}: "${line}"`);
    }
    const row: HistoryData["rows"][number] = {
      step: num(parts[stepCol], "step", path),
      time: num(parts[timeCol], "time", path),
      i: num(parts[iCol], "element_i", path),
    };
    if (jCol >= 0) row.j = num(parts[jCol], "element_j", path);
    if (modeCol >= 0) row.mode = parts[modeCol];
    return row;
  });
  const dim = jCol >= 0 ? 2 : 1;
  return { meta, rows, dim };
}

/** Snapshot files: `x,component,value` or `x,y,component,value`. */
export function readSnapshot(path: string): SnapshotPoint[] {
  const lines = splitLines(path);
  if (lines.length === 0) throw new SchemaError(`${path}: empty file`);
  const header = lines[0].split(",");
  requireColumns(header, ["x", "component", "value"], path);
  const has2d = header.includes("y");
  const xCol = header.indexOf("x");
  const yCol = header.indexOf("y");
  const cCol = header.indexOf("component");
  const vCol = header.indexOf("value");
  return lines.slice(1).map((line) => {
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(`${path}: malformed row "${line}"`);
    }
    const p: SnapshotPoint = {
      x: num(parts[xCol], "x", path),
      component: parts[cCol],
      value: num(parts[vCol], "value", path),
    };
    if (has2d) p.y = num(parts[yCol], "y", path);
    return p;
  });
}

/** Reference profiles: `x,value` (a bare density curve). */
export function readReference(path: string): { x: number; value: number }[] {
  const lines = splitLines(path);
  if (lines.length === 0) throw new SchemaError(`${path}: empty file`);
  const header = lines[0].split(",");
  requireColumns(header, ["x", "value"], path);
  const xCol = header.indexOf("x");
  const vCol = header.indexOf("value");
  return lines.slice(1).map((line) => {
    const parts = line.split(",");
    return {
      x: num(parts[xCol], "x", path),
      value: num(parts[vCol], "value", path),
    };
  });
}
