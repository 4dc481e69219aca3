/** The three plot builders: troubled-cell history, solution overlay, and
 * density contours.  Each returns a scene plus counters the tests assert
 * against. */

import { HistoryData, SnapshotPoint, SchemaError } from "./csv.js";
import { contourLevels, contourSegments, Grid } from "./contours.js";
import { makeFrame, Scene } from "./scene.js";

const MARKER = "#1f5fbf";
const REF = "#444444";

export interface BuiltPlot {
  scene: Scene;
  markers: number;
  lines: number;
}

export function buildHistoryPlot(data: HistoryData): BuiltPlot {
  if (data.dim !== 1) {
    throw new SchemaError(
      "history scatter plots are for 1D runs (element_i only)");
  }
  const elements = Number(data.meta["elements"] ?? NaN);
  const domain = (data.meta["domain"] ?? "").split(",").map(Number);
  const mapX = (i: number): number => {
    if (Number.isFinite(elements) && domain.length === 2
        && Number.isFinite(domain[0]) && Number.isFinite(domain[1])) {
      const dx = (domain[1] - domain[0]) / elements;
      return domain[0] + (i + 0.5) * dx;
    }
    return i;
  };
  const xs = data.rows.map((r) => mapX(r.i));
  const times = data.rows.map((r) => r.time);
  const tMax = times.length ? Math.max(...times) : 1.0;
  let xLo: number;
  let xHi: number;
  if (domain.length === 2 && Number.isFinite(domain[0])
      && Number.isFinite(domain[1])) {
    [xLo, xHi] = [domain[0], domain[1]];
  } else if (xs.length) {
    xLo = Math.min(...xs);
    xHi = Math.max(...xs);
  } else {
    [xLo, xHi] = [0, 1];
  }
  const frame = makeFrame([xLo, xHi], [0, tMax || 1.0],
                          { xLabel: "x", yLabel: "t",
                            title: "troubled cells" });
  for (let n = 0; n < xs.length; n++) {
    frame.scene.primitives.push({
      kind: "circle", x: frame.sx(xs[n]), y: frame.sy(times[n]),
      r: 1.6, color: MARKER,
    });
  }
  return { scene: frame.scene, markers: xs.length, lines: 0 };
}

function pickComponent(points: SnapshotPoint[], requested?: string): string {
  const present = [...new Set(points.map((p) => p.component))];
  if (requested) {
    if (!present.includes(requested)) {
      throw new SchemaError(`component "${requested}" not in file ` +
        `(has: ${present.join(",")})`);
    }
    return requested;
  }
  for (const preferred of ["rho", "u"]) {
    if (present.includes(preferred)) return preferred;
  }
  return present[0];
}

export function buildSolutionPlot(
    points: SnapshotPoint[],
    reference: { x: number; value: number }[] | null,
    component?: string): BuiltPlot {
  if (points.some((p) => p.y !== undefined)) {
    throw new SchemaError("solution plots read 1D snapshots; " +
      "use the contour plot for 2D fields");
  }
  const comp = pickComponent(points, component);
  const sel = points.filter((p) => p.component === comp)
    .sort((a, b) => a.x - b.x);
  const refSorted = reference ? [...reference].sort((a, b) => a.x - b.x) : [];
  const allX = sel.map((p) => p.x).concat(refSorted.map((p) => p.x));
  const allV = sel.map((p) => p.value).concat(refSorted.map((p) => p.value));
  const vLo = Math.min(...allV);
  const vHi = Math.max(...allV);
  const pad = (vHi - vLo || 1.0) * 0.05;
  const frame = makeFrame(
    [Math.min(...allX), Math.max(...allX)], [vLo - pad, vHi + pad],
    { xLabel: "x", yLabel: comp, title: `solution (${comp})` });
  let lines = 0;
  if (refSorted.length > 1) {
    frame.scene.primitives.push({
      kind: "line", width: 1.5, color: REF,
      points: refSorted.map((p) =>
        [frame.sx(p.x), frame.sy(p.value)] as [number, number]),
    });
    lines++;
  }
  for (const p of sel) {
    frame.scene.primitives.push({
      kind: "circle", x: frame.sx(p.x), y: frame.sy(p.value),
      r: 2.0, color: MARKER,
    });
  }
  return { scene: frame.scene, markers: sel.length, lines };
}

function toGrid(points: SnapshotPoint[], comp: string): Grid {
  const sel = points.filter((p) => p.component === comp);
  const xs = [...new Set(sel.map((p) => p.x))].sort((a, b) => a - b);
  const ys = [...new Set(sel.map((p) => p.y as number))].sort((a, b) => a - b);
  const xi = new Map(xs.map((v, i) => [v, i]));
  const yi = new Map(ys.map((v, i) => [v, i]));
  const values: number[][] = xs.map(() => new Array(ys.length).fill(NaN));
  for (const p of sel) {
    values[xi.get(p.x) as number][yi.get(p.y as number) as number] = p.value;
  }
  for (const col of values) {
    for (const v of col) {
      if (Number.isNaN(v)) {
        throw new SchemaError("2D snapshot does not fill a full grid");
      }
    }
  }
  return { xs, ys, values };
}

export function buildContourPlot(
    points: SnapshotPoint[], levels = 30, component?: string): BuiltPlot {
  if (!points.some((p) => p.y !== undefined)) {
    throw new SchemaError("contour plots need a 2D snapshot (x,y,...)");
  }
  const comp = pickComponent(points, component);
  const grid = toGrid(points, comp);
  const flat = grid.values.flat();
  const lo = Math.min(...flat);
  const hi = Math.max(...flat);
  const frame = makeFrame(
    [grid.xs[0], grid.xs[grid.xs.length - 1]],
    [grid.ys[0], grid.ys[grid.ys.length - 1]],
    { xLabel: "x", yLabel: "y", title: `contours (${comp})` });
  let lines = 0;
  for (const level of contourLevels(lo, hi, levels)) {
    for (const seg of contourSegments(grid, level)) {
      frame.scene.primitives.push({
        kind: "line", width: 1, color: MARKER,
        points: [
          [frame.sx(seg[0][0]), frame.sy(seg[0][1])],
          [frame.sx(seg[1][0]), frame.sy(seg[1][1])],
        ],
      });
      lines++;
    }
  }
  return { scene: frame.scene, markers: 0, lines };
}
