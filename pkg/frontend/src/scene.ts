/**
 * Backend-independent plot description: a sized canvas plus a flat list of
 * primitives in pixel coordinates.  The SVG writer renders everything; the
 * PNG rasterizer renders shapes and skips text (labels need font data the
 * rasterizer deliberately does not carry).
 */

export type Primitive =
  | { kind: "circle"; x: number; y: number; r: number; color: string }
  | { kind: "line"; points: [number, number][]; color: string; width: number }
  | { kind: "rect"; x: number; y: number; w: number; h: number; color: string }
  | {
      kind: "text";
      x: number;
      y: number;
      text: string;
      size: number;
      anchor: "start" | "middle" | "end";
    };

export interface Scene {
  width: number;
  height: number;
  primitives: Primitive[];
}

export interface LinearScale {
  (v: number): number;
  domain: [number, number];
}

export function linearScale(
  domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1.0;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as LinearScale;
  fn.domain = domain;
  return fn;
}

/** Round tick positions covering the domain (1/2/5 ladder). */
export function ticks(domain: [number, number], count = 6): number[] {
  const [lo, hi] = domain;
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(1, count);
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

export interface Frame {
  scene: Scene;
  sx: LinearScale;
  sy: LinearScale;
}

/** Empty axes with tick marks and labels; plot area is inset by margins. */
export function makeFrame(
  xDomain: [number, number], yDomain: [number, number],
  options: { width?: number; height?: number; xLabel?: string;
             yLabel?: string; title?: string } = {}): Frame {
  const width = options.width ?? 720;
  const height = options.height ?? 480;
  const m = { left: 64, right: 16, top: options.title ? 36 : 16, bottom: 48 };
  const sx = linearScale(xDomain, [m.left, width - m.right]);
  const sy = linearScale(yDomain, [height - m.bottom, m.top]);
  const prims: Primitive[] = [];
  prims.push({ kind: "rect", x: 0, y: 0, w: width, h: height,
               color: "#ffffff" });
  const axisColor = "#222222";
  prims.push({ kind: "line", width: 1, color: axisColor,
               points: [[m.left, m.top], [m.left, height - m.bottom],
                        [width - m.right, height - m.bottom]] });
  for (const t of ticks(xDomain)) {
    const px = sx(t);
    prims.push({ kind: "line", width: 1, color: axisColor,
                 points: [[px, height - m.bottom], [px, height - m.bottom + 5]] });
    prims.push({ kind: "text", x: px, y: height - m.bottom + 20,
                 text: formatTick(t), size: 12, anchor: "middle" });
  }
  for (const t of ticks(yDomain)) {
    const py = sy(t);
    prims.push({ kind: "line", width: 1, color: axisColor,
                 points: [[m.left - 5, py], [m.left, py]] });
    prims.push({ kind: "text", x: m.left - 8, y: py + 4,
                 text: formatTick(t), size: 12, anchor: "end" });
  }
  if (options.xLabel) {
    prims.push({ kind: "text", x: (m.left + width - m.right) / 2,
                 y: height - 10, text: options.xLabel, size: 14,
                 anchor: "middle" });
  }
  if (options.yLabel) {
    prims.push({ kind: "text", x: 14, y: m.top - 4, text: options.yLabel,
                 size: 14, anchor: "start" });
  }
  if (options.title) {
    prims.push({ kind: "text", x: width / 2, y: 22, text: options.title,
                 size: 16, anchor: "middle" });
  }
  return { scene: { width, height, primitives: prims }, sx, sy };
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(6)));
}
