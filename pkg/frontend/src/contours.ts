/**
 * Marching-squares iso-lines on a regular grid.
 *
 * The grid is cell-centered data (values at (xs[i], ys[j])); each quad of
 * four neighbors yields up to two segments per level with linear
 * interpolation along the edges.  The ambiguous saddle cases (5, 10) are
 * resolved by the cell-average rule.
 */

export interface Grid {
  xs: number[];
  ys: number[];
  values: number[][];   // values[i][j] with i indexing xs
}

export type Segment = [[number, number], [number, number]];

function interp(level: number, a: number, b: number): number {
  const d = b - a;
  if (d === 0) return 0.5;
  return (level - a) / d;
}

export function contourSegments(grid: Grid, level: number): Segment[] {
  const { xs, ys, values } = grid;
  const out: Segment[] = [];
  for (let i = 0; i < xs.length - 1; i++) {
    for (let j = 0; j < ys.length - 1; j++) {
      const v00 = values[i][j];
      const v10 = values[i + 1][j];
      const v11 = values[i + 1][j + 1];
      const v01 = values[i][j + 1];
      let code = 0;
      if (v00 > level) code |= 1;
      if (v10 > level) code |= 2;
      if (v11 > level) code |= 4;
      if (v01 > level) code |= 8;
      if (code === 0 || code === 15) continue;

      const x0 = xs[i];
      const x1 = xs[i + 1];
      const y0 = ys[j];
      const y1 = ys[j + 1];
      // edge midpoints by interpolation: bottom, right, top, left
      const bottom: [number, number] =
        [x0 + interp(level, v00, v10) * (x1 - x0), y0];
      const right: [number, number] =
        [x1, y0 + interp(level, v10, v11) * (y1 - y0)];
      const top: [number, number] =
        [x0 + interp(level, v01, v11) * (x1 - x0), y1];
      const left: [number, number] =
        [x0, y0 + interp(level, v00, v01) * (y1 - y0)];

      const emit = (a: [number, number], b: [number, number]) =>
        out.push([a, b]);
      switch (code) {
        case 1: case 14: emit(left, bottom); break;
        case 2: case 13: emit(bottom, right); break;
        case 3: case 12: emit(left, right); break;
        case 4: case 11: emit(right, top); break;
        case 6: case 9: emit(bottom, top); break;
        case 7: case 8: emit(left, top); break;
        case 5: case 10: {
          const center = (v00 + v10 + v11 + v01) / 4;
          const same = (center > level) === (code === 5);
          if (same) {
            emit(left, bottom);
            emit(right, top);
          } else {
            emit(left, top);
            emit(bottom, right);
          }
          break;
        }
      }
    }
  }
  return out;
}

/** Evenly spaced interior levels between the field extremes. */
export function contourLevels(lo: number, hi: number, count: number):
    number[] {
  if (!(hi > lo) || count <= 0) return [];
  const out: number[] = [];
  for (let i = 1; i <= count; i++) {
    out.push(lo + (i * (hi - lo)) / (count + 1));
  }
  return out;
}
