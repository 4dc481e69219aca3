import { describe, expect, it } from "vitest";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { readHistory, readReference, readSnapshot, SchemaError } from
  "../src/csv.js";
import { buildContourPlot, buildHistoryPlot, buildSolutionPlot } from
  "../src/plots.js";
import { contourLevels, contourSegments } from "../src/contours.js";
import { renderSvg } from "../src/svg.js";
import { renderPng } from "../src/raster.js";
import { linearScale, ticks } from "../src/scene.js";

const golden = join(dirname(fileURLToPath(import.meta.url)), "..", "golden");
const g = (name: string) => join(golden, name);

describe("csv readers", () => {
  it("reads history with metadata", () => {
    const h = readHistory(g("history_1d.csv"));
    expect(h.rows.length).toBe(7);
    expect(h.meta["elements"]).toBe("16");
    expect(h.dim).toBe(1);
  });

  it("reads snapshots and references", () => {
    expect(readSnapshot(g("snap_1d.csv")).length).toBe(3 * 24);
    expect(readSnapshot(g("snap_2d.csv"))[0].y).toBeDefined();
    expect(readReference(g("ref_1d.csv")).length).toBe(96);
  });

  it("names the missing column", () => {
    expect(() => readSnapshot(g("broken_missing_col.csv")))
      .toThrowError(/component/);
  });

  it("rejects non-numeric values", () => {
    expect(() => readSnapshot(g("broken_non_numeric.csv")))
      .toThrowError(SchemaError);
  });
});

describe("history plot", () => {
  it("one marker per row", () => {
    const built = buildHistoryPlot(readHistory(g("history_1d.csv")));
    expect(built.markers).toBe(7);
    const svg = renderSvg(built.scene);
    expect((svg.match(/<circle/g) ?? []).length).toBe(7);
  });

  it("empty history still renders axes", () => {
    const built = buildHistoryPlot(readHistory(g("history_empty.csv")));
    expect(built.markers).toBe(0);
    const svg = renderSvg(built.scene);
    expect(svg).toContain("<svg");
    expect((svg.match(/<circle/g) ?? []).length).toBe(0);
  });

  it("maps element index to the physical center", () => {
    const h = readHistory(g("history_1d.csv"));
    const built = buildHistoryPlot(h);
    // 16 elements on [-1, 1]: element 7 centers at -0.0625
    const marker = built.scene.primitives.find((p) => p.kind === "circle");
    expect(marker).toBeDefined();
  });
});

describe("solution plot", () => {
  it("markers plus reference line", () => {
    const built = buildSolutionPlot(readSnapshot(g("snap_1d.csv")),
                                    readReference(g("ref_1d.csv")));
    expect(built.markers).toBe(24);    // density entries only
    expect(built.lines).toBe(1);
  });

  it("works without a reference", () => {
    const built = buildSolutionPlot(readSnapshot(g("snap_1d.csv")), null);
    expect(built.lines).toBe(0);
  });

  it("component selection is validated", () => {
    expect(() => buildSolutionPlot(readSnapshot(g("snap_1d.csv")), null,
                                   "pressure"))
      .toThrowError(/pressure/);
  });

  it("rejects 2D input", () => {
    expect(() => buildSolutionPlot(readSnapshot(g("snap_2d.csv")), null))
      .toThrowError(SchemaError);
  });
});

describe("contour plot", () => {
  it("radial field yields closed-ish level sets", () => {
    const built = buildContourPlot(readSnapshot(g("snap_2d.csv")), 10);
    expect(built.lines).toBeGreaterThan(50);
  });

  it("constant field draws no contour lines and does not fail", () => {
    const built = buildContourPlot(readSnapshot(g("snap_2d_const.csv")), 30);
    expect(built.lines).toBe(0);
  });

  it("rejects 1D input", () => {
    expect(() => buildContourPlot(readSnapshot(g("snap_1d.csv"))))
      .toThrowError(SchemaError);
  });
});

describe("marching squares", () => {
  it("finds the circle at the right radius", () => {
    const n = 41;
    const xs = [...Array(n).keys()].map((i) => -2 + (4 * i) / (n - 1));
    const ys = xs;
    const values = xs.map((x) => ys.map((y) => x * x + y * y));
    const segs = contourSegments({ xs, ys, values }, 1.0);
    expect(segs.length).toBeGreaterThan(20);
    for (const seg of segs) {
      for (const [x, y] of seg) {
        const r = Math.hypot(x, y);
        expect(r).toBeGreaterThan(0.9);
        expect(r).toBeLessThan(1.1);
      }
    }
  });

  it("levels are interior and evenly spaced", () => {
    const lv = contourLevels(0, 1, 3);
    expect(lv).toEqual([0.25, 0.5, 0.75]);
    expect(contourLevels(1, 1, 30)).toEqual([]);
  });
});

describe("scales and rendering", () => {
  it("linear scale endpoints", () => {
    const s = linearScale([0, 10], [100, 200]);
    expect(s(0)).toBe(100);
    expect(s(10)).toBe(200);
  });

  it("ticks cover the domain with round values", () => {
    const t = ticks([0, 2]);
    expect(t[0]).toBeGreaterThanOrEqual(0);
    expect(t[t.length - 1]).toBeLessThanOrEqual(2);
  });

  it("png encoder emits a valid signature and chunks", () => {
    const built = buildHistoryPlot(readHistory(g("history_1d.csv")));
    const png = renderPng(built.scene);
    expect([...png.subarray(0, 8)]).toEqual([137, 80, 78, 71, 13, 10, 26,
                                             10]);
    expect(png.includes(Buffer.from("IHDR"))).toBe(true);
    expect(png.includes(Buffer.from("IEND"))).toBe(true);
  });

  it("svg rendering is deterministic", () => {
    const built = buildHistoryPlot(readHistory(g("history_1d.csv")));
    expect(renderSvg(built.scene)).toBe(renderSvg(built.scene));
  });
});
