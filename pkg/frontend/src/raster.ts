/**
 * Minimal PNG rasterizer for scenes: an RGBA framebuffer with line/circle/
 * rect drawing and a from-scratch PNG encoder (8-bit RGBA, filter 0,
 * node:zlib deflate).  Text primitives are skipped -- labeled output is the
 * SVG writer's job.
 */

import { deflateSync } from "node:zlib";

import { Scene } from "./scene.js";

function parseColor(color: string): [number, number, number] {
  const m = /^#([0-9a-fA-F]{6})$/.exec(color);
  if (!m) return [0, 0, 0];
  const v = parseInt(m[1], 16);
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
}

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number) {
    this.width = Math.max(1, Math.round(width));
    this.height = Math.max(1, Math.round(height));
    this.data = new Uint8Array(this.width * this.height * 4);
    this.data.fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]) {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const o = (yi * this.width + xi) * 4;
    this.data[o] = rgb[0];
    this.data[o + 1] = rgb[1];
    this.data[o + 2] = rgb[2];
    this.data[o + 3] = 255;
  }

  line(x0: number, y0: number, x1: number, y1: number,
       rgb: [number, number, number], width = 1) {
    let ax = Math.round(x0);
    let ay = Math.round(y0);
    const bx = Math.round(x1);
    const by = Math.round(y1);
    const dx = Math.abs(bx - ax);
    const dy = -Math.abs(by - ay);
    const sx = ax < bx ? 1 : -1;
    const sy = ay < by ? 1 : -1;
    let err = dx + dy;
    const rad = Math.max(0, Math.floor((width - 1) / 2));
    for (;;) {
      for (let ox = -rad; ox <= rad; ox++) {
        for (let oy = -rad; oy <= rad; oy++) {
          this.set(ax + ox, ay + oy, rgb);
        }
      }
      if (ax === bx && ay === by) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        ax += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ay += sy;
      }
    }
  }

  disc(cx: number, cy: number, r: number, rgb: [number, number, number]) {
    const ri = Math.max(1, Math.round(r));
    for (let oy = -ri; oy <= ri; oy++) {
      for (let ox = -ri; ox <= ri; ox++) {
        if (ox * ox + oy * oy <= ri * ri) this.set(cx + ox, cy + oy, rgb);
      }
    }
  }

  rect(x: number, y: number, w: number, h: number,
       rgb: [number, number, number]) {
    for (let yy = Math.round(y); yy < Math.round(y + h); yy++) {
      for (let xx = Math.round(x); xx < Math.round(x + w); xx++) {
        this.set(xx, yy, rgb);
      }
    }
  }
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) {
    c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, "ascii");
  const body = Buffer.concat([Buffer.from(type, "ascii"),
                              Buffer.from(payload)]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, Buffer.from(payload), tail]);
}

export function encodePng(raster: Raster): Buffer {
  const { width, height, data } = raster;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8;    // bit depth
  ihdr[9] = 6;    // RGBA
  const rows = Buffer.alloc(height * (1 + width * 4));
  for (let y = 0; y < height; y++) {
    const offset = y * (1 + width * 4);
    rows[offset] = 0;   // filter: none
    rows.set(data.subarray(y * width * 4, (y + 1) * width * 4), offset + 1);
  }
  const signature = Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]);
  return Buffer.concat([
    signature,
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(rows)),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

export function renderPng(scene: Scene): Buffer {
  const raster = new Raster(scene.width, scene.height);
  for (const p of scene.primitives) {
    switch (p.kind) {
      case "rect":
        raster.rect(p.x, p.y, p.w, p.h, parseColor(p.color));
        break;
      case "circle":
        raster.disc(p.x, p.y, p.r, parseColor(p.color));
        break;
      case "line": {
        const rgb = parseColor(p.color);
        for (let i = 1; i < p.points.length; i++) {
          raster.line(p.points[i - 1][0], p.points[i - 1][1],
                      p.points[i][0], p.points[i][1], rgb, p.width);
        }
        break;
      }
      case "text":
        break;   // rasterized output carries no labels
    }
  }
  return encodePng(raster);
}
