/** Scene-to-SVG serialization (deterministic, no timestamps). */

import { Scene } from "./scene.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

const fmt = (v: number) => String(Math.round(v * 100) / 100);

export function renderSvg(scene: Scene): string {
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" ` +
    `width="${scene.width}" height="${scene.height}" ` +
    `viewBox="0 0 ${scene.width} ${scene.height}">`);
  for (const p of scene.primitives) {
    switch (p.kind) {
      case "rect":
        parts.push(`<rect x="${fmt(p.x)}" y="${fmt(p.y)}" ` +
          `width="${fmt(p.w)}" height="${fmt(p.h)}" fill="${p.color}"/>`);
        break;
      case "circle":
        parts.push(`<circle cx="${fmt(p.x)}" cy="${fmt(p.y)}" ` +
          `r="${fmt(p.r)}" fill="${p.color}"/>`);
        break;
      case "line": {
        const d = p.points.map((pt, i) =>
          `${i === 0 ? "M" : "L"}${fmt(pt[0])} ${fmt(pt[1])}`).join("");
        parts.push(`<path d="${d}" fill="none" stroke="${p.color}" ` +
          `stroke-width="${p.width}"/>`);
        break;
      }
      case "text":
        parts.push(`<text x="${fmt(p.x)}" y="${fmt(p.y)}" ` +
          `font-family="sans-serif" font-size="${p.size}" ` +
          `text-anchor="${p.anchor}">${esc(p.text)}</text>`);
        break;
    }
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
