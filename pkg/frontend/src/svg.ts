/** Deterministic SVG line charts: identical input data yields identical bytes. */

import { Curve, FigureData } from "./figure.js";

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { top: 44, right: 24, bottom: 56, left: 72 };

// fixed palette, assigned to curves in order of first appearance
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"];

interface Scale {
  lo: number;
  hi: number;
  toPixel(value: number): number;
}

function makeScale(lo: number, hi: number, pixelLo: number, pixelHi: number): Scale {
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const slope = (pixelHi - pixelLo) / (hi - lo);
  return { lo, hi, toPixel: (value: number) => pixelLo + (value - lo) * slope };
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  const rawStep = span / Math.max(1, count);
  const magnitude = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const residual = rawStep / magnitude;
  const step = (residual >= 5 ? 5 : residual >= 2 ? 2 : 1) * magnitude;
  const first = Math.ceil(lo / step - 1e-9);
  const last = Math.floor(hi / step + 1e-9);
  const ticks: number[] = [];
  for (let i = first; i <= last; i++) {
    ticks.push(i * step);
  }
  return ticks;
}

function fmt(value: number): string {
  // collapse float artifacts (0.30000000000000004 -> 0.3)
  return String(Number(value.toPrecision(12)));
}

function px(value: number): string {
  return String(Math.round(value * 100) / 100);
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function dataExtent(curves: Curve[]): { x: [number, number]; y: [number, number] } {
  let xLo = Infinity;
  let xHi = -Infinity;
  let yLo = Infinity;
  let yHi = -Infinity;
  for (const curve of curves) {
    for (const point of curve.points) {
      xLo = Math.min(xLo, point.x);
      xHi = Math.max(xHi, point.x);
      for (const y of [point.analytic, point.sim]) {
        if (y !== null) {
          yLo = Math.min(yLo, y);
          yHi = Math.max(yHi, y);
        }
      }
      if (point.sim !== null && point.stderr !== null) {
        yLo = Math.min(yLo, point.sim - 3 * point.stderr);
        yHi = Math.max(yHi, point.sim + 3 * point.stderr);
      }
    }
  }
  const pad = (yHi - yLo || 1) * 0.05;
  return { x: [xLo, xHi], y: [yLo - pad, yHi + pad] };
}

export function renderSvg(figure: FigureData): string {
  const extent = dataExtent(figure.curves);
  const x = makeScale(extent.x[0], extent.x[1], MARGIN.left, WIDTH - MARGIN.right);
  const y = makeScale(extent.y[0], extent.y[1], HEIGHT - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15">${escapeXml(figure.title)}</text>`,
  );

  // gridlines and axis ticks
  for (const tick of niceTicks(y.lo, y.hi)) {
    const yy = px(y.toPixel(tick));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${yy}" x2="${WIDTH - MARGIN.right}" y2="${yy}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${yy}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="11">${fmt(tick)}</text>`,
    );
  }
  for (const tick of niceTicks(x.lo, x.hi, 8)) {
    const xx = px(x.toPixel(tick));
    const base = HEIGHT - MARGIN.bottom;
    parts.push(`<line x1="${xx}" y1="${base}" x2="${xx}" y2="${base + 5}" stroke="#000000"/>`);
    parts.push(
      `<text x="${xx}" y="${base + 18}" text-anchor="middle" font-size="11">${fmt(tick)}</text>`,
    );
  }

  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${WIDTH - MARGIN.left - MARGIN.right}" ` +
      `height="${HEIGHT - MARGIN.top - MARGIN.bottom}" fill="none" stroke="#000000"/>`,
  );

  // axis labels
  parts.push(
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 14}" ` +
      `text-anchor="middle" font-size="13">${escapeXml(figure.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2}" text-anchor="middle" ` +
      `font-size="13" transform="rotate(-90 18 ${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2})">` +
      `${escapeXml(figure.yLabel)}</text>`,
  );

  // one polyline per curve, then simulated markers with +/-3 stderr bars
  figure.curves.forEach((curve, index) => {
    const color = COLORS[index % COLORS.length];
    const linePoints = curve.points
      .filter((p) => p.analytic !== null || p.sim !== null)
      .map((p) => `${px(x.toPixel(p.x))},${px(y.toPixel((p.analytic ?? p.sim)!))}`)
      .join(" ");
    parts.push(
      `<polyline class="curve" data-label="${escapeXml(curve.label)}" points="${linePoints}" ` +
        `fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
    for (const point of curve.points) {
      if (point.sim === null) {
        continue;
      }
      const cx = px(x.toPixel(point.x));
      const cy = px(y.toPixel(point.sim));
      if (point.stderr !== null) {
        const yTop = px(y.toPixel(point.sim + 3 * point.stderr));
        const yBot = px(y.toPixel(point.sim - 3 * point.stderr));
        parts.push(
          `<line class="errorbar" x1="${cx}" y1="${yTop}" x2="${cx}" y2="${yBot}" ` +
            `stroke="${color}" stroke-width="1"/>`,
        );
      }
      parts.push(`<circle class="sim" cx="${cx}" cy="${cy}" r="2.5" fill="${color}"/>`);
    }
  });

  // legend, top-right corner of the plot area
  figure.curves.forEach((curve, index) => {
    const color = COLORS[index % COLORS.length];
    const yy = MARGIN.top + 16 + 18 * index;
    const xx = WIDTH - MARGIN.right - 150;
    parts.push(
      `<line x1="${xx}" y1="${yy}" x2="${xx + 26}" y2="${yy}" stroke="${color}" stroke-width="1.8"/>`,
    );
    parts.push(
      `<text x="${xx + 32}" y="${yy}" dominant-baseline="middle" font-size="12">` +
        `${escapeXml(curve.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
