/**
 * Minimal hand-rolled SVG line charts: linear/log axes, dashed strokes,
 * legends, and a fixed multi-panel layout. No runtime dependencies.
 */

export interface Series {
  x: number[];
  y: number[];
  label: string;
  color: string;
  width?: number;
  dash?: string; // stroke-dasharray
}

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  logY: boolean;
  series: Series[];
}

export const PANEL_W = 420;
export const PANEL_H = 320;
const MARGIN = { top: 34, right: 16, bottom: 46, left: 64 };

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return Number(v.toPrecision(3)).toString();
  }
  return v.toExponential(0).replace("+", "");
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function makeScale(values: number[], log: boolean, out0: number, out1: number): Scale {
  let finite = values.filter((v) => Number.isFinite(v) && (!log || v > 0));
  if (finite.length === 0) finite = [1, 10];
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    lo = log ? lo / 2 : lo - 1;
    hi = log ? hi * 2 : hi + 1;
  }
  const t = (v: number) => (log ? Math.log10(v) : v);
  const [tlo, thi] = [t(lo), t(hi)];
  const pad = 0.04 * (thi - tlo);
  const a = tlo - pad;
  const b = thi + pad;
  const scale = ((v: number) => out0 + ((t(v) - a) / (b - a)) * (out1 - out0)) as Scale;

  const ticks: number[] = [];
  if (log) {
    for (let d = Math.ceil(a); d <= Math.floor(b); d++) ticks.push(10 ** d);
    if (ticks.length < 2) {
      // narrow decade: fall back to a few linear ticks
      for (let i = 0; i <= 3; i++) ticks.push(10 ** (a + ((b - a) * i) / 3));
    }
  } else {
    const step = niceStep(b - a);
    for (let v = Math.ceil(a / step) * step; v <= b + 1e-12; v += step) ticks.push(v);
  }
  scale.ticks = ticks;
  return scale;
}

function niceStep(range: number): number {
  const raw = range / 5;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const r = raw / mag;
  return (r >= 5 ? 5 : r >= 2 ? 2 : 1) * mag;
}

function panelSvg(spec: PanelSpec, ox: number, oy: number): string {
  const x0 = ox + MARGIN.left;
  const x1 = ox + PANEL_W - MARGIN.right;
  const y0 = oy + PANEL_H - MARGIN.bottom;
  const y1 = oy + MARGIN.top;

  const allX = spec.series.flatMap((s) => s.x);
  const allY = spec.series.flatMap((s) => s.y);
  const sx = makeScale(allX, spec.logX, x0, x1);
  const sy = makeScale(allY, spec.logY, y0, y1);

  const parts: string[] = [];
  parts.push(
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333" stroke-width="1"/>`,
    `<text x="${ox + PANEL_W / 2}" y="${oy + 18}" text-anchor="middle" font-size="14" font-weight="bold">${esc(spec.title)}</text>`,
    `<text x="${(x0 + x1) / 2}" y="${oy + PANEL_H - 10}" text-anchor="middle" font-size="12">${esc(spec.xLabel)}</text>`,
    `<text x="${ox + 16}" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 ${ox + 16} ${(y0 + y1) / 2})">${esc(spec.yLabel)}</text>`
  );

  for (const v of sx.ticks) {
    const px = sx(v);
    if (px < x0 - 0.5 || px > x1 + 0.5) continue;
    parts.push(
      `<line x1="${px.toFixed(2)}" y1="${y0}" x2="${px.toFixed(2)}" y2="${y0 + 4}" stroke="#333"/>`,
      `<text x="${px.toFixed(2)}" y="${y0 + 17}" text-anchor="middle" font-size="10">${fmtTick(v)}</text>`
    );
  }
  for (const v of sy.ticks) {
    const py = sy(v);
    if (py > y0 + 0.5 || py < y1 - 0.5) continue;
    parts.push(
      `<line x1="${x0 - 4}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="#333"/>`,
      `<text x="${x0 - 7}" y="${(py + 3).toFixed(2)}" text-anchor="end" font-size="10">${fmtTick(v)}</text>`
    );
  }

  for (const s of spec.series) {
    const pts: string[] = [];
    for (let i = 0; i < s.x.length; i++) {
      const vx = s.x[i];
      const vy = s.y[i];
      if (!Number.isFinite(vx) || !Number.isFinite(vy)) continue;
      if ((spec.logX && vx <= 0) || (spec.logY && vy <= 0)) continue;
      pts.push(`${sx(vx).toFixed(2)},${sy(vy).toFixed(2)}`);
    }
    if (pts.length === 0) continue;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" stroke="${s.color}" stroke-width="${s.width ?? 1.5}"${dash}/>`
    );
  }

  // legend, top-right inside the frame
  spec.series.forEach((s, i) => {
    const ly = y1 + 14 + 14 * i;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<line x1="${x1 - 130}" y1="${ly}" x2="${x1 - 104}" y2="${ly}" stroke="${s.color}" stroke-width="${s.width ?? 1.5}"${dash}/>`,
      `<text x="${x1 - 99}" y="${ly + 3}" font-size="10">${esc(s.label)}</text>`
    );
  });

  return parts.join("\n");
}

/** Lay panels out on a fixed grid and wrap them in a complete SVG document. */
export function renderPanels(panels: PanelSpec[], columns: number): string {
  const rows = Math.ceil(panels.length / columns);
  const width = columns * PANEL_W;
  const height = rows * PANEL_H;
  const body = panels
    .map((p, i) => panelSvg(p, (i % columns) * PANEL_W, Math.floor(i / columns) * PANEL_H))
    .join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    body,
    "</svg>",
    "",
  ].join("\n");
}
