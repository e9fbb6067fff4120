/** Minimal deterministic SVG assembly: fixed canvas, fixed styles, numbers
 * rounded to two decimals so the output is byte-stable across runs. */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 36, right: 24, bottom: 52, left: 64 };

export interface Scale {
  (value: number): number;
  ticks: number[];
  label: (v: number) => string;
}

function fmt(x: number): string {
  const r = Math.round(x * 100) / 100;
  return Object.is(r, -0) ? "0" : String(r);
}

export function linearScale(lo: number, hi: number, rangeLo: number, rangeHi: number): Scale {
  if (!(hi > lo)) hi = lo + 1;
  const f = ((value: number) =>
    rangeLo + ((value - lo) / (hi - lo)) * (rangeHi - rangeLo)) as Scale;
  const step = niceStep((hi - lo) / 5);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9; t += step) ticks.push(t);
  f.ticks = ticks;
  f.label = v => (Math.abs(v) >= 1000 || (v !== 0 && Math.abs(v) < 0.01) ? v.toExponential(1) : String(Math.round(v * 1000) / 1000));
  return f;
}

export function logScale(lo: number, hi: number, rangeLo: number, rangeHi: number): Scale {
  if (!(lo > 0)) throw new Error(`log scale needs positive bounds, got ${lo}`);
  if (!(hi > lo)) hi = lo * 10;
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const f = ((value: number) =>
    rangeLo + ((Math.log10(value) - llo) / (lhi - llo)) * (rangeHi - rangeLo)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e++) ticks.push(10 ** e);
  if (ticks.length < 2) {
    f.ticks = [lo, hi];
  } else {
    f.ticks = ticks;
  }
  f.label = v => {
    const e = Math.log10(v);
    return Number.isInteger(e) ? `1e${e}` : v.toPrecision(2);
  };
  return f;
}

function niceStep(raw: number): number {
  const mag = 10 ** Math.floor(Math.log10(raw));
  const unit = raw / mag;
  if (unit <= 1) return mag;
  if (unit <= 2) return 2 * mag;
  if (unit <= 5) return 5 * mag;
  return 10 * mag;
}

export function polyline(points: Array<[number, number]>, stroke: string, dash = ""): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline fill="none" stroke="${stroke}" stroke-width="1.5"${dashAttr} points="${pts}"/>`;
}

export function circle(x: number, y: number, r: number, fill: string): string {
  return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, dash = ""): string {
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="1"${dashAttr}/>`;
}

export function text(x: number, y: number, content: string, anchor = "middle", size = 11): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-family="sans-serif" font-size="${size}">${escapeXml(content)}</text>`;
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function axes(x: Scale, y: Scale, xLabel: string, yLabel: string): string {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(line(x0, y0, x1, y0, "#333"));
  parts.push(line(x0, y0, x0, y1, "#333"));
  for (const t of x.ticks) {
    const px = x(t);
    if (px < x0 - 0.5 || px > x1 + 0.5) continue;
    parts.push(line(px, y0, px, y0 + 4, "#333"));
    parts.push(text(px, y0 + 18, x.label(t)));
  }
  for (const t of y.ticks) {
    const py = y(t);
    if (py > y0 + 0.5 || py < y1 - 0.5) continue;
    parts.push(line(x0 - 4, py, x0, py, "#333"));
    parts.push(text(x0 - 8, py + 4, y.label(t), "end"));
  }
  parts.push(text((x0 + x1) / 2, HEIGHT - 12, xLabel));
  parts.push(`<g transform="rotate(-90 16 ${(y0 + y1) / 2})">${text(16, (y0 + y1) / 2, yLabel)}</g>`);
  return parts.join("\n");
}

export function document(title: string, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    text(WIDTH / 2, 20, title, "middle", 13),
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
