/**
 * Minimal deterministic SVG scene building: linear/log scales, ticks, and
 * element helpers.  No timestamps, no randomness, fixed number formatting,
 * so identical inputs always produce identical markup bytes.
 */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  log: boolean;
}

export function makeScale(
  domain: [number, number],
  range: [number, number],
  log: boolean,
): Scale {
  let [d0, d1] = domain;
  if (log) {
    d0 = Math.log10(d0);
    d1 = Math.log10(d1);
  }
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const fn = ((v: number) => {
    const t = ((log ? Math.log10(v) : v) - d0) / span;
    return range[0] + t * (range[1] - range[0]);
  }) as Scale;
  fn.domain = domain;
  fn.log = log;
  return fn;
}

export function ticks(domain: [number, number], log: boolean): number[] {
  const [lo, hi] = domain;
  if (log) {
    const out: number[] = [];
    const first = Math.ceil(Math.log10(lo) - 1e-9);
    const last = Math.floor(Math.log10(hi) + 1e-9);
    for (let e = first; e <= last; e++) out.push(Math.pow(10, e));
    if (out.length === 0) out.push(lo, hi);
    return out;
  }
  if (lo === hi) return [lo];
  const rawStep = (hi - lo) / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(v);
  }
  return out;
}

/** Fixed-precision coordinate: enough digits to be stable, short enough to read. */
export function px(v: number): string {
  return v.toFixed(2);
}

export function tickLabel(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e5 || Math.abs(v) < 1e-3)) {
    return v.toExponential(1);
  }
  return Number(v.toPrecision(6)).toString();
}

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function polyline(
  pts: Array<[number, number]>,
  stroke: string,
  width: number,
): string {
  const d = pts.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
  return `<polyline points="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`;
}

export function polygon(pts: Array<[number, number]>, fill: string, opacity: number): string {
  const d = pts.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
  return `<polygon points="${d}" fill="${fill}" fill-opacity="${opacity}" stroke="none"/>`;
}

export function circle(x: number, y: number, r: number, fill: string, opacity: number): string {
  return `<circle cx="${px(x)}" cy="${px(y)}" r="${r}" fill="${fill}" fill-opacity="${opacity}"/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  anchor: "start" | "middle" | "end" = "start",
  size = 12,
): string {
  return (
    `<text x="${px(x)}" y="${px(y)}" text-anchor="${anchor}" ` +
    `font-family="monospace" font-size="${size}">${esc(content)}</text>`
  );
}
