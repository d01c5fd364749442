/** Minimal deterministic SVG scaffolding shared by all plot kinds. */

export const WIDTH = 640;
export const HEIGHT = 480;
export const MARGIN = { left: 70, right: 20, top: 40, bottom: 55 };
export const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

export interface Scale {
  (v: number): number;
  ticks(): number[];
  domain: [number, number];
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function niceStep(span: number): number {
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

export function linearScale(lo: number, hi: number, rlo: number, rhi: number): Scale {
  if (hi === lo) {
    hi = lo + 1;
  }
  const f = ((v: number) => rlo + ((v - lo) / (hi - lo)) * (rhi - rlo)) as Scale;
  f.domain = [lo, hi];
  f.ticks = () => {
    const step = niceStep(hi - lo);
    const out: number[] = [];
    for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step) {
      out.push(Math.abs(t) < 1e-12 * step ? 0 : t);
    }
    return out;
  };
  return f;
}

export function logScale(lo: number, hi: number, rlo: number, rhi: number): Scale {
  if (lo <= 0 || hi <= 0) {
    throw new Error(`log scale needs positive bounds, got [${lo}, ${hi}]`);
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const f = ((v: number) =>
    rlo + ((Math.log10(v) - llo) / (lhi - llo || 1)) * (rhi - rlo)) as Scale;
  f.domain = [lo, hi];
  f.ticks = () => {
    const out: number[] = [];
    for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e++) {
      out.push(Math.pow(10, e));
    }
    // fall back to endpoint ticks when the range spans less than a decade
    return out.length >= 2 ? out : [lo, hi];
  };
  return f;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(Number(v.toPrecision(4)));
  }
  return v.toExponential(0).replace("e", "e");
}

export function polyline(
  pts: Array<[number, number]>,
  attrs: string,
): string {
  const d = pts
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`)
    .join(" ");
  return `<path d="${d}" fill="none" ${attrs}/>`;
}

export interface Frame {
  x: Scale;
  y: Scale;
  body: string[];
}

/** Axes, tick marks, labels, and title around the plot area. */
export function frame(
  x: Scale,
  y: Scale,
  opts: { title: string; xlabel: string; ylabel: string },
): Frame {
  const b: string[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  b.push(`<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333" stroke-width="1"/>`);
  for (const t of x.ticks()) {
    const px = x(t);
    b.push(`<line x1="${px.toFixed(2)}" y1="${y0}" x2="${px.toFixed(2)}" y2="${y0 + 5}" stroke="#333"/>`);
    b.push(`<line x1="${px.toFixed(2)}" y1="${y1}" x2="${px.toFixed(2)}" y2="${y0}" stroke="#ddd" stroke-width="0.5"/>`);
    b.push(`<text x="${px.toFixed(2)}" y="${y0 + 18}" text-anchor="middle" font-size="11" ${FONT}>${fmtTick(t)}</text>`);
  }
  for (const t of y.ticks()) {
    const py = y(t);
    b.push(`<line x1="${x0 - 5}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="#333"/>`);
    b.push(`<line x1="${x0}" y1="${py.toFixed(2)}" x2="${x1}" y2="${py.toFixed(2)}" stroke="#ddd" stroke-width="0.5"/>`);
    b.push(`<text x="${x0 - 8}" y="${(py + 4).toFixed(2)}" text-anchor="end" font-size="11" ${FONT}>${fmtTick(t)}</text>`);
  }
  b.push(`<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13" ${FONT}>${escapeXml(opts.xlabel)}</text>`);
  b.push(`<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" ${FONT} transform="rotate(-90 18 ${(y0 + y1) / 2})">${escapeXml(opts.ylabel)}</text>`);
  b.push(`<text x="${(x0 + x1) / 2}" y="24" text-anchor="middle" font-size="15" ${FONT}>${escapeXml(opts.title)}</text>`);
  return { x, y, body: b };
}

export function legend(
  entries: Array<{ label: string; color: string; dash?: string }>,
  anchor: "tr" | "br" = "tr",
): string {
  const w = 14;
  const lineH = 16;
  const x0 = WIDTH - MARGIN.right - 210;
  const y0 = anchor === "tr"
    ? MARGIN.top + 12
    : HEIGHT - MARGIN.bottom - 12 - entries.length * lineH;
  const parts: string[] = [`<g class="legend">`];
  entries.forEach((e, i) => {
    const y = y0 + i * lineH;
    const dash = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
    parts.push(`<line x1="${x0}" y1="${y}" x2="${x0 + w}" y2="${y}" stroke="${e.color}" stroke-width="2"${dash}/>`);
    parts.push(`<text x="${x0 + w + 6}" y="${y + 4}" font-size="11" ${FONT}>${escapeXml(e.label)}</text>`);
  });
  parts.push("</g>");
  return parts.join("\n");
}

export function document(body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
