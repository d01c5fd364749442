/** Log-log convergence plot: error vs cell size with fitted slopes and
 * O(h^k) guide lines, from one or more errors.csv tables. */

import { basename } from "node:path";
import { splitByVariableText } from "./csv.js";
import {
  HEIGHT, MARGIN, PALETTE, WIDTH,
  document as svgDoc, frame, legend, logScale, polyline,
} from "./svg.js";

export interface ConvergenceOptions {
  norm: "l2" | "linf";
  orders: number[];
  labels: string[];
  title: string;
}

export interface FittedSeries {
  label: string;
  h: number[];
  err: number[];
  slope: number;
}

/** Least-squares slope of log(err) against log(h). */
export function fitSlope(h: number[], err: number[]): number {
  const xs = h.map(Math.log);
  const ys = err.map(Math.log);
  const n = xs.length;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

export function collectSeries(
  inputs: Array<{ path: string; text: string }>,
  opts: ConvergenceOptions,
): FittedSeries[] {
  const out: FittedSeries[] = [];
  inputs.forEach((inp, k) => {
    const perVar = splitByVariableText(inp.text, inp.path);
    const fileLabel = opts.labels[k] ?? basename(inp.path).replace(/\.csv$/, "");
    for (const [variable, s] of perVar) {
      if (s.grid.length < 2) {
        throw new Error(`${inp.path}: variable "${variable}" has fewer than 2 grids`);
      }
      const h = s.grid.map((g) => 1.0 / g);
      const err = opts.norm === "l2" ? s.l2 : s.linf;
      const label = perVar.size > 1 ? `${fileLabel}:${variable}` : fileLabel;
      out.push({ label, h, err, slope: fitSlope(h, err) });
    }
  });
  return out;
}

export function renderConvergence(
  inputs: Array<{ path: string; text: string }>,
  opts: ConvergenceOptions,
): string {
  const series = collectSeries(inputs, opts);
  const hs = series.flatMap((s) => s.h);
  const es = series.flatMap((s) => s.err).filter((e) => e > 0);
  const x = logScale(Math.min(...hs) / 1.2, Math.max(...hs) * 1.2,
                     MARGIN.left, WIDTH - MARGIN.right);
  const y = logScale(Math.min(...es) / 3, Math.max(...es) * 3,
                     HEIGHT - MARGIN.bottom, MARGIN.top);
  const f = frame(x, y, {
    title: opts.title,
    xlabel: "h (cell size)",
    ylabel: `${opts.norm === "l2" ? "L2" : "Linf"} error`,
  });
  const body = [...f.body];
  const entries: Array<{ label: string; color: string; dash?: string }> = [];

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = s.h.map((h, j) => [x(h), y(s.err[j])] as [number, number]);
    body.push(polyline(pts, `stroke="${color}" stroke-width="1.5"`));
    for (const [px, py] of pts) {
      body.push(`<circle cx="${px.toFixed(2)}" cy="${py.toFixed(2)}" r="3" fill="${color}"/>`);
    }
    entries.push({ label: `${s.label} (slope ${s.slope.toFixed(2)})`, color });
  });

  // dashed O(h^k) guides anchored at the finest-grid point of the first series
  const anchor = series[0];
  const hGuide = [Math.min(...anchor.h), Math.max(...anchor.h)];
  const eFine = anchor.err[anchor.h.indexOf(hGuide[0])];
  for (const k of opts.orders) {
    const pts = hGuide.map((h) =>
      [x(h), y(eFine * Math.pow(h / hGuide[0], k))] as [number, number]);
    body.push(polyline(pts, `stroke="#555" stroke-width="1" stroke-dasharray="5,4"`));
    entries.push({ label: `O(h^${k})`, color: "#555", dash: "5,4" });
  }

  body.push(legend(entries, "br"));
  return svgDoc(body);
}
