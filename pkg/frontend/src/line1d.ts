/** 1-D solution overlay: one curve per input solution.csv, all sharing
 * the x axis; typically a numeric run against an exact/reference run. */

import { basename } from "node:path";
import { CsvError, column, parseCsv } from "./csv.js";
import {
  HEIGHT, MARGIN, PALETTE, WIDTH,
  document as svgDoc, frame, legend, linearScale, polyline,
} from "./svg.js";

export interface Line1dOptions {
  variable: string | null;   // null: first data column after x
  labels: string[];
  title: string;
}

export function renderLine1d(
  inputs: Array<{ path: string; text: string }>,
  opts: Line1dOptions,
): string {
  const series = inputs.map((inp, k) => {
    const table = parseCsv(inp.text, inp.path);
    if (table.header[0] !== "x") {
      throw new CsvError(`${inp.path}: expected first column "x", got "${table.header[0]}"`);
    }
    const variable = opts.variable ?? table.header[1];
    const xs = column(table, "x");
    const vs = column(table, variable);
    const pts = xs.map((x, i) => [x, vs[i]] as [number, number]);
    pts.sort((a, b) => a[0] - b[0]);
    return {
      label: opts.labels[k] ?? basename(inp.path).replace(/\.csv$/, ""),
      variable,
      pts,
    };
  });

  const xs = series.flatMap((s) => s.pts.map((p) => p[0]));
  const vs = series.flatMap((s) => s.pts.map((p) => p[1]));
  const vlo = Math.min(...vs);
  const vhi = Math.max(...vs);
  const pad = 0.06 * (vhi - vlo || 1);
  const x = linearScale(Math.min(...xs), Math.max(...xs),
                        MARGIN.left, WIDTH - MARGIN.right);
  const y = linearScale(vlo - pad, vhi + pad,
                        HEIGHT - MARGIN.bottom, MARGIN.top);
  const f = frame(x, y, {
    title: opts.title,
    xlabel: "x",
    ylabel: series[0].variable,
  });
  const body = [...f.body];
  const entries: Array<{ label: string; color: string }> = [];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    body.push(polyline(s.pts.map(([a, b]) => [x(a), y(b)]),
                       `stroke="${color}" stroke-width="1.5"`));
    entries.push({ label: s.label, color });
  });
  body.push(legend(entries, "tr"));
  return svgDoc(body);
}
