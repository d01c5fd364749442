/** Stability-region plot from a sigma1,sigma2,stable scan table: filled
 * cells for the stable set, with a marker on the diagonal CFL limit. */

import { CsvError, column, parseCsv } from "./csv.js";
import {
  HEIGHT, MARGIN, WIDTH,
  document as svgDoc, frame, legend, linearScale,
} from "./svg.js";

export interface RegionOptions {
  cfl: number | null;   // diagonal limit 2c; marker drawn at (c, c)
  title: string;
}

export function renderRegion(
  inputs: Array<{ path: string; text: string }>,
  opts: RegionOptions,
): string {
  if (inputs.length !== 1) {
    throw new Error(`region takes exactly one input file, got ${inputs.length}`);
  }
  const table = parseCsv(inputs[0].text, inputs[0].path);
  for (const need of ["sigma1", "sigma2", "stable"]) {
    if (!table.header.includes(need)) {
      throw new CsvError(`${inputs[0].path}: missing column "${need}"`);
    }
  }
  const s1 = column(table, "sigma1");
  const s2 = column(table, "sigma2");
  const ok = column(table, "stable");
  const xs = [...new Set(s1)].sort((a, b) => a - b);
  const ys = [...new Set(s2)].sort((a, b) => a - b);
  const dx = xs.length > 1 ? xs[1] - xs[0] : 0.01;
  const dy = ys.length > 1 ? ys[1] - ys[0] : 0.01;

  const x = linearScale(0, xs[xs.length - 1] + dx, MARGIN.left, WIDTH - MARGIN.right);
  const y = linearScale(0, ys[ys.length - 1] + dy, HEIGHT - MARGIN.bottom, MARGIN.top);
  const f = frame(x, y, {
    title: opts.title,
    xlabel: "sigma_x",
    ylabel: "sigma_y",
  });
  const body = [...f.body];
  const w = Math.abs(x(dx) - x(0));
  const h = Math.abs(y(dy) - y(0));
  for (let r = 0; r < s1.length; r++) {
    if (ok[r] !== 1) continue;
    body.push(
      `<rect class="stable-cell" x="${x(s1[r]).toFixed(2)}" ` +
      `y="${(y(s2[r]) - h).toFixed(2)}" width="${w.toFixed(2)}" ` +
      `height="${h.toFixed(2)}" fill="#7fb3d5" stroke="none"/>`,
    );
  }
  const entries = [{ label: "stable", color: "#7fb3d5" }];
  if (opts.cfl !== null) {
    const c = 0.5 * opts.cfl;
    body.push(
      `<circle class="cfl-marker" cx="${x(c).toFixed(2)}" cy="${y(c).toFixed(2)}" ` +
      `r="4" fill="#d62728"/>`,
    );
    entries.push({ label: `diagonal limit 2c = ${opts.cfl}`, color: "#d62728" });
  }
  body.push(legend(entries, "tr"));
  return svgDoc(body);
}
