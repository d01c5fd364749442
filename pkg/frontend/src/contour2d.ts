/** 2-D contour plot from a scattered x,y,... solution table sampled on a
 * tensor-product grid of solution points.  Marching squares with linear
 * interpolation; one <g> element per contour level. */

import { CsvError, column, parseCsv } from "./csv.js";
import {
  HEIGHT, MARGIN, WIDTH,
  document as svgDoc, frame, linearScale,
} from "./svg.js";

export interface Contour2dOptions {
  variable: string | null;   // null: first data column after x,y
  levels: number;
  range: [number, number] | null;   // null: data min/max
  title: string;
}

export interface GridField {
  xs: number[];
  ys: number[];
  values: number[][];   // [iy][ix]
  variable: string;
}

function uniqueSorted(v: number[]): number[] {
  return [...new Set(v)].sort((a, b) => a - b);
}

/** Reassemble the scattered rows into a structured grid. */
export function gridFromTable(text: string, path: string,
                              variable: string | null): GridField {
  const table = parseCsv(text, path);
  if (table.header[0] !== "x" || table.header[1] !== "y") {
    throw new CsvError(`${path}: expected leading columns "x,y", got "${table.header.slice(0, 2)}"`);
  }
  const name = variable ?? table.header[2];
  const xcol = column(table, "x");
  const ycol = column(table, "y");
  const vcol = column(table, name);
  const xs = uniqueSorted(xcol);
  const ys = uniqueSorted(ycol);
  if (xs.length * ys.length !== table.rows.length) {
    throw new CsvError(
      `${path}: ${table.rows.length} rows do not fill a ${xs.length} x ${ys.length} grid`,
    );
  }
  const xi = new Map(xs.map((v, i) => [v, i]));
  const yi = new Map(ys.map((v, i) => [v, i]));
  const values: number[][] = ys.map(() => new Array(xs.length).fill(NaN));
  for (let r = 0; r < xcol.length; r++) {
    values[yi.get(ycol[r])!][xi.get(xcol[r])!] = vcol[r];
  }
  return { xs, ys, values, variable: name };
}

/** Evenly spaced levels including both endpoints. */
export function contourLevels(lo: number, hi: number, n: number): number[] {
  if (n < 1) throw new Error(`need at least one contour level, got ${n}`);
  if (n === 1) return [0.5 * (lo + hi)];
  const out: number[] = [];
  for (let i = 0; i < n; i++) {
    out.push(lo + (i * (hi - lo)) / (n - 1));
  }
  return out;
}

type Segment = [[number, number], [number, number]];

/** Marching-squares segments for one iso-level, in data coordinates. */
export function isoSegments(field: GridField, level: number): Segment[] {
  const { xs, ys, values } = field;
  const segs: Segment[] = [];
  const lerp = (a: number, b: number, va: number, vb: number) =>
    a + ((level - va) / (vb - va)) * (b - a);
  for (let j = 0; j < ys.length - 1; j++) {
    for (let i = 0; i < xs.length - 1; i++) {
      const v00 = values[j][i];
      const v10 = values[j][i + 1];
      const v01 = values[j + 1][i];
      const v11 = values[j + 1][i + 1];
      const idx = (v00 > level ? 1 : 0) | (v10 > level ? 2 : 0) |
                  (v11 > level ? 4 : 0) | (v01 > level ? 8 : 0);
      if (idx === 0 || idx === 15) continue;
      // crossing points on the four cell edges
      const bottom = (): [number, number] =>
        [lerp(xs[i], xs[i + 1], v00, v10), ys[j]];
      const top = (): [number, number] =>
        [lerp(xs[i], xs[i + 1], v01, v11), ys[j + 1]];
      const left = (): [number, number] =>
        [xs[i], lerp(ys[j], ys[j + 1], v00, v01)];
      const right = (): [number, number] =>
        [xs[i + 1], lerp(ys[j], ys[j + 1], v10, v11)];
      switch (idx) {
        case 1: case 14: segs.push([left(), bottom()]); break;
        case 2: case 13: segs.push([bottom(), right()]); break;
        case 3: case 12: segs.push([left(), right()]); break;
        case 4: case 11: segs.push([right(), top()]); break;
        case 6: case 9: segs.push([bottom(), top()]); break;
        case 7: case 8: segs.push([left(), top()]); break;
        case 5:   // saddle: resolve by the cell-centre average
        case 10: {
          const mid = 0.25 * (v00 + v10 + v01 + v11);
          const flip = (mid > level) === (idx === 5);
          if (flip) {
            segs.push([left(), bottom()]);
            segs.push([right(), top()]);
          } else {
            segs.push([left(), top()]);
            segs.push([bottom(), right()]);
          }
          break;
        }
      }
    }
  }
  return segs;
}

export function renderContour2d(
  inputs: Array<{ path: string; text: string }>,
  opts: Contour2dOptions,
): string {
  if (inputs.length !== 1) {
    throw new Error(`contour2d takes exactly one input file, got ${inputs.length}`);
  }
  const field = gridFromTable(inputs[0].text, inputs[0].path, opts.variable);
  const flat = field.values.flat();
  const lo = opts.range ? opts.range[0] : Math.min(...flat);
  const hi = opts.range ? opts.range[1] : Math.max(...flat);
  const levels = contourLevels(lo, hi, opts.levels);

  const x = linearScale(field.xs[0], field.xs[field.xs.length - 1],
                        MARGIN.left, WIDTH - MARGIN.right);
  const y = linearScale(field.ys[0], field.ys[field.ys.length - 1],
                        HEIGHT - MARGIN.bottom, MARGIN.top);
  const f = frame(x, y, { title: opts.title, xlabel: "x", ylabel: "y" });
  const body = [...f.body];
  for (const level of levels) {
    const segs = isoSegments(field, level);
    const d = segs
      .map(([[ax, ay], [bx, by]]) =>
        `M${x(ax).toFixed(2)},${y(ay).toFixed(2)} L${x(bx).toFixed(2)},${y(by).toFixed(2)}`)
      .join(" ");
    body.push(
      `<g class="contour-level" data-level="${level.toPrecision(8)}">` +
      (d ? `<path d="${d}" fill="none" stroke="#1f3a93" stroke-width="0.8"/>` : "") +
      `</g>`,
    );
  }
  body.push(
    `<text x="${WIDTH - MARGIN.right}" y="${HEIGHT - 12}" text-anchor="end" ` +
    `font-size="11" font-family="Helvetica, Arial, sans-serif">` +
    `${field.variable}: ${opts.levels} levels on [${lo}, ${hi}]</text>`,
  );
  return svgDoc(body);
}
