/** Command line: plotkit <kind> --in <csv...> --out <svg> [options]. */

import { existsSync, readFileSync, writeFileSync } from "node:fs";
import { renderConvergence } from "./convergence.js";
import { renderLine1d } from "./line1d.js";
import { renderContour2d } from "./contour2d.js";
import { renderRegion } from "./region.js";

export const KINDS = ["convergence", "line1d", "contour2d", "region"] as const;

const USAGE = `usage: plotkit <kind> --in <csv...> --out <svg> [options]

kinds: ${KINDS.join(", ")}

options:
  --in FILE...        input CSV file(s) from the solver
  --out FILE          output SVG path
  --labels L...       series labels (default: input file names)
  --title TEXT        plot title
  --norm l2|linf      convergence error norm (default l2)
  --orders K...       convergence slope-guide orders
  --var NAME          data column for line1d / contour2d
  --levels N          number of contour levels (default 30)
  --range LO:HI       contour level range (default data min:max)
  --preset dmr        contour2d: 30 levels on [1.4, 22.5], density column
  --cfl VALUE         region: mark the diagonal limit 2c
`;

interface Args {
  kind: string;
  inputs: string[];
  out: string | null;
  labels: string[];
  title: string | null;
  norm: "l2" | "linf";
  orders: number[];
  variable: string | null;
  levels: number;
  range: [number, number] | null;
  cfl: number | null;
}

class UsageError extends Error {}

function parseArgs(argv: string[]): Args {
  if (argv.length === 0 || argv[0] === "-h" || argv[0] === "--help") {
    throw new UsageError(USAGE);
  }
  const kind = argv[0];
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`unknown plot kind "${kind}" (expected one of: ${KINDS.join(", ")})`);
  }
  const args: Args = {
    kind, inputs: [], out: null, labels: [], title: null, norm: "l2",
    orders: [], variable: null, levels: 30, range: null, cfl: null,
  };
  let i = 1;
  const collect = (): string[] => {
    const vals: string[] = [];
    while (i < argv.length && !argv[i].startsWith("--")) {
      vals.push(argv[i]);
      i += 1;
    }
    if (vals.length === 0) throw new UsageError(`flag needs a value near position ${i}`);
    return vals;
  };
  while (i < argv.length) {
    const flag = argv[i];
    i += 1;
    switch (flag) {
      case "--in": args.inputs.push(...collect()); break;
      case "--out": args.out = collect()[0]; break;
      case "--labels": args.labels = collect(); break;
      case "--title": args.title = collect().join(" "); break;
      case "--norm": {
        const v = collect()[0];
        if (v !== "l2" && v !== "linf") throw new UsageError(`--norm must be l2 or linf, got "${v}"`);
        args.norm = v;
        break;
      }
      case "--orders": args.orders = collect().map(Number); break;
      case "--var": args.variable = collect()[0]; break;
      case "--levels": args.levels = Number(collect()[0]); break;
      case "--range": {
        const v = collect()[0];
        const m = v.split(":").map(Number);
        if (m.length !== 2 || m.some(Number.isNaN)) {
          throw new UsageError(`--range expects LO:HI, got "${v}"`);
        }
        args.range = [m[0], m[1]];
        break;
      }
      case "--preset": {
        const v = collect()[0];
        if (v !== "dmr") throw new UsageError(`unknown preset "${v}"`);
        args.levels = 30;
        args.range = [1.4, 22.5];
        args.variable = args.variable ?? "rho";
        break;
      }
      case "--cfl": args.cfl = Number(collect()[0]); break;
      default: throw new UsageError(`unknown flag "${flag}"\n${USAGE}`);
    }
  }
  if (args.inputs.length === 0) throw new UsageError("no input files (--in)");
  if (!args.out) throw new UsageError("no output path (--out)");
  if (args.orders.some(Number.isNaN) || Number.isNaN(args.levels)
      || (args.cfl !== null && Number.isNaN(args.cfl))) {
    throw new UsageError("non-numeric value for a numeric flag");
  }
  return args;
}

export function renderToString(args: Args): string {
  const inputs = args.inputs.map((p) => {
    if (!existsSync(p)) {
      throw new Error(`input file not found: ${p}`);
    }
    return { path: p, text: readFileSync(p, "utf-8") };
  });
  const title = args.title ?? `${args.kind} plot`;
  switch (args.kind) {
    case "convergence":
      return renderConvergence(inputs, {
        norm: args.norm, orders: args.orders, labels: args.labels, title,
      });
    case "line1d":
      return renderLine1d(inputs, {
        variable: args.variable, labels: args.labels, title,
      });
    case "contour2d":
      return renderContour2d(inputs, {
        variable: args.variable, levels: args.levels, range: args.range, title,
      });
    case "region":
      return renderRegion(inputs, { cfl: args.cfl, title });
    default:
      throw new Error(`unhandled kind ${args.kind}`);
  }
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    process.stderr.write(`${(e as Error).message}\n`);
    return 2;
  }
  try {
    const svg = renderToString(args);
    writeFileSync(args.out!, svg);
    process.stdout.write(`wrote ${args.out}\n`);
    return 0;
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 1;
  }
}
