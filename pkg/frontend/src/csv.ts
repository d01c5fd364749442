/** Strict CSV reading for the solver's numeric tables. */

export interface Table {
  path: string;
  header: string[];
  rows: number[][];
}

export class CsvError extends Error {}

/** Parse a comma-separated numeric table; report bad lines by number. */
export function parseCsv(text: string, path: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length < 2) {
    throw new CsvError(`${path}: expected a header line and at least one data row`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== header.length) {
      throw new CsvError(
        `${path}: line ${i + 1}: expected ${header.length} fields, got ${fields.length}`,
      );
    }
    const row = fields.map((f, j) => {
      const v = Number(f);
      if (f.trim() === "" || Number.isNaN(v)) {
        // the errors table carries "nan" EOC entries on the coarsest grid
        if (f.trim().toLowerCase() === "nan") return NaN;
        throw new CsvError(
          `${path}: line ${i + 1}: field "${header[j]}" is not a number: "${f}"`,
        );
      }
      return v;
    });
    rows.push(row);
  }
  return { path, header, rows };
}

export function column(table: Table, name: string): number[] {
  const j = table.header.indexOf(name);
  if (j < 0) {
    throw new CsvError(
      `${table.path}: no column "${name}" (have: ${table.header.join(", ")})`,
    );
  }
  return table.rows.map((r) => r[j]);
}

/** The errors table interleaves variables; split it into per-variable series. */
export function splitByVariableText(
  text: string,
  path: string,
): Map<string, { grid: number[]; l2: number[]; linf: number[] }> {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length < 2) {
    throw new CsvError(`${path}: expected a header line and at least one data row`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const need = ["grid", "variable", "l2", "linf"];
  for (const n of need) {
    if (!header.includes(n)) {
      throw new CsvError(`${path}: missing column "${n}"`);
    }
  }
  const idx = Object.fromEntries(need.map((n) => [n, header.indexOf(n)]));
  const out = new Map<string, { grid: number[]; l2: number[]; linf: number[] }>();
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== header.length) {
      throw new CsvError(
        `${path}: line ${i + 1}: expected ${header.length} fields, got ${fields.length}`,
      );
    }
    const name = fields[idx.variable].trim();
    const grid = Number(fields[idx.grid]);
    const l2 = Number(fields[idx.l2]);
    const linf = Number(fields[idx.linf]);
    if (!Number.isFinite(grid) || !Number.isFinite(l2) || !Number.isFinite(linf)) {
      throw new CsvError(`${path}: line ${i + 1}: non-numeric grid or error entry`);
    }
    if (!out.has(name)) out.set(name, { grid: [], l2: [], linf: [] });
    const s = out.get(name)!;
    s.grid.push(grid);
    s.l2.push(l2);
    s.linf.push(linf);
  }
  return out;
}
