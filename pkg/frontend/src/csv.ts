/** Parsing and validation of the sweep CSV schema. */

export const REQUIRED_COLUMNS = [
  "curve",
  "vary",
  "n",
  "l",
  "r",
  "k",
  "lambda",
  "c",
  "mode",
  "analytic_age",
  "sim_age",
  "sim_stderr",
  "skipped",
] as const;

export class PlotInputError extends Error {}

export interface SweepRow {
  curve: string;
  vary: string;
  n: number;
  l: number;
  r: number;
  k: number | null;
  analytic_age: number | null;
  sim_age: number | null;
  sim_stderr: number | null;
  skipped: string;
}

function toNumber(field: string, raw: string, line: number): number {
  const value = Number(raw);
  if (raw === "" || !Number.isFinite(value)) {
    throw new PlotInputError(`line ${line}: column ${field} is not a number: ${JSON.stringify(raw)}`);
  }
  return value;
}

function toOptionalNumber(field: string, raw: string, line: number): number | null {
  return raw === "" ? null : toNumber(field, raw, line);
}

/** Parse the CSV text; malformed input raises PlotInputError. */
export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new PlotInputError("empty input: no header line");
  }
  const header = lines[0].split(",");
  const index = new Map(header.map((name, i) => [name, i]));
  const missing = REQUIRED_COLUMNS.filter((name) => !index.has(name));
  if (missing.length > 0) {
    throw new PlotInputError(`missing columns: ${missing.join(", ")}`);
  }

  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new PlotInputError(`line ${i + 1}: expected ${header.length} fields, got ${parts.length}`);
    }
    const cell = (name: string) => parts[index.get(name)!];
    const skipped = cell("skipped");
    const row: SweepRow = {
      curve: cell("curve"),
      vary: cell("vary"),
      n: NaN,
      l: NaN,
      r: NaN,
      k: null,
      analytic_age: null,
      sim_age: null,
      sim_stderr: null,
      skipped,
    };
    if (skipped === "") {
      row.n = toNumber("n", cell("n"), i + 1);
      row.l = toNumber("l", cell("l"), i + 1);
      row.r = toNumber("r", cell("r"), i + 1);
      row.k = toOptionalNumber("k", cell("k"), i + 1);
      row.analytic_age = toOptionalNumber("analytic_age", cell("analytic_age"), i + 1);
      row.sim_age = toOptionalNumber("sim_age", cell("sim_age"), i + 1);
      row.sim_stderr = toOptionalNumber("sim_stderr", cell("sim_stderr"), i + 1);
    }
    rows.push(row);
  }
  return rows;
}
