/** Grouping sweep rows into drawable curves. */

import { PlotInputError, SweepRow } from "./csv.js";

export const FIGURE_IDS = ["fig2", "fig3", "fig4", "fig5"] as const;
export type FigureId = (typeof FIGURE_IDS)[number];

const X_LABELS: Record<string, string> = {
  l: "number of leaders l",
  n: "number of nodes n",
  k: "relative write speed k",
  r: "query size r",
};

export interface CurvePoint {
  x: number;
  analytic: number | null;
  sim: number | null;
  stderr: number | null;
}

export interface Curve {
  label: string;
  points: CurvePoint[];
}

export interface FigureData {
  title: string;
  xLabel: string;
  yLabel: string;
  curves: Curve[];
}

export function buildFigure(rows: SweepRow[], figureId: string): FigureData {
  const usable = rows.filter((row) => row.skipped === "");
  if (usable.length === 0) {
    throw new PlotInputError("empty data: no plottable rows (all skipped or none present)");
  }
  const vary = usable[0].vary;
  if (!(vary in X_LABELS)) {
    throw new PlotInputError(`unknown varied parameter: ${JSON.stringify(vary)}`);
  }
  if (!usable.every((row) => row.vary === vary)) {
    throw new PlotInputError("rows disagree on the varied parameter");
  }

  const curves = new Map<string, Curve>();
  for (const row of usable) {
    if (row.analytic_age === null && row.sim_age === null) {
      continue;
    }
    let curve = curves.get(row.curve);
    if (curve === undefined) {
      curve = { label: row.curve, points: [] };
      curves.set(row.curve, curve);
    }
    const x = vary === "k" ? row.k : row[vary as "n" | "l" | "r"];
    if (x === null || !Number.isFinite(x)) {
      throw new PlotInputError(`row with curve ${row.curve}: varied column ${vary} has no value`);
    }
    curve.points.push({
      x,
      analytic: row.analytic_age,
      sim: row.sim_age,
      stderr: row.sim_stderr,
    });
  }
  if (curves.size === 0) {
    throw new PlotInputError("empty data: rows carry neither analytic nor simulated ages");
  }
  return {
    title: `${figureId}: average read age vs ${X_LABELS[vary]}`,
    xLabel: X_LABELS[vary],
    yLabel: "average read age [time units]",
    curves: [...curves.values()],
  };
}
