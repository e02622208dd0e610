#!/usr/bin/env node
/** plots <figure-id> --in <csv> --out <file> [--format svg|png] */

import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { parseSweepCsv, PlotInputError } from "./csv.js";
import { buildFigure, FIGURE_IDS } from "./figure.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";

const argv = yargs(hideBin(process.argv))
  .command("$0 <figure>", "render a figure from a sweep CSV", (cmd) =>
    cmd.positional("figure", {
      describe: "figure id",
      choices: FIGURE_IDS,
      type: "string",
      demandOption: true,
    }),
  )
  .option("in", { type: "string", demandOption: true, describe: "input CSV path" })
  .option("out", { type: "string", demandOption: true, describe: "output image path" })
  .option("format", { choices: ["svg", "png"] as const, default: "svg" as const })
  .strict()
  .parseSync();

try {
  const text = readFileSync(argv.in, "utf-8");
  const figure = buildFigure(parseSweepCsv(text), argv.figure as string);
  const svg = renderSvg(figure);
  if (argv.format === "png") {
    writeFileSync(argv.out, renderPng(svg));
  } else {
    writeFileSync(argv.out, svg, "utf-8");
  }
  console.log(`wrote ${argv.out} (${figure.curves.length} curves)`);
} catch (error) {
  if (error instanceof PlotInputError) {
    console.error(`error: ${error.message}`);
  } else if (error instanceof Error && "code" in error) {
    console.error(`error: ${error.message}`);
  } else {
    throw error;
  }
  process.exit(1);
}
