#!/usr/bin/env node
/**
 * plot --csv PATH --kind KIND --out PATH [--group-by COL]
 *
 * Renders a sweep CSV into an SVG figure. Exit codes: 0 success,
 * 1 argument error, 2 I/O or data error.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { CsvError, parseSweepCsv } from "./csv.js";
import { FigureKind, PlotError, renderFigure } from "./plot.js";

const KINDS: FigureKind[] = ["ber_vs_snr", "sync_error_bars", "ber_by_modulation"];

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        csv: { type: "string" },
        kind: { type: "string" },
        out: { type: "string" },
        "group-by": { type: "string" },
      },
    });
  } catch (err) {
    console.error(`argument error: ${(err as Error).message}`);
    return 1;
  }
  const { csv, kind, out } = args.values;
  const groupBy = args.values["group-by"];
  if (!csv || !kind || !out) {
    console.error("usage: plot --csv PATH --kind KIND --out PATH [--group-by COL]");
    return 1;
  }
  if (!KINDS.includes(kind as FigureKind)) {
    console.error(`argument error: kind must be one of ${KINDS.join(", ")}`);
    return 1;
  }
  let text: string;
  try {
    text = readFileSync(csv, "utf-8");
  } catch (err) {
    console.error(`I/O error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const rows = parseSweepCsv(text);
    const svg = renderFigure(rows, { kind: kind as FigureKind, groupBy });
    writeFileSync(out, svg);
  } catch (err) {
    if (err instanceof CsvError || err instanceof PlotError) {
      console.error(`data error: ${err.message}`);
      return 2;
    }
    console.error(`I/O error: ${(err as Error).message}`);
    return 2;
  }
  console.log(`wrote ${out}`);
  return 0;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === resolve(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
