#!/usr/bin/env node
/**
 * Render debwelch CSV output into an SVG figure.
 *
 * Usage:
 *   debwelch-plots <csv...> --kind metrics_vs_M|imse_vs_alpha|spectra_overlay \
 *       --out figure.svg [--log-x on|off] [--log-y on|off]
 *
 * metrics_vs_M and imse_vs_alpha take one benchmark metrics CSV;
 * spectra_overlay takes one or more "omega,psd" spectrum CSVs.
 */

import fs from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { parseMetricsCsv, parseSpectrumCsv } from "./csv.js";
import { AxisFlags, FigureKind, imseVsAlpha, metricsVsM, spectraOverlay } from "./figures.js";

interface Cli {
  inputs: string[];
  kind: FigureKind;
  out: string;
  flags: AxisFlags;
}

const KINDS: FigureKind[] = ["metrics_vs_M", "imse_vs_alpha", "spectra_overlay"];

export function parseArgs(argv: string[]): Cli {
  const inputs: string[] = [];
  let kind: string | undefined;
  let out: string | undefined;
  const flags: AxisFlags = {};
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new Error(`${arg} needs a value`);
      return argv[++i];
    };
    if (arg === "--kind") kind = next();
    else if (arg === "--out") out = next();
    else if (arg === "--log-x") flags.logX = next() !== "off";
    else if (arg === "--log-y") flags.logY = next() !== "off";
    else if (arg.startsWith("--")) throw new Error(`unknown flag ${arg}`);
    else inputs.push(arg);
  }
  if (!kind || !KINDS.includes(kind as FigureKind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  if (!out) throw new Error("--out is required");
  if (inputs.length === 0) throw new Error("at least one input CSV is required");
  return { inputs, kind: kind as FigureKind, out, flags };
}

export function render(cli: Cli): string {
  if (cli.kind === "spectra_overlay") {
    return spectraOverlay(cli.inputs.map(parseSpectrumCsv), cli.flags);
  }
  if (cli.inputs.length !== 1) {
    throw new Error(`${cli.kind} takes exactly one metrics CSV`);
  }
  const rows = parseMetricsCsv(cli.inputs[0]);
  return cli.kind === "metrics_vs_M" ? metricsVsM(rows, cli.flags) : imseVsAlpha(rows, cli.flags);
}

export function main(argv: string[]): number {
  try {
    const cli = parseArgs(argv);
    fs.writeFileSync(cli.out, render(cli));
    console.log(`wrote ${cli.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  path.resolve(fileURLToPath(import.meta.url)) === path.resolve(process.argv[1]);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
