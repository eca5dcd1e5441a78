/**
 * Parsers for the two CSV formats the estimation package emits:
 * benchmark metrics ("estimator,M,L,p,alpha,metric,value") and spectra
 * ("omega,psd" with '#' provenance comments).
 */

import fs from "node:fs";
import path from "node:path";

export interface MetricRow {
  estimator: string;
  M: number;
  L: number;
  p: number;
  alpha: number | null;
  metric: string;
  value: number;
}

export interface Spectrum {
  label: string;
  omega: number[];
  psd: number[];
}

export const METRICS_HEADER = "estimator,M,L,p,alpha,metric,value";

export function parseMetricsCsv(file: string): MetricRow[] {
  const lines = fs
    .readFileSync(file, "utf-8")
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`${file}: empty file`);
  }
  const header = lines[0].split(",").map((c) => c.trim());
  for (const col of METRICS_HEADER.split(",")) {
    if (!header.includes(col)) {
      throw new Error(`${file}: missing column '${col}'`);
    }
  }
  const at = (cells: string[], name: string) => cells[header.indexOf(name)];
  const rows: MetricRow[] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(`${file}: malformed row '${line}'`);
    }
    const alphaRaw = at(cells, "alpha");
    rows.push({
      estimator: at(cells, "estimator"),
      M: Number(at(cells, "M")),
      L: Number(at(cells, "L")),
      p: Number(at(cells, "p")),
      alpha: alphaRaw === "" ? null : Number(alphaRaw),
      metric: at(cells, "metric"),
      value: Number(at(cells, "value")),
    });
  }
  if (rows.length === 0) {
    throw new Error(`${file}: no data rows`);
  }
  return rows;
}

/** Read one spectrum file; the label comes from an 'estimator=...' comment
 * when present, the file stem otherwise. */
export function parseSpectrumCsv(file: string): Spectrum {
  const raw = fs.readFileSync(file, "utf-8").split("\n");
  let label = path.basename(file).replace(/\.[^.]*$/, "");
  const omega: number[] = [];
  const psd: number[] = [];
  let sawHeader = false;
  for (const rawLine of raw) {
    const line = rawLine.trim();
    if (line.length === 0) continue;
    if (line.startsWith("#")) {
      const m = line.match(/estimator=(\S+)/);
      if (m) label = m[1];
      continue;
    }
    if (!sawHeader) {
      const header = line.split(",").map((c) => c.trim());
      for (const col of ["omega", "psd"]) {
        if (!header.includes(col)) {
          throw new Error(`${file}: missing column '${col}'`);
        }
      }
      sawHeader = true;
      continue;
    }
    const cells = line.split(",");
    if (cells.length !== 2) {
      throw new Error(`${file}: malformed row '${line}'`);
    }
    omega.push(Number(cells[0]));
    psd.push(Number(cells[1]));
  }
  if (!sawHeader) {
    throw new Error(`${file}: missing column 'omega'`);
  }
  if (omega.length === 0) {
    throw new Error(`${file}: no data rows`);
  }
  return { label, omega, psd };
}
