/**
 * The three figure kinds built from benchmark/spectrum CSVs:
 *
 *   metrics_vs_M    2x2 log-log panels (bias, SD, RMSE, time) over the
 *                   segment count, with a dot-dashed M^{-1/2} reference
 *   imse_vs_alpha   integrated MSE against the segment-length exponent
 *   spectra_overlay one log-power panel overlaying spectrum files
 */

import { MetricRow, Spectrum } from "./csv.js";
import { PanelSpec, Series, renderPanels } from "./svg.js";

export type FigureKind = "metrics_vs_M" | "imse_vs_alpha" | "spectra_overlay";

export interface AxisFlags {
  logX?: boolean;
  logY?: boolean;
}

// estimator styling: debiased solid, welch dashed; p=0 black, p=0.5 grey
function lineStyle(estimator: string, p: number): { color: string; dash?: string } {
  const color = p > 0 ? "#888888" : "#111111";
  if (estimator.startsWith("welch")) return { color, dash: "6,4" };
  if (estimator === "debiased_log") return { color: p > 0 ? "#7aa6c2" : "#1f77b4" };
  return { color };
}

const METRIC_PANELS: { metric: string; title: string }[] = [
  { metric: "mean_log_abs_bias", title: "absolute bias" },
  { metric: "mean_log_sd", title: "standard deviation" },
  { metric: "mean_log_rmse", title: "rmse" },
  { metric: "wall_time_s", title: "computation time" },
];

function groupKeys(rows: MetricRow[]): { estimator: string; p: number }[] {
  const seen = new Map<string, { estimator: string; p: number }>();
  for (const r of rows) {
    seen.set(`${r.estimator}|${r.p}`, { estimator: r.estimator, p: r.p });
  }
  return [...seen.values()].sort((a, b) =>
    a.estimator === b.estimator ? a.p - b.p : a.estimator.localeCompare(b.estimator)
  );
}

/** Fig-2-style four-panel metrics figure over M. The mean-log metrics are
 * exponentiated back to natural scale so the log axes act on values. */
export function metricsVsM(rows: MetricRow[], flags: AxisFlags = {}): string {
  if (!rows.some((r) => METRIC_PANELS.some((p) => p.metric === r.metric))) {
    throw new Error("missing column 'metric' values for the metrics figure");
  }
  const logX = flags.logX ?? true;
  const logY = flags.logY ?? true;
  const panels: PanelSpec[] = [];
  for (const { metric, title } of METRIC_PANELS) {
    const sub = rows.filter((r) => r.metric === metric);
    const series: Series[] = [];
    for (const key of groupKeys(sub)) {
      const pts = sub
        .filter((r) => r.estimator === key.estimator && r.p === key.p)
        .sort((a, b) => a.M - b.M);
      if (pts.length === 0) continue;
      const natural = metric.startsWith("mean_log_");
      series.push({
        x: pts.map((r) => r.M),
        y: pts.map((r) => (natural ? Math.exp(r.value) : r.value)),
        label: `${key.estimator} p=${key.p}`,
        ...lineStyle(key.estimator, key.p),
        width: 1.6,
      });
    }
    if (metric === "mean_log_sd" && series.length > 0) {
      // dot-dashed M^{-1/2} reference anchored at the first series point
      const ref = series[0];
      const x = ref.x;
      const y0 = ref.y[0] * Math.sqrt(x[0]);
      series.push({
        x,
        y: x.map((m) => y0 / Math.sqrt(m)),
        label: "M^-1/2",
        color: "#000000",
        dash: "8,3,2,3",
        width: 1.1,
      });
    }
    panels.push({
      title,
      xLabel: "M (segments)",
      yLabel: metric === "wall_time_s" ? "seconds" : "mean-log level",
      logX,
      logY,
      series,
    });
  }
  return renderPanels(panels, 2);
}

/** Fig-3-style IMSE panel over alpha (L = n^alpha). */
export function imseVsAlpha(rows: MetricRow[], flags: AxisFlags = {}): string {
  const sub = rows.filter((r) => r.metric === "imse" && r.alpha !== null);
  if (sub.length === 0) {
    throw new Error("missing column 'alpha' or no imse rows for the IMSE figure");
  }
  const series: Series[] = [];
  for (const key of groupKeys(sub)) {
    const pts = sub
      .filter((r) => r.estimator === key.estimator && r.p === key.p)
      .sort((a, b) => (a.alpha as number) - (b.alpha as number));
    series.push({
      x: pts.map((r) => r.alpha as number),
      y: pts.map((r) => r.value),
      label: key.estimator,
      ...lineStyle(key.estimator, key.p),
      width: 1.6,
    });
  }
  const panel: PanelSpec = {
    title: "integrated mean squared error",
    xLabel: "alpha (L = n^alpha)",
    yLabel: "IMSE",
    logX: flags.logX ?? false,
    logY: flags.logY ??true,
    series,
  };
  return renderPanels([panel], 1);
}

const OVERLAY_COLORS = ["#999999", "#111111", "#1f77b4", "#d62728", "#2ca02c"];

/** Fig-1-style overlay of spectrum files on one log-power panel. */
export function spectraOverlay(spectra: Spectrum[], flags: AxisFlags = {}): string {
  if (spectra.length === 0) {
    throw new Error("no data rows: at least one spectrum file is required");
  }
  const series: Series[] = spectra.map((s, i) => ({
    x: s.omega,
    y: s.psd,
    label: s.label,
    color: OVERLAY_COLORS[i % OVERLAY_COLORS.length],
    width: i === 0 ? 1.2 : 1.6,
    dash: s.label.includes("true") ? "5,4" : undefined,
  }));
  const panel: PanelSpec = {
    title: "power spectral density",
    xLabel: "omega (rad/s)",
    yLabel: "psd",
    logX: flags.logX ?? false,
    logY: flags.logY ?? true,
    series,
  };
  return renderPanels([panel], 1);
}
