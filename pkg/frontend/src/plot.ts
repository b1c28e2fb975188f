/**
 * Deterministic SVG figure rendering for sweep results.
 *
 * Three figure kinds mirror the reference layouts:
 *   ber_vs_snr       - one BER line per overclock factor, log-scaled BER axis
 *   ber_by_modulation- per-scheme BER lines at the lowest and highest G
 *   sync_error_bars  - grouped bars of mean |sync error| with +-1 std whiskers
 *
 * Values are never transformed beyond axis scaling; every marker carries the
 * original CSV cell text in data-x/data-y attributes.
 */

import { SweepRow } from "./csv.js";

export type FigureKind = "ber_vs_snr" | "sync_error_bars" | "ber_by_modulation";

export interface PlotSpec {
  kind: FigureKind;
  groupBy?: string;
  logY?: boolean;
}

export interface Point {
  x: number;
  y: number;
  rawX: string;
  rawY: string;
  whisker?: number; // half-length of the error bar, data units
  rawWhisker?: string;
}

export interface Series {
  label: string;
  points: Point[];
}

export class PlotError extends Error {}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 84, right: 24, top: 28, bottom: 56 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function groupKey(row: SweepRow, column: string): string {
  const value = (row.raw as Record<string, string>)[column];
  if (value === undefined) {
    throw new PlotError(`unknown group-by column: ${column}`);
  }
  return column === "g" ? `G=${value}` : value;
}

/**
 * Series key: the group-by value joined with any other discriminating
 * columns that vary in the selection, so two rows never share one (series,
 * x) slot and no value ever needs aggregating.
 */
function seriesKey(rows: SweepRow[], column: string): (row: SweepRow) => string {
  const extras = ["scheme", "g", "noise_model"].filter(
    (c) => c !== column && new Set(rows.map((r) => (r.raw as Record<string, string>)[c])).size > 1,
  );
  return (row) =>
    [groupKey(row, column), ...extras.map((c) => groupKey(row, c))].join(" ");
}

function sortedUnique<T>(values: T[]): T[] {
  return [...new Set(values)].sort((a, b) => (a < b ? -1 : a > b ? 1 : 0));
}

/** Build the data series for a figure; this is the only data path into the SVG. */
export function buildSeries(rows: SweepRow[], spec: PlotSpec): Series[] {
  if (rows.length === 0) {
    throw new PlotError("empty selection: no rows to plot");
  }
  if (spec.kind === "ber_vs_snr") {
    const key = seriesKey(rows, spec.groupBy ?? "g");
    const keys = sortedUnique(rows.map(key));
    return keys.map((label) => ({
      label,
      points: rows
        .filter((r) => key(r) === label)
        .sort((a, b) => a.snr_db - b.snr_db)
        .map((r) => ({
          x: r.snr_db,
          y: r.ber_mean,
          rawX: r.raw.snr_db,
          rawY: r.raw.ber_mean,
        })),
    }));
  }
  if (spec.kind === "sync_error_bars") {
    const key = seriesKey(rows, spec.groupBy ?? "g");
    const keys = sortedUnique(rows.map(key));
    return keys.map((label) => ({
      label,
      points: rows
        .filter((r) => key(r) === label)
        .sort((a, b) => a.snr_db - b.snr_db)
        .map((r) => ({
          x: r.snr_db,
          y: r.mean_abs_sync_error,
          rawX: r.raw.snr_db,
          rawY: r.raw.mean_abs_sync_error,
          whisker: r.sync_error_std,
          rawWhisker: r.raw.sync_error_std,
        })),
    }));
  }
  if (spec.kind === "ber_by_modulation") {
    const gs = sortedUnique(rows.map((r) => r.g));
    const ends = gs.length > 1 ? [gs[0], gs[gs.length - 1]] : gs;
    const schemes = sortedUnique(rows.map((r) => r.scheme));
    const series: Series[] = [];
    for (const scheme of schemes) {
      for (const g of ends) {
        const sel = rows
          .filter((r) => r.scheme === scheme && r.g === g)
          .sort((a, b) => a.snr_db - b.snr_db);
        if (sel.length === 0) continue;
        series.push({
          label: `${scheme} G=${g}`,
          points: sel.map((r) => ({
            x: r.snr_db,
            y: r.ber_mean,
            rawX: r.raw.snr_db,
            rawY: r.raw.ber_mean,
          })),
        });
      }
    }
    if (series.length === 0) {
      throw new PlotError("empty selection: no rows to plot");
    }
    return series;
  }
  throw new PlotError(`unknown figure kind: ${(spec as PlotSpec).kind}`);
}

interface Scale {
  (v: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  return (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0);
}

function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-2 || Math.abs(v) >= 1e4)) {
    return v.toExponential(0);
  }
  return `${Math.round(v * 1000) / 1000}`;
}

function axisLabels(kind: FigureKind): { x: string; y: string } {
  if (kind === "sync_error_bars") {
    return { x: "SNR (dB)", y: "mean |sync error| (samples)" };
  }
  return { x: "SNR (dB)", y: "BER" };
}

export function renderSvg(series: Series[], spec: PlotSpec): string {
  const kind = spec.kind;
  const logY = spec.logY ?? kind !== "sync_error_bars";
  const pts = series.flatMap((s) => s.points);
  const xs = pts.map((p) => p.x);
  const positives = pts.map((p) => p.y).filter((y) => y > 0);
  let floorY = logY ? (positives.length ? Math.min(...positives) : 1e-6) : 0;
  let maxY = Math.max(...pts.map((p) => p.y + (p.whisker ?? 0)), floorY);
  if (maxY <= floorY) maxY = floorY * 10;
  if (logY) {
    // expand to whole decades so ticks frame the data
    floorY = 10 ** Math.floor(Math.log10(floorY));
    maxY = 10 ** Math.ceil(Math.log10(maxY));
  }

  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  const sx = linearScale(x0, x1, MARGIN.left, WIDTH - MARGIN.right);
  const sy: Scale = logY
    ? logScale(floorY, maxY, HEIGHT - MARGIN.bottom, MARGIN.top)
    : linearScale(0, maxY, HEIGHT - MARGIN.bottom, MARGIN.top);
  const clampY = (y: number) => (logY && y <= 0 ? floorY : y);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  // axes
  const bottom = HEIGHT - MARGIN.bottom;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${bottom}" x2="${WIDTH - MARGIN.right}" y2="${bottom}" stroke="black"/>`,
  );
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${bottom}" stroke="black"/>`,
  );
  const labels = axisLabels(kind);
  parts.push(
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 12}" text-anchor="middle">${labels.x}</text>`,
  );
  parts.push(
    `<text x="18" y="${(MARGIN.top + bottom) / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${(MARGIN.top + bottom) / 2})">${labels.y}</text>`,
  );

  // x ticks on the observed grid
  for (const x of sortedUnique(xs)) {
    const px = sx(x);
    parts.push(`<line x1="${px}" y1="${bottom}" x2="${px}" y2="${bottom + 5}" stroke="black"/>`);
    parts.push(`<text x="${px}" y="${bottom + 18}" text-anchor="middle">${fmtTick(x)}</text>`);
  }
  // y ticks: decades when log, quarters when linear
  if (logY) {
    const lo = Math.floor(Math.log10(floorY));
    const hi = Math.ceil(Math.log10(maxY));
    for (let e = lo; e <= hi; e++) {
      const v = 10 ** e;
      if (v < floorY || v > maxY) continue;
      const py = sy(v);
      parts.push(`<line x1="${MARGIN.left - 5}" y1="${py}" x2="${MARGIN.left}" y2="${py}" stroke="black"/>`);
      parts.push(`<text x="${MARGIN.left - 8}" y="${py + 4}" text-anchor="end">1e${e}</text>`);
    }
  } else {
    for (let i = 0; i <= 4; i++) {
      const v = (maxY * i) / 4;
      const py = sy(v);
      parts.push(`<line x1="${MARGIN.left - 5}" y1="${py}" x2="${MARGIN.left}" y2="${py}" stroke="black"/>`);
      parts.push(`<text x="${MARGIN.left - 8}" y="${py + 4}" text-anchor="end">${fmtTick(v)}</text>`);
    }
  }

  // data
  const xValues = sortedUnique(xs);
  const slotWidth = (WIDTH - MARGIN.left - MARGIN.right) / Math.max(1, xValues.length);
  const barWidth = (slotWidth * 0.7) / Math.max(1, series.length);
  series.forEach((s, si) => {
    const color = PALETTE[si % PALETTE.length];
    if (kind === "sync_error_bars") {
      for (const p of s.points) {
        const cx = sx(p.x) - (series.length * barWidth) / 2 + si * barWidth;
        const top = sy(clampY(p.y));
        parts.push(
          `<rect x="${cx}" y="${top}" width="${barWidth - 2}" height="${Math.max(0, bottom - top)}" ` +
            `fill="${color}" data-series="${s.label}" data-x="${p.rawX}" data-y="${p.rawY}"/>`,
        );
        if (p.whisker !== undefined) {
          const mid = cx + (barWidth - 2) / 2;
          const wTop = sy(clampY(p.y + p.whisker));
          const wBot = sy(clampY(Math.max(logY ? floorY : 0, p.y - p.whisker)));
          parts.push(
            `<line x1="${mid}" y1="${wTop}" x2="${mid}" y2="${wBot}" stroke="black" ` +
              `data-whisker="${p.rawWhisker}"/>`,
          );
          parts.push(`<line x1="${mid - 4}" y1="${wTop}" x2="${mid + 4}" y2="${wTop}" stroke="black"/>`);
          parts.push(`<line x1="${mid - 4}" y1="${wBot}" x2="${mid + 4}" y2="${wBot}" stroke="black"/>`);
        }
      }
    } else {
      const path = s.points
        .map((p, i) => `${i === 0 ? "M" : "L"}${sx(p.x).toFixed(2)},${sy(clampY(p.y)).toFixed(2)}`)
        .join(" ");
      parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.5"/>`);
      for (const p of s.points) {
        parts.push(
          `<circle cx="${sx(p.x).toFixed(2)}" cy="${sy(clampY(p.y)).toFixed(2)}" r="3.2" ` +
            `fill="${color}" data-series="${s.label}" data-x="${p.rawX}" data-y="${p.rawY}"/>`,
        );
      }
    }
  });

  // legend
  series.forEach((s, si) => {
    const color = PALETTE[si % PALETTE.length];
    const ly = MARGIN.top + 14 * si;
    parts.push(`<rect x="${WIDTH - 170}" y="${ly - 9}" width="10" height="10" fill="${color}"/>`);
    parts.push(`<text x="${WIDTH - 155}" y="${ly}">${s.label}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

export function renderFigure(rows: SweepRow[], spec: PlotSpec): string {
  return renderSvg(buildSeries(rows, spec), spec);
}
