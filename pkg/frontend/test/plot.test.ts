import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseSweepCsv } from "../src/csv.js";
import { buildSeries, PlotError, renderFigure, renderSvg } from "../src/plot.js";

const FIXTURE = readFileSync(new URL("../fixtures/sample.csv", import.meta.url), "utf-8");
const ROWS = parseSweepCsv(FIXTURE);
const QAM16 = ROWS.filter((r) => r.scheme === "qam16");

describe("buildSeries", () => {
  it("groups ber_vs_snr by overclock factor with untouched values", () => {
    const series = buildSeries(QAM16, { kind: "ber_vs_snr" });
    expect(series.map((s) => s.label)).toEqual(["G=1", "G=2", "G=4", "G=8"]);
    const g8 = series[3];
    expect(g8.points.map((p) => p.rawY)).toEqual(["0.00133012821", "0.000144230769"]);
    expect(g8.points.map((p) => p.y)).toEqual([0.00133012821, 0.000144230769]);
    expect(g8.points.map((p) => p.x)).toEqual([9, 11]);
  });

  it("builds sync error bars with std whiskers", () => {
    const series = buildSeries(QAM16, { kind: "sync_error_bars" });
    const g1 = series[0];
    expect(g1.points[0].y).toBe(0.246707819);
    expect(g1.points[0].whisker).toBe(0.311639166);
    expect(g1.points[0].rawWhisker).toBe("0.311639166");
  });

  it("pairs lowest and highest G per scheme for ber_by_modulation", () => {
    const series = buildSeries(ROWS, { kind: "ber_by_modulation" });
    expect(series.map((s) => s.label)).toEqual([
      "qam16 G=1",
      "qam16 G=8",
      "qpsk G=1",
      "qpsk G=8",
    ]);
  });

  it("supports group-by scheme", () => {
    const series = buildSeries(ROWS.filter((r) => r.g === 1), {
      kind: "ber_vs_snr",
      groupBy: "scheme",
    });
    expect(series.map((s) => s.label)).toEqual(["qam16", "qpsk"]);
  });

  it("rejects an unknown group-by column", () => {
    expect(() => buildSeries(ROWS, { kind: "ber_vs_snr", groupBy: "nope" }))
      .toThrowError(/unknown group-by column/);
  });

  it("rejects an empty selection", () => {
    expect(() => buildSeries([], { kind: "ber_vs_snr" })).toThrowError(PlotError);
  });
});

describe("renderSvg", () => {
  it("embeds the exact CSV values on every marker", () => {
    const svg = renderFigure(QAM16, { kind: "ber_vs_snr" });
    for (const row of QAM16) {
      expect(svg).toContain(`data-x="${row.raw.snr_db}" data-y="${row.raw.ber_mean}"`);
    }
  });

  it("embeds exact whisker values on sync error bars", () => {
    const svg = renderFigure(QAM16, { kind: "sync_error_bars" });
    for (const row of QAM16) {
      expect(svg).toContain(`data-y="${row.raw.mean_abs_sync_error}"`);
      expect(svg).toContain(`data-whisker="${row.raw.sync_error_std}"`);
    }
  });

  it("is deterministic", () => {
    const a = renderFigure(ROWS, { kind: "ber_by_modulation" });
    const b = renderFigure(ROWS, { kind: "ber_by_modulation" });
    expect(a).toBe(b);
  });

  it("labels axes with units and draws one legend entry per series", () => {
    const series = buildSeries(QAM16, { kind: "ber_vs_snr" });
    const svg = renderSvg(series, { kind: "ber_vs_snr" });
    expect(svg).toContain("SNR (dB)");
    expect(svg).toContain(">BER<");
    for (const s of series) {
      expect(svg).toContain(`>${s.label}<`);
    }
  });

  it("uses a log BER axis with decade ticks", () => {
    const svg = renderFigure(QAM16, { kind: "ber_vs_snr" });
    expect(svg).toContain("1e-4");
    expect(svg).toContain("1e-1");
  });

  it("handles zero BER rows on the log axis", () => {
    const svg = renderFigure(ROWS.filter((r) => r.scheme === "qpsk"),
                             { kind: "ber_vs_snr" });
    expect(svg).toContain("<svg");
  });
});
