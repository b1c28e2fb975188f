/**
 * Reader for the sweep result CSV emitted by the tfi harness.
 *
 * The header is a fixed contract; rows are parsed into typed records with
 * the original numeric strings preserved so downstream consumers can prove
 * that rendered values equal file values exactly.
 */

export const COLUMNS = [
  "snr_db",
  "g",
  "scheme",
  "noise_model",
  "trials",
  "ber_mean",
  "ber_stderr",
  "mean_abs_sync_error",
  "sync_error_std",
  "miss_rate",
  "cfo_rmse_hz",
  "wall_time_s",
] as const;

export type Column = (typeof COLUMNS)[number];

export interface SweepRow {
  snr_db: number;
  g: number;
  scheme: string;
  noise_model: string;
  trials: number;
  ber_mean: number;
  ber_stderr: number;
  mean_abs_sync_error: number;
  sync_error_std: number;
  miss_rate: number;
  cfo_rmse_hz: number;
  wall_time_s: number;
  /** raw cell text by column, exactly as it appeared in the file */
  raw: Record<Column, string>;
}

export class CsvError extends Error {}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV");
  }
  const header = lines[0].split(",");
  for (const col of COLUMNS) {
    if (!header.includes(col)) {
      throw new CsvError(`missing column: ${col}`);
    }
  }
  const index = new Map(header.map((name, i) => [name, i] as const));
  const rows: SweepRow[] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new CsvError(`row has ${cells.length} cells, expected ${header.length}`);
    }
    const raw = {} as Record<Column, string>;
    for (const col of COLUMNS) {
      raw[col] = cells[index.get(col)!];
    }
    const num = (col: Column): number => {
      const v = Number(raw[col]);
      if (Number.isNaN(v) && raw[col] !== "nan") {
        throw new CsvError(`non-numeric value ${raw[col]!} in column ${col}`);
      }
      return v;
    };
    rows.push({
      snr_db: num("snr_db"),
      g: parseInt(raw.g, 10),
      scheme: raw.scheme,
      noise_model: raw.noise_model,
      trials: parseInt(raw.trials, 10),
      ber_mean: num("ber_mean"),
      ber_stderr: num("ber_stderr"),
      mean_abs_sync_error: num("mean_abs_sync_error"),
      sync_error_std: num("sync_error_std"),
      miss_rate: num("miss_rate"),
      cfo_rmse_hz: num("cfo_rmse_hz"),
      wall_time_s: num("wall_time_s"),
      raw,
    });
  }
  return rows;
}
