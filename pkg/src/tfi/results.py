"""Machine-readable sweep results: CSV and JSON with a fixed column contract."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields

COLUMNS = ("snr_db", "g", "scheme", "noise_model", "trials", "ber_mean",
           "ber_stderr", "mean_abs_sync_error", "sync_error_std", "miss_rate",
           "cfo_rmse_hz", "wall_time_s")


@dataclass(frozen=True)
class SweepResultRow:
    snr_db: float
    g: int
    scheme: str
    noise_model: str
    trials: int
    ber_mean: float
    ber_stderr: float
    mean_abs_sync_error: float
    sync_error_std: float
    miss_rate: float
    cfo_rmse_hz: float
    wall_time_s: float


assert tuple(f.name for f in fields(SweepResultRow)) == COLUMNS


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".9g")
    return str(value)


def rows_to_csv(rows) -> str:
    lines = [",".join(COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(getattr(row, c)) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def rows_to_json(rows) -> str:
    objs = []
    for row in rows:
        parts = []
        for c in COLUMNS:
            v = getattr(row, c)
            if isinstance(v, str):
                parts.append(f'{json.dumps(c)}: {json.dumps(v)}')
            elif isinstance(v, float) and math.isnan(v):
                parts.append(f'{json.dumps(c)}: NaN')
            else:
                parts.append(f'{json.dumps(c)}: {_fmt(v)}')
        objs.append("{" + ", ".join(parts) + "}")
    return "[\n" + ",\n".join(objs) + "\n]\n"


def emit_results(rows, fmt: str, path) -> None:
    if not rows:
        raise ValueError("result table is empty")
    if fmt == "csv":
        text = rows_to_csv(rows)
    elif fmt == "json":
        text = rows_to_json(rows)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def parse_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0].split(",")
    if tuple(header) != COLUMNS:
        raise ValueError("unexpected CSV header")
    out = []
    for ln in lines[1:]:
        vals = ln.split(",")
        rec = dict(zip(header, vals))
        for k in ("snr_db", "ber_mean", "ber_stderr", "mean_abs_sync_error",
                  "sync_error_std", "miss_rate", "cfo_rmse_hz", "wall_time_s"):
            rec[k] = float(rec[k])
        rec["g"] = int(rec["g"])
        rec["trials"] = int(rec["trials"])
        out.append(rec)
    return out
