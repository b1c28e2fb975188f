"""Monte Carlo experiment orchestration.

Every trial derives its RNG seed from a stable hash of (base_seed, grid
point, trial index), so results are independent of worker count and
execution order. Both receivers always score the identical capture (paired
comparison). Wall-time measurement is opt-in so that repeated runs of the
same spec emit byte-identical CSV.
"""

from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelScenario, apply_scenario, taps_preset
from .config import OfdmConfig
from .detect import DetectorConfig
from .framing import FrameBlueprint, build_frame
from .modulation import get_constellation
from .receiver import (GenieAids, RxDiagnostics, TrialTruth, receive_frame,
                       receive_frame_baseline)
from .results import SweepResultRow

DEFAULT_SNR_GRID = tuple(float(s) for s in range(9, 36, 2))
DEFAULT_G_GRID = (1, 2, 4, 8)
DEFAULT_SCHEMES = ("bpsk", "qpsk", "qam16", "qam64")


@dataclass(frozen=True)
class SweepSpec:
    snr_grid_db: tuple = DEFAULT_SNR_GRID
    g_grid: tuple = DEFAULT_G_GRID
    schemes: tuple = DEFAULT_SCHEMES
    noise_model: str = "wideband"
    taps: str = "flat"
    packets_per_point: int = 3000
    payload_symbols: int = 20
    base_seed: int = 0
    cfo_max_hz: float = 1000.0
    lead_in_base: tuple = (160, 480)  # noise-only lead-in range, base samples
    timing: bool = False              # record wall time per point

    def __post_init__(self):
        if not (self.snr_grid_db and self.g_grid and self.schemes):
            raise ValueError("all sweep grids must be nonempty")
        if self.packets_per_point < 1:
            raise ValueError("packets_per_point must be >= 1")


def trial_seed(base_seed: int, scheme: str, g: int, snr_db: float,
               noise_model: str, trial: int) -> int:
    key = f"{base_seed}|{scheme}|{g}|{snr_db:.6f}|{noise_model}|{trial}"
    digest = hashlib.blake2b(key.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def make_trial(scheme: str, g: int, snr_db: float, noise_model: str,
               taps_name: str, payload_symbols: int, seed: int,
               cfo_max_hz: float = 1000.0,
               lead_in_base: tuple = (160, 480),
               cfg: OfdmConfig | None = None
               ) -> tuple[FrameBlueprint, ChannelScenario]:
    """Deterministically build one trial's frame and channel realization."""
    cfg = replace(cfg or OfdmConfig(), overclock=g)
    rng = np.random.default_rng(seed)
    c = get_constellation(scheme)
    n_bits = payload_symbols * len(cfg.data_subcarriers) * c.bits_per_symbol
    bits = rng.integers(0, 2, size=n_bits, dtype=np.uint8)
    blueprint = build_frame(bits, c, cfg)
    offset = int(rng.integers(lead_in_base[0], lead_in_base[1])) * g \
        + int(rng.integers(0, g))
    scenario = ChannelScenario(
        taps=taps_preset(taps_name, g),
        cfo_hz=float(rng.uniform(-cfo_max_hz, cfo_max_hz)) if cfo_max_hz else 0.0,
        timing_offset=offset,
        timing_frac=float(rng.uniform(0.0, 1.0)),
        snr_db=snr_db,
        noise_model=noise_model,
        seed=int(rng.integers(0, 2 ** 63 - 1)),
    )
    return blueprint, scenario


@dataclass
class TrialRecord:
    tfi: RxDiagnostics
    baseline: RxDiagnostics
    capture_checksum: str | None = None


def run_trial(blueprint: FrameBlueprint, scenario: ChannelScenario, *,
              detector: DetectorConfig | None = None,
              combining: str = "uniform",
              genie: GenieAids | None = None,
              checksum: bool = False) -> TrialRecord:
    """Generate one capture and run both receivers on it."""
    capture = apply_scenario(blueprint, scenario)
    truth = TrialTruth.from_blueprint(blueprint, scenario)
    cfg = blueprint.cfg
    scheme = blueprint.scheme

    def _guard(fn, *args, **kw) -> RxDiagnostics:
        try:
            return fn(*args, **kw)
        except Exception as exc:  # receiver failures become per-trial records
            d = RxDiagnostics(g=cfg.overclock, missed=True, error=str(exc))
            d.n_bits = truth.payload_bits.size
            d.n_bit_errors = d.n_bits
            d.ber = 1.0
            return d

    tfi = _guard(receive_frame, capture, cfg, scheme, blueprint.n_symbols,
                 detector=detector, combining=combining, truth=truth, genie=genie)
    base = _guard(receive_frame_baseline, capture, cfg, scheme,
                  blueprint.n_symbols, detector=detector, truth=truth, genie=genie)
    rec = TrialRecord(tfi=tfi, baseline=base)
    if checksum:
        rec.capture_checksum = hashlib.blake2b(
            np.ascontiguousarray(capture).tobytes(), digest_size=8).hexdigest()
    return rec


def _trial_task(args) -> tuple:
    (scheme, g, snr_db, noise_model, taps_name, payload_symbols, seed,
     cfo_max_hz, lead_in) = args
    blueprint, scenario = make_trial(scheme, g, snr_db, noise_model, taps_name,
                                     payload_symbols, seed, cfo_max_hz, lead_in)
    rec = run_trial(blueprint, scenario)
    t, b = rec.tfi, rec.baseline
    coarse_err = (t.cfo_coarse_hz - scenario.cfo_hz) \
        if (t.detected and t.cfo_coarse_hz is not None) else None
    return (t.ber, b.ber, t.missed, b.missed,
            t.sync_error_samples if t.detected else None,
            b.sync_error_samples if b.detected else None,
            t.cfo_error_hz if t.detected else None,
            coarse_err)


def worker_count() -> int:
    cap = os.environ.get("TFI_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = max(1, min(n, int(cap)))
    return n


def _map_trials(tasks, workers: int):
    if workers <= 1 or len(tasks) < 4:
        return [_trial_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_trial_task, tasks, chunksize=chunk))


def run_point(spec: SweepSpec, scheme: str, g: int, snr_db: float,
              workers: int | None = None) -> tuple[SweepResultRow, list]:
    """All trials of one grid point; returns the TFI-receiver row and the raw
    per-trial tuples (paired with the 1x baseline)."""
    workers = worker_count() if workers is None else workers
    tasks = [
        (scheme, g, snr_db, spec.noise_model, spec.taps, spec.payload_symbols,
         trial_seed(spec.base_seed, scheme, g, snr_db, spec.noise_model, i),
         spec.cfo_max_hz, spec.lead_in_base)
        for i in range(spec.packets_per_point)
    ]
    t0 = time.perf_counter()
    results = _map_trials(tasks, workers)
    wall = time.perf_counter() - t0 if spec.timing else 0.0

    bers = np.array([r[0] for r in results], dtype=float)
    misses = np.array([r[2] for r in results], dtype=bool)
    sync = np.array([r[4] for r in results if r[4] is not None], dtype=float)
    cfo = np.array([r[6] for r in results if r[6] is not None], dtype=float)
    n = len(results)
    row = SweepResultRow(
        snr_db=float(snr_db),
        g=int(g),
        scheme=scheme,
        noise_model=spec.noise_model,
        trials=n,
        ber_mean=float(np.mean(bers)),
        ber_stderr=float(np.std(bers, ddof=1) / np.sqrt(n)) if n > 1 else 0.0,
        mean_abs_sync_error=float(np.mean(np.abs(sync))) if sync.size else float("nan"),
        sync_error_std=float(np.std(sync, ddof=1)) if sync.size > 1 else 0.0,
        miss_rate=float(np.mean(misses)),
        cfo_rmse_hz=float(np.sqrt(np.mean(cfo ** 2))) if cfo.size else float("nan"),
        wall_time_s=float(wall),
    )
    return row, results


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepResultRow]:
    """Cartesian product of the grids; rows sorted by (scheme, g, snr)."""
    rows = []
    for scheme in sorted(spec.schemes):
        for g in sorted(spec.g_grid):
            for snr in sorted(spec.snr_grid_db):
                row, _ = run_point(spec, scheme, g, snr, workers=workers)
                rows.append(row)
    return rows
