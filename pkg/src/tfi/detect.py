"""Packet detection on the base-rate stream (1x idle listening).

A candidate start index n0 qualifies when
  (a) the forward 16-sample window energy at n0 clears an absolute
      threshold calibrated to a 1% false-alarm rate on unit-variance noise
      (see calibrate_energy_threshold), and
  (b) the lag-d autocorrelation, normalized by the delayed-window energy
      and integrated over the plateau_min_len-sample span starting at n0,
      stays at plateau_ratio_threshold or above.
The short training field is d-periodic, so (b) can only hold when the
correlation persists across the whole span; a short burst cannot lift the
integrated ratio to 0.8. With the defaults (d=16, span 96) the decision is
made within the first nine 16-sample STF repetitions, leaving the last one
for the receiver's clock switch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

# 99th percentile of 16-sample window energy under unit-variance complex
# Gaussian noise; regenerate with calibrate_energy_threshold() or the
# `tfi calibrate-detector` command.
DEFAULT_ENERGY_THRESHOLD = 26.77


@dataclass(frozen=True)
class DetectorConfig:
    energy_window: int = 16
    autocorr_lag: int = 16
    energy_threshold: float = DEFAULT_ENERGY_THRESHOLD
    plateau_ratio_threshold: float = 0.8
    plateau_min_len: int = 96
    stf_reps_used: int = 9
    clock_switch_latency: float = 8e-6

    def __post_init__(self):
        if self.stf_reps_used > 9:
            raise ValueError("stf_reps_used must leave one STF repetition for clock switch")
        if not 0 < self.plateau_ratio_threshold < 1:
            raise ValueError("plateau_ratio_threshold must be in (0, 1)")
        if self.plateau_min_len <= self.autocorr_lag:
            raise ValueError("plateau span must exceed the autocorrelation lag")
        if self.autocorr_lag + self.plateau_min_len > 9 * 16:
            raise ValueError("plateau span exceeds the nine-repetition detection budget")


@dataclass(frozen=True)
class Detection:
    index: int           # estimated STF start
    decision_index: int  # last base-rate sample consumed for the decision
    ratio: float         # integrated plateau statistic at the decision


def detect_packet(stream_1x, cfg: DetectorConfig = DetectorConfig()) -> Detection | None:
    """Return the first qualifying detection, or None (missed packet)."""
    y = np.asarray(stream_1x, dtype=complex)
    span = cfg.plateau_min_len
    if y.size <= span + cfg.autocorr_lag:
        return None
    ratio_t, energy_t = _kernels.detector_stats(
        y, cfg.autocorr_lag, cfg.energy_window, span
    )
    # Re-anchor the trailing statistics to the candidate start n0:
    # plateau ratio over [n0, n0+span) and energy over [n0+1, n0+L].
    n_cand = y.size - span
    ratio_fwd = ratio_t[span - 1: span - 1 + n_cand]
    e_end = np.minimum(np.arange(n_cand) + cfg.energy_window, y.size - 1)
    energy_fwd = energy_t[e_end]
    hits = np.flatnonzero((ratio_fwd >= cfg.plateau_ratio_threshold)
                          & (energy_fwd > cfg.energy_threshold))
    if hits.size == 0:
        return None
    n0 = int(hits[0])
    return Detection(index=n0, decision_index=n0 + span - 1, ratio=float(ratio_fwd[n0]))


def noise_floor(stream, window: int = 16) -> float:
    """Quietest-decile mean power over disjoint windows (noise-only stretches)."""
    p = np.abs(np.asarray(stream)) ** 2
    n_win = p.size // window
    if n_win == 0:
        return float(np.mean(p)) if p.size else 0.0
    means = p[: n_win * window].reshape(n_win, window).mean(axis=1)
    k = max(1, n_win // 10)
    return float(np.mean(np.sort(means)[:k]))


def normalize_for_detection(stream_1x) -> np.ndarray:
    """Scale a capture so its noise floor sits near unit variance.

    Emulates AGC so the absolute energy threshold keeps its calibrated
    meaning. Noiseless captures (zero floor) fall back to mean-power
    scaling, which any real signal clears easily.
    """
    y = np.asarray(stream_1x, dtype=complex)
    floor = noise_floor(y)
    if floor <= 0:
        mean = float(np.mean(np.abs(y) ** 2)) if y.size else 0.0
        if mean <= 0:
            return y.copy()
        floor = mean * 1e-6
    return y / np.sqrt(floor)


def calibrate_energy_threshold(fa_rate: float = 0.01, n_samples: int = 2_000_000,
                               window: int = 16, seed: int = 2024) -> float:
    """Monte Carlo threshold: windowed energy exceeded with rate fa_rate on
    unit-variance complex Gaussian noise."""
    rng = np.random.default_rng(seed)
    y = rng.normal(0, np.sqrt(0.5), n_samples) + 1j * rng.normal(0, np.sqrt(0.5), n_samples)
    p = np.abs(y) ** 2
    c = np.cumsum(p)
    w = c[window:] - c[:-window]
    return float(np.percentile(w, 100.0 * (1.0 - fa_rate)))
