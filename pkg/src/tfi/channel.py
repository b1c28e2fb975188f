"""Channel impairments: multipath, CFO, timing offset, calibrated noise.

Two receiver-noise models are exposed:
  wideband  - i.i.d. complex Gaussian per oversampled sample; polyphase
              copies then carry independent noise and combining pays off.
  brickwall - white noise generated at the base rate and band-limited
              interpolated to the oversampled rate; copies carry
              near-deterministically related noise and the combining gain
              collapses.
The noise variance is sigma^2 = P_sig / snr in both models, with P_sig the
mean per-sample power of the base-rate (polyphase-0) signal stream, so the
1x receiver's operating SNR equals the nominal SNR for every G.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .framing import FrameBlueprint
from .transforms import fractional_delay, upsample_bandlimited

NOISE_MODELS = ("wideband", "brickwall")


def taps_preset(name: str, g: int) -> np.ndarray:
    """Named multipath profiles, expressed at the oversampled rate."""
    name = name.lower()
    if name == "flat":
        return np.array([1.0 + 0j])
    if name == "two_ray":
        taps = np.zeros(2 * g + 1, dtype=complex)
        taps[0] = 1.0
        taps[2 * g] = 0.5j
        return taps
    if name == "exp3":
        taps = np.zeros(3 * g + 1, dtype=complex)
        taps[0] = 1.0
        taps[g] = 0.5 * np.exp(0.7j)
        taps[3 * g] = 0.25 * np.exp(-1.9j)
        return taps
    raise ValueError(f"unknown taps preset {name!r}")


@dataclass(frozen=True)
class ChannelScenario:
    """Impairment set for one capture; taps are normalized to unit energy."""

    taps: np.ndarray = field(default_factory=lambda: np.array([1.0 + 0j]))
    cfo_hz: float = 0.0
    timing_offset: int = 0      # noise-only lead-in, oversampled samples
    timing_frac: float = 0.0    # sub-sample timing offset in [0, 1) oversamples
    snr_db: float = math.inf
    noise_model: str = "wideband"
    seed: int = 0

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=complex).ravel()
        if taps.size == 0:
            raise ValueError("taps must be nonempty")
        energy = np.sum(np.abs(taps) ** 2)
        if energy == 0:
            raise ValueError("taps must carry energy")
        object.__setattr__(self, "taps", taps / np.sqrt(energy))
        if self.noise_model not in NOISE_MODELS:
            raise ValueError(f"noise_model must be one of {NOISE_MODELS}")
        if self.timing_offset < 0:
            raise ValueError("timing_offset must be nonnegative")
        if not 0 <= self.timing_frac < 1:
            raise ValueError("timing_frac must be in [0, 1)")
        if not (math.isinf(self.snr_db) or math.isfinite(self.snr_db)):
            raise ValueError("snr_db must be finite or +inf")


def apply_multipath(x, taps) -> np.ndarray:
    """Linear convolution with the tap vector, truncated to the input length."""
    x = np.asarray(x, dtype=complex)
    taps = np.asarray(taps, dtype=complex).ravel()
    if taps.size == 0:
        raise ValueError("taps must be nonempty")
    return np.convolve(x, taps)[: x.size]


def apply_cfo(x, cfo_hz: float, rate: float) -> np.ndarray:
    """Rotate sample n by e^{j 2 pi cfo_hz n / rate}."""
    x = np.asarray(x, dtype=complex)
    if cfo_hz == 0:
        return x.copy()
    n = np.arange(x.size)
    return x * np.exp(2j * np.pi * cfo_hz * n / rate)


def _noise(shape, rng, var) -> np.ndarray:
    scale = np.sqrt(var / 2.0)
    return rng.normal(0.0, scale, shape) + 1j * rng.normal(0.0, scale, shape)


def add_noise(x, scenario: ChannelScenario, signal_power: float, g: int,
              rng: np.random.Generator | None = None) -> np.ndarray:
    """Add receiver noise calibrated against the base-rate signal power."""
    x = np.asarray(x, dtype=complex)
    if math.isinf(scenario.snr_db):
        return x.copy()
    if rng is None:
        rng = np.random.default_rng(scenario.seed)
    var = signal_power / (10.0 ** (scenario.snr_db / 10.0))
    if scenario.noise_model == "wideband":
        return x + _noise(x.size, rng, var)
    n_base = -(-x.size // g)  # ceil
    base = _noise(n_base, rng, var)
    return x + upsample_bandlimited(base, g)[: x.size]


def apply_scenario(blueprint: FrameBlueprint, scenario: ChannelScenario,
                   rng: np.random.Generator | None = None) -> np.ndarray:
    """Produce the received oversampled stream for one trial.

    Order: noise-only lead-in is prepended, multipath and CFO act on the
    signal, one symbol of trailing silence is appended, then noise covers
    the whole capture.
    """
    if rng is None:
        rng = np.random.default_rng(scenario.seed)
    g = blueprint.overclock
    wave = blueprint.oversampled_waveform
    if scenario.timing_frac:
        wave = fractional_delay(wave, scenario.timing_frac)
    lead = np.zeros(scenario.timing_offset, dtype=complex)
    tail = np.zeros(blueprint.cfg.symbol_len * g, dtype=complex)
    stream = np.concatenate([lead, wave, tail])
    stream = apply_multipath(stream, scenario.taps)
    stream = apply_cfo(stream, scenario.cfo_hz, blueprint.cfg.base_rate * g)
    # Noise is calibrated against the signal power actually reaching the
    # receiver's base-rate stream (post-channel, frame span only).
    frame = stream[scenario.timing_offset: scenario.timing_offset + wave.size]
    p_sig = float(np.mean(np.abs(frame[::g]) ** 2))
    stream = add_noise(stream, scenario, p_sig, g, rng)
    if not np.all(np.isfinite(stream)):
        raise ValueError("scenario produced non-finite samples")
    return stream


def true_ltf_start(blueprint: FrameBlueprint, scenario: ChannelScenario) -> float:
    """Ground-truth oversampled index of the LTF field start (guard included)."""
    g = blueprint.overclock
    stf_len = 2 * blueprint.cfg.symbol_len  # ten short repetitions
    return scenario.timing_offset + scenario.timing_frac + stf_len * g
