"""Short and long training fields.

The STF occupies every 4th occupied tone (signed +-4, +-8, ..., +-24) with
+-(1+j)*sqrt(13/6) values, giving an exactly 16-sample-periodic waveform;
ten repetitions fill two symbol durations (160 samples). The LTF carries
+-1 on the 52 tones +-1..+-26 and is sent as a 32-sample guard followed by
two identical 64-sample symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import OfdmConfig
from .transforms import ifft, ifft_oversampled

STF_REPETITIONS = 10
LTF_SYMBOLS = 2

_STF_SIGNS = {4: -1, 8: -1, 12: 1, 16: 1, 20: 1, 24: 1,
              -4: 1, -8: -1, -12: -1, -16: 1, -20: -1, -24: 1}

_LTF_RIGHT = [1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1,
              1, -1, 1, -1, 1, 1, 1, 1]  # tones +1..+26
_LTF_LEFT = [1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1,
             -1, 1, -1, 1, 1, 1, 1]  # tones -26..-1


def stf_freq_sequence(cfg: OfdmConfig) -> np.ndarray:
    grid = np.zeros(cfg.num_subcarriers, dtype=complex)
    scale = np.sqrt(13.0 / 6.0) * (1 + 1j)
    for l, sign in _STF_SIGNS.items():
        grid[l % cfg.num_subcarriers] = sign * scale
    return grid


def ltf_freq_sequence(cfg: OfdmConfig) -> np.ndarray:
    grid = np.zeros(cfg.num_subcarriers, dtype=complex)
    f = cfg.num_subcarriers
    for i, l in enumerate(range(1, 27)):
        grid[l] = _LTF_RIGHT[i]
    for i, l in enumerate(range(-26, 0)):
        grid[l % f] = _LTF_LEFT[i]
    return grid


@dataclass(frozen=True)
class PreambleSpec:
    stf_freq_seq: np.ndarray
    ltf_freq_seq: np.ndarray
    stf_repetitions: int = STF_REPETITIONS
    ltf_symbols: int = LTF_SYMBOLS

    @property
    def ltf_bins(self) -> np.ndarray:
        return np.flatnonzero(self.ltf_freq_seq != 0)


def default_preamble(cfg: OfdmConfig) -> PreambleSpec:
    return PreambleSpec(stf_freq_sequence(cfg), ltf_freq_sequence(cfg))


def gen_stf(cfg: OfdmConfig, g: int = 1) -> np.ndarray:
    """STF waveform at g*Fs: ten repetitions of the 16g-sample short sequence."""
    body = ifft_oversampled(stf_freq_sequence(cfg), cfg.num_subcarriers, g) if g > 1 \
        else ifft(stf_freq_sequence(cfg))
    period = body[: 16 * g]
    return np.tile(period, STF_REPETITIONS)


def gen_ltf(cfg: OfdmConfig, g: int = 1) -> np.ndarray:
    """LTF waveform at g*Fs: 32g-sample guard + two identical 64g-sample symbols."""
    body = ifft_oversampled(ltf_freq_sequence(cfg), cfg.num_subcarriers, g) if g > 1 \
        else ifft(ltf_freq_sequence(cfg))
    guard = body[-32 * g:]
    return np.concatenate([guard, body, body])
