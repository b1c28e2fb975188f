"""OFDM numerology and subcarrier layout.

64-point grid at a 2 MHz base rate: 56 occupied tones (52 data + 4 pilots
at signed indices +-7, +-21), 16-sample cyclic prefix, so one symbol spans
80 samples = 40 us. The receiver may sample at an integer multiple G of the
base rate (G in {1, 2, 4, 8}).

Signed subcarrier indices l in [-32, 31] map to FFT bins as l mod F.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PILOT_SUBCARRIERS = (-21, -7, 7, 21)
# Fixed pilot values, one per pilot tone in PILOT_SUBCARRIERS order.
PILOT_VALUES = np.array([1.0, 1.0, 1.0, -1.0])

SUPPORTED_OVERCLOCK = (1, 2, 4, 8)


def _default_data_subcarriers() -> tuple[int, ...]:
    occupied = [l for l in range(-28, 29) if l != 0]
    return tuple(l for l in occupied if l not in PILOT_SUBCARRIERS)


@dataclass(frozen=True)
class OfdmConfig:
    """Numerology shared by transmitter and receiver."""

    num_subcarriers: int = 64
    cp_len: int = 16
    data_subcarriers: tuple[int, ...] = field(default_factory=_default_data_subcarriers)
    pilot_subcarriers: tuple[int, ...] = PILOT_SUBCARRIERS
    base_rate: float = 2e6
    overclock: int = 1

    def __post_init__(self):
        f = self.num_subcarriers
        if f <= 0 or f & (f - 1):
            raise ValueError(f"num_subcarriers must be a power of two, got {f}")
        if not 0 <= self.cp_len < f:
            raise ValueError(f"cp_len must be in [0, {f}), got {self.cp_len}")
        if self.overclock not in SUPPORTED_OVERCLOCK:
            raise ValueError(f"overclock must be one of {SUPPORTED_OVERCLOCK}")
        data = set(self.data_subcarriers)
        pilots = set(self.pilot_subcarriers)
        if data & pilots:
            raise ValueError("data and pilot subcarrier sets overlap")
        occupied = data | pilots
        if 0 in occupied:
            raise ValueError("DC bin must stay empty")
        if any(not (-f // 2 <= l < f // 2) for l in occupied):
            raise ValueError("subcarrier index out of range")

    @property
    def symbol_len(self) -> int:
        return self.num_subcarriers + self.cp_len

    @property
    def symbol_duration(self) -> float:
        return self.symbol_len / self.base_rate

    @property
    def sample_rate(self) -> float:
        """Receiver-side sample rate G * Fs."""
        return self.base_rate * self.overclock

    @property
    def occupied_subcarriers(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.data_subcarriers) | set(self.pilot_subcarriers)))

    def bins(self, signed_indices) -> np.ndarray:
        """FFT bin numbers for signed subcarrier indices."""
        return np.asarray(signed_indices) % self.num_subcarriers

    def signed_index_grid(self) -> np.ndarray:
        """Signed frequency l for each FFT bin 0..F-1 (bin b -> l in [-F/2, F/2))."""
        f = self.num_subcarriers
        l = np.arange(f)
        return np.where(l < f // 2, l, l - f)


DEFAULT_CONFIG = OfdmConfig()
