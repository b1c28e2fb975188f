"""Frame construction: STF || LTF || payload symbols, at base and oversampled rates.

The oversampled waveform is synthesized tone-exactly per segment (see
transforms.upsample_grid_symbol), so polyphase component 0 reproduces the
base-rate waveform sample for sample and the inter-copy phase structure is
exact at every oversampling factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import OfdmConfig
from .modulation import Constellation, get_constellation, map_bits
from .preamble import PreambleSpec, default_preamble, gen_ltf, gen_stf
from .transforms import add_cp, build_grid, default_pilots, ifft, ifft_oversampled


@dataclass(frozen=True)
class FrameBlueprint:
    """A transmitted frame plus the ground truth needed to score reception."""

    payload_bits: np.ndarray          # the caller's bits, pad excluded
    scheme: Constellation
    pad_len: int                      # zero bits appended to fill the last symbol
    tx_grids: np.ndarray              # (n_symbols, F) frequency grids, ground truth
    base_waveform: np.ndarray         # at Fs
    oversampled_waveform: np.ndarray  # at G*Fs
    cfg: OfdmConfig

    @property
    def n_symbols(self) -> int:
        return len(self.tx_grids)

    @property
    def overclock(self) -> int:
        return self.cfg.overclock

    @property
    def signal_power(self) -> float:
        """Mean per-sample power of the base-rate waveform (SNR reference)."""
        return float(np.mean(np.abs(self.base_waveform) ** 2))


def build_frame(bits, scheme, cfg: OfdmConfig,
                preamble: PreambleSpec | None = None) -> FrameBlueprint:
    """Build the full baseband frame for a payload bit sequence."""
    scheme = get_constellation(scheme)
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    if bits.size == 0:
        raise ValueError("payload bits must be nonempty")
    if preamble is None:
        preamble = default_preamble(cfg)

    n_data = len(cfg.data_subcarriers)
    bits_per_sym = n_data * scheme.bits_per_symbol
    pad_len = (-bits.size) % bits_per_sym
    padded = np.concatenate([bits, np.zeros(pad_len, dtype=np.uint8)])
    points = map_bits(padded, scheme).reshape(-1, n_data)
    pilots = default_pilots(cfg)

    grids = np.stack([build_grid(row, pilots, cfg) for row in points])

    g = cfg.overclock
    f = cfg.num_subcarriers
    base_parts = [gen_stf(cfg), gen_ltf(cfg)]
    over_parts = [gen_stf(cfg, g), gen_ltf(cfg, g)]
    for grid in grids:
        base_parts.append(add_cp(ifft(grid), cfg.cp_len))
        over_parts.append(add_cp(ifft_oversampled(grid, f, g), cfg.cp_len * g))

    return FrameBlueprint(
        payload_bits=bits,
        scheme=scheme,
        pad_len=pad_len,
        tx_grids=grids,
        base_waveform=np.concatenate(base_parts),
        oversampled_waveform=np.concatenate(over_parts),
        cfg=cfg,
    )
