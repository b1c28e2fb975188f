import numpy as np
import pytest

from tfi.config import OfdmConfig
from tfi.framing import build_frame
from tfi.modulation import CONSTELLATIONS
from tfi.receiver import polyphase_split


def test_frame_length_single_qpsk_symbol():
    bits = np.zeros(104, dtype=np.uint8)
    bp = build_frame(bits, "qpsk", OfdmConfig())
    assert bp.base_waveform.shape == (160 + 160 + 80,)
    assert bp.n_symbols == 1
    assert bp.pad_len == 0


def test_padding_recorded_and_zero_bits_map():
    cfg = OfdmConfig()
    bp = build_frame(np.zeros(10, dtype=np.uint8), "qam16", cfg)
    assert bp.pad_len == 52 * 4 - 10
    zero_point = CONSTELLATIONS["qam16"].points[0]
    dbins = cfg.bins(cfg.data_subcarriers)
    assert np.max(np.abs(bp.tx_grids[0][dbins] - zero_point)) < 1e-12


def test_empty_bits_rejected():
    with pytest.raises(ValueError):
        build_frame(np.zeros(0, dtype=np.uint8), "bpsk", OfdmConfig())


@pytest.mark.parametrize("g", [1, 2, 4, 8])
def test_oversampled_length_and_polyphase_zero(g):
    cfg = OfdmConfig(overclock=g)
    rng = np.random.default_rng(g)
    bp = build_frame(rng.integers(0, 2, 3 * 104, dtype=np.uint8), "qpsk", cfg)
    assert bp.oversampled_waveform.size == g * bp.base_waveform.size
    copies = polyphase_split(bp.oversampled_waveform, g)
    assert np.max(np.abs(copies[0] - bp.base_waveform)) < 1e-9


def test_oversampled_preamble_structure_in_frame():
    g = 8
    cfg = OfdmConfig(overclock=g)
    bp = build_frame(np.ones(104, dtype=np.uint8), "qpsk", cfg)
    over = bp.oversampled_waveform
    stf = over[: 160 * g]
    assert np.max(np.abs(stf[: 144 * g] - stf[16 * g:])) < 1e-12
    ltf = over[160 * g: 320 * g]
    assert np.array_equal(ltf[32 * g: 96 * g], ltf[96 * g:])


def test_tx_grids_carry_pilots():
    cfg = OfdmConfig()
    bp = build_frame(np.zeros(104, dtype=np.uint8), "qpsk", cfg)
    pbins = cfg.bins(cfg.pilot_subcarriers)
    assert np.allclose(bp.tx_grids[0][pbins], [1, 1, 1, -1])
    dc = bp.tx_grids[0][0]
    assert dc == 0
