import numpy as np
import pytest

from tfi.config import OfdmConfig
from tfi.transforms import (assemble_symbol, build_grid, default_pilots, fft,
                            fractional_delay, ifft, remove_cp,
                            upsample_bandlimited, xcorr)

CFG = OfdmConfig()


def naive_dft(x):
    """O(N^2) reference transform, independent of the fast path."""
    n = len(x)
    out = np.zeros(n, dtype=complex)
    for l in range(n):
        for k in range(n):
            out[l] += x[k] * np.exp(-2j * np.pi * k * l / n)
    return out


def test_fft_dc_impulse():
    out = fft(np.ones(64))
    assert abs(out[0] - 64) < 1e-10
    assert np.max(np.abs(out[1:])) < 1e-10


@pytest.mark.parametrize("n", [64, 128, 256, 512])
def test_ifft_inverts(n):
    rng = np.random.default_rng(n)
    x = rng.normal(size=n) + 1j * rng.normal(size=n)
    assert np.max(np.abs(ifft(fft(x)) - x)) < 1e-10


def test_fft_matches_naive_dft():
    rng = np.random.default_rng(3)
    x = rng.normal(size=64) + 1j * rng.normal(size=64)
    assert np.max(np.abs(fft(x) - naive_dft(x))) < 1e-8


def test_non_power_of_two_rejected():
    with pytest.raises(ValueError):
        fft(np.ones(48))
    with pytest.raises(ValueError):
        ifft(np.ones(100))


def test_parseval():
    rng = np.random.default_rng(5)
    x = rng.normal(size=256) + 1j * rng.normal(size=256)
    t = np.sum(np.abs(x) ** 2)
    f = np.sum(np.abs(fft(x)) ** 2) / 256
    assert abs(t - f) / t < 1e-9


def test_assemble_zero_symbol():
    out = assemble_symbol(np.zeros(52), np.zeros(4), CFG)
    assert out.shape == (80,)
    assert np.max(np.abs(out)) == 0


def test_assemble_cp_property():
    rng = np.random.default_rng(9)
    data = rng.normal(size=52) + 1j * rng.normal(size=52)
    out = assemble_symbol(data, default_pilots(CFG), CFG)
    assert np.array_equal(out[:16], out[64:80])


def test_assemble_energy_relation():
    # Exact bookkeeping: Parseval on the body plus the repeated CP tail.
    rng = np.random.default_rng(10)
    data = rng.normal(size=52) + 1j * rng.normal(size=52)
    grid = build_grid(data, default_pilots(CFG), CFG)
    out = assemble_symbol(data, default_pilots(CFG), CFG)
    e_body = np.sum(np.abs(grid) ** 2) / 64
    e_tail = np.sum(np.abs(out[64:]) ** 2)
    assert abs(np.sum(np.abs(out) ** 2) - (e_body + e_tail)) < 1e-12
    # and the spec's average scaling holds loosely for random grids
    assert np.sum(np.abs(out) ** 2) == pytest.approx(e_body * 80 / 64, rel=0.35)


def test_assemble_roundtrip_grid():
    rng = np.random.default_rng(11)
    data = rng.normal(size=52) + 1j * rng.normal(size=52)
    grid = build_grid(data, default_pilots(CFG), CFG)
    out = assemble_symbol(data, default_pilots(CFG), CFG)
    back = fft(remove_cp(out, CFG))
    assert np.max(np.abs(back - grid)) < 1e-9


def test_assemble_cardinality_errors():
    with pytest.raises(ValueError):
        assemble_symbol(np.zeros(51), np.zeros(4), CFG)
    with pytest.raises(ValueError):
        assemble_symbol(np.zeros(52), np.zeros(3), CFG)


def test_upsample_identity_g1():
    rng = np.random.default_rng(1)
    x = rng.normal(size=80) + 1j * rng.normal(size=80)
    assert np.array_equal(upsample_bandlimited(x, 1), x)


@pytest.mark.parametrize("g", [2, 4, 8])
def test_upsample_interpolates_through_samples(g):
    rng = np.random.default_rng(g)
    x = rng.normal(size=160) + 1j * rng.normal(size=160)
    up = upsample_bandlimited(x, g)
    assert up.size == g * x.size
    assert np.max(np.abs(up[::g] - x)) < 1e-9


def test_upsample_bad_factor():
    with pytest.raises(ValueError):
        upsample_bandlimited(np.ones(8), 3)


@pytest.mark.parametrize("g", [2, 4, 8])
@pytest.mark.parametrize("f0", [1, 7, -3, -26, 26])
def test_upsample_single_tone_polyphase_phase(g, f0):
    # Copy q of an upsampled single tone equals the base symbol rotated by
    # e^{+j 2 pi f0 q/(N G)}: evaluated directly from the complex exponential.
    n = 64
    grid = np.zeros(n, dtype=complex)
    grid[f0 % n] = 1.0
    base = ifft(grid)
    up = upsample_bandlimited(base, g)
    for q in range(g):
        copy = up[q::g]
        expected = base * np.exp(2j * np.pi * f0 * q / (n * g))
        assert np.max(np.abs(copy - expected)) < 1e-9


def test_fractional_delay_tone():
    n = 128
    k = 5
    x = np.exp(2j * np.pi * k * np.arange(n) / n)
    got = fractional_delay(x, 0.25)
    expected = np.exp(2j * np.pi * k * (np.arange(n) - 0.25) / n)
    assert np.max(np.abs(got - expected)) < 1e-9


def test_xcorr_locates_template():
    rng = np.random.default_rng(2)
    template = rng.normal(size=50) + 1j * rng.normal(size=50)
    stream = np.zeros(400, dtype=complex)
    stream[123:173] = template
    c = xcorr(stream, template)
    assert int(np.argmax(np.abs(c))) == 123
