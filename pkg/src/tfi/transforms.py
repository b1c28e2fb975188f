"""FFT conventions, OFDM symbol assembly, and band-limited resampling.

Transform convention: forward is the unnormalized sum
X[l] = sum_n x[n] e^{-j2pi nl/N}; the inverse carries the 1/N factor, so
ifft(fft(x)) == x and Parseval reads sum|x|^2 == (1/N) sum|X|^2.
"""

from __future__ import annotations

import numpy as np

from .config import OfdmConfig, PILOT_VALUES


def _check_pow2(n: int):
    if n <= 0 or n & (n - 1):
        raise ValueError(f"transform length must be a power of two, got {n}")


def fft(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1] if n is None else n
    _check_pow2(n)
    if x.shape[-1] != n:
        raise ValueError(f"expected length {n}, got {x.shape[-1]}")
    return np.fft.fft(x, n=n, axis=-1)


def ifft(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1] if n is None else n
    _check_pow2(n)
    if x.shape[-1] != n:
        raise ValueError(f"expected length {n}, got {x.shape[-1]}")
    return np.fft.ifft(x, n=n, axis=-1)


def build_grid(data, pilots, cfg: OfdmConfig) -> np.ndarray:
    """Place data and pilot values on their FFT bins; DC and guards stay zero."""
    data = np.asarray(data, dtype=complex)
    pilots = np.asarray(pilots, dtype=complex)
    if data.size != len(cfg.data_subcarriers):
        raise ValueError(f"expected {len(cfg.data_subcarriers)} data values, got {data.size}")
    if pilots.size != len(cfg.pilot_subcarriers):
        raise ValueError(f"expected {len(cfg.pilot_subcarriers)} pilot values, got {pilots.size}")
    grid = np.zeros(cfg.num_subcarriers, dtype=complex)
    grid[cfg.bins(cfg.data_subcarriers)] = data
    grid[cfg.bins(cfg.pilot_subcarriers)] = pilots
    return grid


def add_cp(body, cp_len: int) -> np.ndarray:
    body = np.asarray(body)
    return np.concatenate([body[..., -cp_len:], body], axis=-1)


def remove_cp(symbol, cfg: OfdmConfig) -> np.ndarray:
    symbol = np.asarray(symbol)
    if symbol.shape[-1] != cfg.symbol_len:
        raise ValueError(f"expected {cfg.symbol_len} samples, got {symbol.shape[-1]}")
    return symbol[..., cfg.cp_len:]


def assemble_symbol(data, pilots, cfg: OfdmConfig) -> np.ndarray:
    """One time-domain OFDM symbol (CP + body) from data and pilot values."""
    grid = build_grid(data, pilots, cfg)
    return add_cp(ifft(grid), cfg.cp_len)


def default_pilots(cfg: OfdmConfig) -> np.ndarray:
    if len(cfg.pilot_subcarriers) != len(PILOT_VALUES):
        raise ValueError("pilot value table does not match pilot map")
    return PILOT_VALUES.astype(complex)


def upsample_bandlimited(x, g: int) -> np.ndarray:
    """Exact band-limited G-fold interpolation via spectral zero padding.

    The Nyquist bin's energy is split evenly between the two images so that
    every G-th output sample reproduces the corresponding input sample.
    """
    if g not in (1, 2, 4, 8):
        raise ValueError(f"unsupported oversampling factor {g}")
    x = np.asarray(x, dtype=complex)
    if g == 1:
        return x.copy()
    n = x.size
    spec = np.fft.fft(x)
    out = np.zeros(g * n, dtype=complex)
    h = n // 2
    if n % 2 == 0:
        out[:h] = spec[:h]
        out[h] = spec[h] / 2
        out[g * n - h] = spec[h] / 2
        out[g * n - h + 1:] = spec[h + 1:]
    else:
        out[: h + 1] = spec[: h + 1]
        out[g * n - h:] = spec[h + 1:]
    return g * np.fft.ifft(out)


def upsample_grid_symbol(grid, cfg: OfdmConfig, g: int) -> np.ndarray:
    """Oversampled OFDM symbol (CP + body at G*Fs) synthesized tone-exactly.

    Each occupied tone is generated at the high rate directly (equivalently:
    circular band-limited interpolation of the 64-sample body alone), so the
    cyclic-prefix identity and the tone phase structure hold to machine
    precision at every sampling phase. Used by the transmitter per symbol in
    place of whole-frame interpolation, which would smear symbol boundaries.
    """
    grid = np.asarray(grid, dtype=complex)
    f = cfg.num_subcarriers
    if grid.size != f:
        raise ValueError(f"expected a {f}-bin grid")
    body = ifft_oversampled(grid, f, g)
    return add_cp(body, cfg.cp_len * g)


def ifft_oversampled(grid, n: int, g: int) -> np.ndarray:
    """Length g*n inverse transform of an n-bin grid (1/n scaling preserved)."""
    if g == 1:
        return ifft(grid, n)
    big = np.zeros(g * n, dtype=complex)
    h = n // 2
    grid = np.asarray(grid, dtype=complex)
    big[:h] = grid[:h]
    big[h] = grid[h] / 2
    big[g * n - h] = grid[h] / 2
    big[g * n - h + 1:] = grid[h + 1:]
    # g * ifft_{gn} keeps the 1/n tone scaling of the base-rate inverse.
    return g * np.fft.ifft(big)


def fractional_delay(x, tau: float) -> np.ndarray:
    """Delay a sequence by a fractional number of samples (circular, band-limited)."""
    x = np.asarray(x, dtype=complex)
    if tau == 0:
        return x.copy()
    n = x.size
    k = np.fft.fftfreq(n, d=1.0) * n  # signed bin indices
    return np.fft.ifft(np.fft.fft(x) * np.exp(-2j * np.pi * k * tau / n))


def xcorr(stream, template) -> np.ndarray:
    """Sliding correlation c[m] = sum_i conj(template[i]) stream[m+i] via FFT."""
    stream = np.asarray(stream, dtype=complex)
    template = np.asarray(template, dtype=complex)
    n = stream.size
    t = template.size
    if t > n:
        raise ValueError("template longer than stream")
    size = 1 << int(np.ceil(np.log2(n + t)))
    spec = np.fft.fft(stream, size) * np.conj(np.fft.fft(template, size))
    full = np.fft.ifft(spec)
    return full[: n - t + 1]
