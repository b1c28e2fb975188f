"""Pure-numpy implementations of the hot kernels (fallback path)."""

from __future__ import annotations

import numpy as np


def detector_stats(y, d: int, energy_window: int, corr_window: int):
    """Trailing-window detection statistics for every sample index.

    ratio[n]  = |sum_{k<W} y[n-k] conj(y[n-k-d])| / max(e_del[n], e_cur[n])
                with e_del[n] = sum_{k<W} |y[n-k-d]|^2 (the delayed window)
                and  e_cur[n] = sum_{k<W} |y[n-k]|^2;
    energy[n] = sum_{k<L} |y[n-k]|^2.
    Normalizing by the larger of the two window energies keeps the ratio
    bounded by ~1 and stops signal-times-noise cross terms from spiking it
    at the frame edge. Samples before the stream start count as zero; the
    ratio is 0 where the denominator vanishes.
    """
    y = np.asarray(y, dtype=np.complex128)
    n = y.size
    prod = np.zeros(n, dtype=np.complex128)
    if n > d:
        prod[d:] = y[d:] * np.conj(y[:-d])
    power = np.abs(y) ** 2

    def trailing(x, w):
        c = np.cumsum(x)
        out = c.copy()
        out[w:] = c[w:] - c[:-w]
        return out

    corr = np.abs(trailing(prod, corr_window))
    e_cur = trailing(power, corr_window)
    e_del = np.zeros(n)
    if n > d:
        e_del[d:] = e_cur[:-d]
    denom = np.maximum(e_del, e_cur)
    energy = trailing(power, energy_window)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(denom > 0, corr / denom, 0.0)
    return ratio, energy


def nearest_labels(samples, points) -> np.ndarray:
    """Index of the Euclidean-nearest point per sample (ties -> lowest index)."""
    samples = np.asarray(samples, dtype=np.complex128).ravel()
    points = np.asarray(points, dtype=np.complex128).ravel()
    d2 = np.abs(samples[:, None] - points[None, :]) ** 2
    return np.argmin(d2, axis=1).astype(np.int64)
