"""Gray-coded constellations (BPSK/QPSK/16QAM/64QAM) and hard demapping.

All constellations are normalized to unit mean symbol energy. Square QAM
uses per-axis Gray labels with the first half of the bit group on I and
the second half on Q; BPSK maps label 0 -> -1, label 1 -> +1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

_GRAY_AXIS = {
    1: {0: -1, 1: +1},
    2: {0b00: -3, 0b01: -1, 0b11: +1, 0b10: +3},
    3: {0b000: -7, 0b001: -5, 0b011: -3, 0b010: -1,
        0b110: +1, 0b111: +3, 0b101: +5, 0b100: +7},
}


@dataclass(frozen=True)
class Constellation:
    name: str
    bits_per_symbol: int
    points: np.ndarray  # points[label], label = bit group read MSB-first

    def __post_init__(self):
        if len(self.points) != 1 << self.bits_per_symbol:
            raise ValueError("point count must be 2^bits_per_symbol")


def _build(name: str, bits: int) -> Constellation:
    m = 1 << bits
    points = np.empty(m, dtype=complex)
    if bits == 1:
        for label in range(m):
            points[label] = _GRAY_AXIS[1][label]
    else:
        half = bits // 2
        axis = _GRAY_AXIS[half]
        for label in range(m):
            i_bits = label >> half
            q_bits = label & ((1 << half) - 1)
            points[label] = axis[i_bits] + 1j * axis[q_bits]
    points /= np.sqrt(np.mean(np.abs(points) ** 2))
    return Constellation(name, bits, points)


CONSTELLATIONS = {
    "bpsk": _build("bpsk", 1),
    "qpsk": _build("qpsk", 2),
    "qam16": _build("qam16", 4),
    "qam64": _build("qam64", 6),
}


def get_constellation(scheme) -> Constellation:
    if isinstance(scheme, Constellation):
        return scheme
    try:
        return CONSTELLATIONS[str(scheme).lower()]
    except KeyError:
        raise ValueError(f"unknown modulation scheme {scheme!r}") from None


def map_bits(bits, scheme) -> np.ndarray:
    """Map a bit sequence to constellation points, one per bit group."""
    c = get_constellation(scheme)
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size % c.bits_per_symbol:
        raise ValueError(
            f"partial symbol: {bits.size} bits is not a multiple of {c.bits_per_symbol}"
        )
    groups = bits.reshape(-1, c.bits_per_symbol)
    weights = 1 << np.arange(c.bits_per_symbol - 1, -1, -1)
    labels = groups @ weights
    return c.points[labels]


def demap_nearest(samples, scheme) -> np.ndarray:
    """Hard-decide each sample to the Euclidean-nearest point; return bits.

    Ties break toward the lowest label (argmin keeps the first minimum).
    """
    c = get_constellation(scheme)
    samples = np.asarray(samples, dtype=complex).ravel()
    if not np.all(np.isfinite(samples)):
        raise ValueError("samples must be finite")
    labels = demap_labels(samples, c)
    shifts = np.arange(c.bits_per_symbol - 1, -1, -1)
    return ((labels[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def demap_labels(samples, c: Constellation) -> np.ndarray:
    return _kernels.nearest_labels(np.asarray(samples, dtype=complex).ravel(), c.points)
