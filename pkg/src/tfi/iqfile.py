"""Self-describing IQ capture files for offline replay.

Little-endian layout:
  magic "TFIQ" (4 bytes) | version u16 (=1) | sample rate f64 Hz |
  overclock u16 | reserved (16 bytes) | sample count u64 |
  interleaved float32 I/Q pairs.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"TFIQ"
VERSION = 1
_HEADER = struct.Struct("<4sHdH16xQ")


class IqFormatError(ValueError):
    pass


@dataclass(frozen=True)
class IqMeta:
    sample_rate: float
    overclock: int


def write_iq_capture(stream, meta: IqMeta, path) -> None:
    stream = np.asarray(stream, dtype=np.complex64)
    header = _HEADER.pack(MAGIC, VERSION, float(meta.sample_rate),
                          int(meta.overclock), stream.size)
    body = np.empty(2 * stream.size, dtype="<f4")
    body[0::2] = stream.real
    body[1::2] = stream.imag
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(body.tobytes())


def read_iq_capture(path) -> tuple[np.ndarray, IqMeta]:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise IqFormatError("truncated IQ capture: header incomplete")
    magic, version, rate, overclock, count = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise IqFormatError("not an IQ capture (bad magic)")
    if version != VERSION:
        raise IqFormatError(f"unsupported IQ capture version {version}")
    expected = _HEADER.size + 8 * count
    if len(raw) < expected:
        raise IqFormatError(
            f"truncated IQ capture: expected {expected} bytes, got {len(raw)}")
    body = np.frombuffer(raw, dtype="<f4", count=2 * count, offset=_HEADER.size)
    stream = body[0::2].astype(np.complex64)
    stream = stream + 1j * body[1::2].astype(np.float32)
    return stream.astype(np.complex64), IqMeta(sample_rate=rate, overclock=overclock)
