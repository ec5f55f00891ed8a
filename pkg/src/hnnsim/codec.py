"""Bit-exact wire formats: the 35-bit NoC packet and the 38-bit EMIO frame.

Packet layout, MSB first::

    dx(9, two's complement) | dy(9, two's complement) | ptype(1) | axon(8) | payload(8)

A frame prepends a 3-bit routing tag to a packet. Frames are serialized
back to back with no gaps, MSB first.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

DX_BITS = DY_BITS = 9
PTYPE_BITS = 1
AXON_BITS = 8
PAYLOAD_BITS = 8
TAG_BITS = 3

PACKET_BITS = DX_BITS + DY_BITS + PTYPE_BITS + AXON_BITS + PAYLOAD_BITS
FRAME_BITS = TAG_BITS + PACKET_BITS

PTYPE_ARTIFICIAL = 0
PTYPE_SPIKING = 1

_PAYLOAD_SHIFT = 0
_AXON_SHIFT = PAYLOAD_BITS
_PTYPE_SHIFT = _AXON_SHIFT + AXON_BITS
_DY_SHIFT = _PTYPE_SHIFT + PTYPE_BITS
_DX_SHIFT = _DY_SHIFT + DY_BITS

_D_MIN = -(1 << (DX_BITS - 1))
_D_MAX = (1 << (DX_BITS - 1)) - 1
_D_MASK = (1 << DX_BITS) - 1


class FieldRangeError(ValueError):
    pass


class FrameAlignmentError(ValueError):
    pass


def _check(name: str, value: int, lo: int, hi: int) -> None:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or not lo <= value <= hi:
        raise FieldRangeError(f"{name}={value!r} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class NocPacket:
    dx: int
    dy: int
    ptype: int
    axon: int
    payload: int

    def __post_init__(self):
        _check("dx", self.dx, _D_MIN, _D_MAX)
        _check("dy", self.dy, _D_MIN, _D_MAX)
        _check("ptype", self.ptype, 0, 1)
        _check("axon", self.axon, 0, (1 << AXON_BITS) - 1)
        _check("payload", self.payload, 0, (1 << PAYLOAD_BITS) - 1)
        if self.ptype == PTYPE_SPIKING and self.payload >> 4:
            raise FieldRangeError(
                f"spike payload carries a 4-bit tick; upper bits must be zero, got {self.payload:#04x}"
            )

    @classmethod
    def spike(cls, dx: int, dy: int, axon: int, tick: int) -> "NocPacket":
        _check("tick", tick, 0, 15)
        return cls(dx, dy, PTYPE_SPIKING, axon, tick)

    @property
    def tick(self) -> int | None:
        return self.payload & 0xF if self.ptype == PTYPE_SPIKING else None


def encode_packet(p: NocPacket) -> int:
    return (
        (p.dx & _D_MASK) << _DX_SHIFT
        | (p.dy & _D_MASK) << _DY_SHIFT
        | p.ptype << _PTYPE_SHIFT
        | p.axon << _AXON_SHIFT
        | p.payload
    )


def _signed9(v: int) -> int:
    return v - (1 << DX_BITS) if v & (1 << (DX_BITS - 1)) else v


def decode_packet(word: int) -> NocPacket:
    if not 0 <= word < (1 << PACKET_BITS):
        raise FieldRangeError(f"word {word:#x} wider than {PACKET_BITS} bits")
    return NocPacket(
        dx=_signed9((word >> _DX_SHIFT) & _D_MASK),
        dy=_signed9((word >> _DY_SHIFT) & _D_MASK),
        ptype=(word >> _PTYPE_SHIFT) & 1,
        axon=(word >> _AXON_SHIFT) & 0xFF,
        payload=word & 0xFF,
    )


def encode_packets(dx, dy, ptype, axon, payload) -> np.ndarray:
    """Vectorized ``encode_packet`` over equal-length integer arrays."""
    dx, dy, ptype, axon, payload = (np.asarray(a, dtype=np.int64) for a in (dx, dy, ptype, axon, payload))
    bad = (
        (dx < _D_MIN) | (dx > _D_MAX) | (dy < _D_MIN) | (dy > _D_MAX)
        | (ptype < 0) | (ptype > 1) | (axon < 0) | (axon > 255)
        | (payload < 0) | (payload > 255) | ((ptype == 1) & (payload > 15))
    )
    if bad.any():
        i = int(np.argmax(bad))
        raise FieldRangeError(f"packet {i} has an out-of-range field")
    return (
        (dx & _D_MASK) << _DX_SHIFT
        | (dy & _D_MASK) << _DY_SHIFT
        | ptype << _PTYPE_SHIFT
        | axon << _AXON_SHIFT
        | payload
    )


def decode_packets(words) -> tuple[np.ndarray, ...]:
    """Vectorized ``decode_packet``; returns (dx, dy, ptype, axon, payload)."""
    w = np.asarray(words, dtype=np.int64)
    if ((w < 0) | (w >> PACKET_BITS != 0)).any():
        raise FieldRangeError(f"word wider than {PACKET_BITS} bits")

    def signed(v):
        return np.where(v & (1 << (DX_BITS - 1)), v - (1 << DX_BITS), v)

    return (
        signed((w >> _DX_SHIFT) & _D_MASK),
        signed((w >> _DY_SHIFT) & _D_MASK),
        (w >> _PTYPE_SHIFT) & 1,
        (w >> _AXON_SHIFT) & 0xFF,
        w & 0xFF,
    )


@dataclass(frozen=True)
class EmioFrame:
    tag: int
    packet: NocPacket

    def __post_init__(self):
        _check("tag", self.tag, 0, (1 << TAG_BITS) - 1)


def encode_frame(f: EmioFrame) -> int:
    return f.tag << PACKET_BITS | encode_packet(f.packet)


def decode_frame(word: int) -> EmioFrame:
    if not 0 <= word < (1 << FRAME_BITS):
        raise FieldRangeError(f"word {word:#x} wider than {FRAME_BITS} bits")
    return EmioFrame(word >> PACKET_BITS, decode_packet(word & ((1 << PACKET_BITS) - 1)))


@dataclass(frozen=True)
class BitStream:
    """A bit sequence held as one big-endian integer plus its length."""

    nbits: int
    value: int = 0

    def __post_init__(self):
        if self.nbits < 0 or self.value < 0 or self.value >> self.nbits:
            raise ValueError("value does not fit in nbits")

    def __len__(self) -> int:
        return self.nbits

    def bits(self) -> str:
        return format(self.value, f"0{self.nbits}b") if self.nbits else ""

    def truncated(self, nbits: int) -> "BitStream":
        """Keep the first ``nbits`` bits."""
        return BitStream(nbits, self.value >> (self.nbits - nbits))

    def to_bytes(self) -> bytes:
        """Packed MSB-first; the last byte is zero-padded on the right."""
        pad = -self.nbits % 8
        return (self.value << pad).to_bytes((self.nbits + pad) // 8, "big")


def emio_serialize(frames) -> BitStream:
    value = 0
    n = 0
    for f in frames:
        value = value << FRAME_BITS | encode_frame(f)
        n += 1
    return BitStream(n * FRAME_BITS, value)


def emio_deserialize(stream: BitStream) -> list[EmioFrame]:
    if stream.nbits % FRAME_BITS:
        raise FrameAlignmentError(
            f"{stream.nbits} bits is not a whole number of {FRAME_BITS}-bit frames"
        )
    mask = (1 << FRAME_BITS) - 1
    count = stream.nbits // FRAME_BITS
    return [
        decode_frame((stream.value >> (FRAME_BITS * (count - 1 - i))) & mask)
        for i in range(count)
    ]


def write_bitstream(path: str | Path, frames) -> int:
    data = emio_serialize(frames).to_bytes()
    Path(path).write_bytes(data)
    return len(data)


def read_bitstream(path: str | Path) -> list[EmioFrame]:
    """Inverse of ``write_bitstream``; byte padding is always shorter than a frame."""
    data = Path(path).read_bytes()
    total = len(data) * 8
    count = total // FRAME_BITS
    pad = total - count * FRAME_BITS
    if pad >= 8:
        raise FrameAlignmentError(f"{len(data)} bytes do not hold a whole number of frames")
    value = int.from_bytes(data, "big")
    if value & ((1 << pad) - 1):
        raise FrameAlignmentError("nonzero bits after the last frame")
    return emio_deserialize(BitStream(count * FRAME_BITS, value >> pad))
