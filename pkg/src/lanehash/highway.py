"""Portable scalar HighwayHash: 1024-bit multiply-permute state machine.

This module is the correctness reference. Everything operates on plain
Python integers truncated to 64 bits, with packets interpreted as four
little-endian 64-bit lanes. A faster lane-vectorized backend lives in
``lanehash._highway_np`` and must agree bit-exactly with this one.
"""

from __future__ import annotations

import struct
from typing import Iterable, Sequence, Tuple

_MASK64 = 0xFFFFFFFFFFFFFFFF
_MASK32 = 0xFFFFFFFF

#: Initialization constants, four 64-bit lanes each (lane 0 first).
#: Derived from hexadecimal digits of pi, with one word adjusted so that
#: every bit position is covered by at least one lane of INIT0.
INIT0: Tuple[int, int, int, int] = (
    0xDBE6D5D5FE4CCE2F,
    0xA4093822299F31D0,
    0x13198A2E03707344,
    0x243F6A8885A308D3,
)
INIT1: Tuple[int, int, int, int] = (
    0x3BD39E10CB0EF593,
    0xC0ACF169B5F18A8C,
    0xBE5466CF34E90C6C,
    0x452821E638D01377,
)

#: Source offsets for the 16-byte zipper-merge permutation:
#: result byte i is taken from input byte ZIPPER_OFFSETS[i].
ZIPPER_OFFSETS: Tuple[int, ...] = (
    0x3, 0xC, 0x2, 0x5, 0xE, 0x1, 0xF, 0x0,
    0xB, 0x4, 0xA, 0xD, 0x9, 0x6, 0x8, 0x7,
)

State = Tuple[Tuple[int, int, int, int], ...]  # (v0, v1, mul0, mul1)


class Key256:
    """256-bit key held as four 64-bit little-endian lanes."""

    __slots__ = ("lanes",)

    def __init__(self, lanes: Sequence[int]):
        if len(lanes) != 4:
            raise ValueError("Key256 requires exactly 4 lanes")
        self.lanes = tuple(lane & _MASK64 for lane in lanes)

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Key256":
        if len(raw) != 32:
            raise ValueError("Key256 requires exactly 32 bytes")
        return cls(struct.unpack("<4Q", raw))

    @classmethod
    def from_hex(cls, text: str) -> "Key256":
        return cls.from_bytes(bytes.fromhex(text))

    def to_bytes(self) -> bytes:
        return struct.pack("<4Q", *self.lanes)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Key256) and self.lanes == other.lanes

    def __repr__(self) -> str:
        return f"Key256({self.to_bytes().hex()})"


def zipper_merge(half: bytes) -> bytes:
    """Apply the fixed byte permutation to one 16-byte lane pair."""
    if len(half) != 16:
        raise ValueError("zipper_merge operates on exactly 16 bytes")
    return bytes(half[off] for off in ZIPPER_OFFSETS)


def mul32(a: int, b: int) -> int:
    """Full 64-bit product of the lower 32 bits of each operand."""
    return ((a & _MASK32) * (b & _MASK32)) & _MASK64


def _zipper_lo(lo: int, hi: int) -> int:
    # Arithmetic form of zipper_merge for the low result lane of a pair;
    # equivalent to the byte-table permutation (see tests).
    return (
        (((lo & 0xFF000000) | (hi & 0xFF00000000)) >> 24)
        | (lo & 0xFF0000)
        | (((lo & 0xFF0000000000) | (hi & 0xFF000000000000)) >> 16)
        | ((lo & 0xFF00) << 32)
        | ((hi & 0xFF00000000000000) >> 8)
        | ((lo << 56) & _MASK64)
    )


def _zipper_hi(lo: int, hi: int) -> int:
    # High result lane of the pair.
    return (
        (((hi & 0xFF000000) | (lo & 0xFF00000000)) >> 24)
        | (hi & 0xFF0000)
        | ((hi & 0xFF0000000000) >> 16)
        | ((hi & 0xFF00) << 24)
        | ((lo & 0xFF000000000000) >> 8)
        | ((hi & 0xFF) << 48)
        | (lo & 0xFF00000000000000)
    )


def _rot32(x: int) -> int:
    return ((x >> 32) | (x << 32)) & _MASK64


def packet_lanes(packet: bytes) -> Tuple[int, int, int, int]:
    """View 32 bytes as four little-endian 64-bit lanes."""
    if len(packet) != 32:
        raise ValueError("packet must be exactly 32 bytes")
    return struct.unpack("<4Q", packet)


def initialize(key: Key256) -> State:
    """Expand a 256-bit key into the 1024-bit starting state."""
    k = key.lanes
    v0 = tuple((k[i] ^ INIT0[i]) for i in range(4))
    v1 = tuple((_rot32(k[i]) ^ INIT1[i]) for i in range(4))
    return (v0, v1, INIT0, INIT1)


def update(state: State, packet: Sequence[int]) -> State:
    """Fold one 32-byte packet (as four 64-bit lanes) into the state."""
    v0, v1, mul0, mul1 = state
    nv0 = list(v0)
    nv1 = list(v1)
    nm0 = list(mul0)
    nm1 = list(mul1)
    for i in range(4):
        nv1[i] = (nv1[i] + packet[i] + nm0[i]) & _MASK64
        nm0[i] ^= ((nv1[i] & _MASK32) * (nv0[i] >> 32)) & _MASK64
        nv0[i] = (nv0[i] + nm1[i]) & _MASK64
        nm1[i] ^= ((nv0[i] & _MASK32) * (nv1[i] >> 32)) & _MASK64
    nv0[0] = (nv0[0] + _zipper_lo(nv1[0], nv1[1])) & _MASK64
    nv0[1] = (nv0[1] + _zipper_hi(nv1[0], nv1[1])) & _MASK64
    nv0[2] = (nv0[2] + _zipper_lo(nv1[2], nv1[3])) & _MASK64
    nv0[3] = (nv0[3] + _zipper_hi(nv1[2], nv1[3])) & _MASK64
    nv1[0] = (nv1[0] + _zipper_lo(nv0[0], nv0[1])) & _MASK64
    nv1[1] = (nv1[1] + _zipper_hi(nv0[0], nv0[1])) & _MASK64
    nv1[2] = (nv1[2] + _zipper_lo(nv0[2], nv0[3])) & _MASK64
    nv1[3] = (nv1[3] + _zipper_hi(nv0[2], nv0[3])) & _MASK64
    return (tuple(nv0), tuple(nv1), tuple(nm0), tuple(nm1))


def update_inverse(state: State, packet: Sequence[int]) -> State:
    """Exact inverse of :func:`update` for the same packet."""
    v0, v1, mul0, mul1 = state
    nv0 = list(v0)
    nv1 = list(v1)
    nm0 = list(mul0)
    nm1 = list(mul1)
    nv1[0] = (nv1[0] - _zipper_lo(nv0[0], nv0[1])) & _MASK64
    nv1[1] = (nv1[1] - _zipper_hi(nv0[0], nv0[1])) & _MASK64
    nv1[2] = (nv1[2] - _zipper_lo(nv0[2], nv0[3])) & _MASK64
    nv1[3] = (nv1[3] - _zipper_hi(nv0[2], nv0[3])) & _MASK64
    nv0[0] = (nv0[0] - _zipper_lo(nv1[0], nv1[1])) & _MASK64
    nv0[1] = (nv0[1] - _zipper_hi(nv1[0], nv1[1])) & _MASK64
    nv0[2] = (nv0[2] - _zipper_lo(nv1[2], nv1[3])) & _MASK64
    nv0[3] = (nv0[3] - _zipper_hi(nv1[2], nv1[3])) & _MASK64
    for i in range(4):
        nm1[i] ^= ((nv0[i] & _MASK32) * (nv1[i] >> 32)) & _MASK64
        nv0[i] = (nv0[i] - nm1[i]) & _MASK64
        nm0[i] ^= ((nv1[i] & _MASK32) * (nv0[i] >> 32)) & _MASK64
        nv1[i] = (nv1[i] - packet[i] - nm0[i]) & _MASK64
    return (tuple(nv0), tuple(nv1), tuple(nm0), tuple(nm1))


def permute_lanes(v: Sequence[int]) -> Tuple[int, int, int, int]:
    """Swap the 128-bit halves and the 32-bit halves of each lane."""
    a, b, c, d = v
    return (_rot32(c), _rot32(d), _rot32(a), _rot32(b))


def update_remainder(state: State, tail: bytes) -> State:
    """Absorb the final 1..31 bytes plus the length-mod-32 injection."""
    r = len(tail)
    if not 1 <= r <= 31:
        raise ValueError("remainder length must be in 1..31")
    v0, v1, mul0, mul1 = state
    # Add r to each 32-bit half of every v0 lane, no carry across halves.
    nv0 = tuple(
        ((((lane >> 32) + r) & _MASK32) << 32) | (((lane & _MASK32) + r) & _MASK32)
        for lane in v0
    )
    # Rotate each 32-bit half of every v1 lane left by r bits.
    nv1 = tuple(
        (_rotl32((lane >> 32), r) << 32) | _rotl32(lane & _MASK32, r)
        for lane in v1
    )
    packet = remainder_packet(tail)
    return update((nv0, nv1, mul0, mul1), packet_lanes(packet))


def _rotl32(x: int, r: int) -> int:
    return ((x << r) | (x >> (32 - r))) & _MASK32


def remainder_packet(tail: bytes) -> bytes:
    """Build the 32-byte packet for a 1..31 byte remainder.

    Whole 4-byte groups are copied to the front; the 0..3 leftover bytes
    are packed little-endian into the most significant four packet bytes.
    """
    r = len(tail)
    if not 1 <= r <= 31:
        raise ValueError("remainder length must be in 1..31")
    whole = r & ~3
    packet = bytearray(32)
    packet[:whole] = tail[:whole]
    leftover = tail[whole:]
    packet[28 : 28 + len(leftover)] = leftover
    return bytes(packet)


def finalize(state: State, width: int = 64, rounds: int = 4):
    """Mix the state with permute-and-update rounds and emit the digest.

    Returns an int for width 64, a 4-tuple of lane ints for width 256.
    """
    if width not in (64, 256):
        raise ValueError("width must be 64 or 256")
    for _ in range(rounds):
        state = update(state, permute_lanes(state[0]))
    v0, v1, mul0, mul1 = state
    out = tuple((v0[i] + v1[i] + mul0[i] + mul1[i]) & _MASK64 for i in range(4))
    return out[0] if width == 64 else out


def _absorb(state: State, message: bytes) -> State:
    n = len(message)
    full = n & ~31
    for off in range(0, full, 32):
        state = update(state, struct.unpack_from("<4Q", message, off))
    if n != full:
        state = update_remainder(state, message[full:])
    return state


def hash64(key: Key256, message: bytes, rounds: int = 4) -> int:
    """One-shot 64-bit HighwayHash (scalar backend)."""
    return finalize(_absorb(initialize(key), message), 64, rounds)


def hash256(key: Key256, message: bytes, rounds: int = 4) -> Tuple[int, int, int, int]:
    """One-shot 256-bit HighwayHash as four 64-bit lanes."""
    return finalize(_absorb(initialize(key), message), 256, rounds)


class StreamingHasher:
    """Incremental HighwayHash; only the length mod 32 affects padding.

    Appending after :meth:`finish` is a contract violation and raises.
    """

    def __init__(self, key: Key256):
        self._state = initialize(key)
        self._buffer = b""
        self._finished = False

    def append(self, chunk: bytes) -> "StreamingHasher":
        if self._finished:
            raise RuntimeError("cannot append after finish")
        data = self._buffer + bytes(chunk)
        full = len(data) & ~31
        for off in range(0, full, 32):
            self._state = update(self._state, struct.unpack_from("<4Q", data, off))
        self._buffer = data[full:]
        return self

    def finish(self, width: int = 64):
        if self._finished:
            raise RuntimeError("finish may only be called once")
        self._finished = True
        state = self._state
        if self._buffer:
            state = update_remainder(state, self._buffer)
        return finalize(state, width)


def digest64_to_bytes(digest: int) -> bytes:
    """Little-endian byte image of a 64-bit digest (hex/vector format)."""
    return struct.pack("<Q", digest & _MASK64)


def digest256_to_bytes(digest: Iterable[int]) -> bytes:
    """Lane 0 first, each lane little-endian."""
    return struct.pack("<4Q", *(lane & _MASK64 for lane in digest))
