"""SipHash-c-d and the 4-lane interleaved tree variant.

SipHash follows the reference construction exactly (little-endian words,
length byte in the top byte of the final word). The tree variant
zero-pads the message to a 32-byte multiple, deinterleaves it into four
64-bit-word sub-streams, hashes each sub-stream independently, and folds
the four results with one more SipHash over their concatenation.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Tuple

_MASK64 = 0xFFFFFFFFFFFFFFFF

_IV0 = 0x736F6D6570736575
_IV1 = 0x646F72616E646F6D
_IV2 = 0x6C7967656E657261
_IV3 = 0x7465646279746573


class Key128:
    """128-bit SipHash key as two little-endian 64-bit words."""

    __slots__ = ("k0", "k1")

    def __init__(self, k0: int, k1: int):
        self.k0 = k0 & _MASK64
        self.k1 = k1 & _MASK64

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Key128":
        if len(raw) != 16:
            raise ValueError("Key128 requires exactly 16 bytes")
        return cls(*struct.unpack("<2Q", raw))

    @classmethod
    def from_hex(cls, text: str) -> "Key128":
        return cls.from_bytes(bytes.fromhex(text))

    def to_bytes(self) -> bytes:
        return struct.pack("<2Q", self.k0, self.k1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Key128) and (self.k0, self.k1) == (other.k0, other.k1)

    def __repr__(self) -> str:
        return f"Key128({self.to_bytes().hex()})"


@dataclass(frozen=True)
class SipParams:
    """Round counts: c per message word, d during finalization."""

    c: int = 2
    d: int = 4

    def __post_init__(self):
        if self.c < 1 or self.d < 1:
            raise ValueError("round counts must be positive")


SIPHASH_24 = SipParams(2, 4)
SIPHASH_13 = SipParams(1, 3)


def _rotl(x: int, b: int) -> int:
    return ((x << b) | (x >> (64 - b))) & _MASK64


def sip_round(state: Tuple[int, int, int, int]) -> Tuple[int, int, int, int]:
    """One ARX round on the four state words."""
    v0, v1, v2, v3 = state
    v0 = (v0 + v1) & _MASK64
    v1 = _rotl(v1, 13) ^ v0
    v0 = _rotl(v0, 32)
    v2 = (v2 + v3) & _MASK64
    v3 = _rotl(v3, 16) ^ v2
    v0 = (v0 + v3) & _MASK64
    v3 = _rotl(v3, 21) ^ v0
    v2 = (v2 + v1) & _MASK64
    v1 = _rotl(v1, 17) ^ v2
    v2 = _rotl(v2, 32)
    return (v0, v1, v2, v3)


def siphash(key: Key128, message: bytes, params: SipParams = SIPHASH_24) -> int:
    """SipHash-c-d 64-bit digest."""
    v = (_IV0 ^ key.k0, _IV1 ^ key.k1, _IV2 ^ key.k0, _IV3 ^ key.k1)
    n = len(message)
    full = n & ~7
    for off in range(0, full, 8):
        (m,) = struct.unpack_from("<Q", message, off)
        v = (v[0], v[1], v[2], v[3] ^ m)
        for _ in range(params.c):
            v = sip_round(v)
        v = (v[0] ^ m, v[1], v[2], v[3])
    tail = message[full:]
    m = int.from_bytes(tail, "little") | ((n & 0xFF) << 56)
    v = (v[0], v[1], v[2], v[3] ^ m)
    for _ in range(params.c):
        v = sip_round(v)
    v = (v[0] ^ m, v[1], v[2] ^ 0xFF, v[3])
    for _ in range(params.d):
        v = sip_round(v)
    return v[0] ^ v[1] ^ v[2] ^ v[3]


def deinterleave(message: bytes) -> Tuple[bytes, bytes, bytes, bytes]:
    """Zero-pad to a 32-byte multiple and split into 4 word sub-streams.

    Lane j receives the little-endian 64-bit words at stream indices
    4*i + j, re-serialized in order.
    """
    padded = message + bytes(-len(message) % 32)
    words = struct.unpack(f"<{len(padded) // 8}Q", padded)
    return tuple(
        struct.pack(f"<{len(words) // 4}Q", *words[j::4]) for j in range(4)
    )


def siptreehash(key: Key128, message: bytes, params: SipParams = SIPHASH_24) -> int:
    """Interleaved 4-lane tree hash folded with one more SipHash."""
    lanes = deinterleave(message)
    results = [siphash(key, lane, params) for lane in lanes]
    return siphash(key, struct.pack("<4Q", *results), params)


class SipHasher:
    """Incremental SipHash-c-d with an 8-byte carry buffer."""

    def __init__(self, key: Key128, params: SipParams = SIPHASH_24):
        self._key = key
        self._params = params
        self._v = (_IV0 ^ key.k0, _IV1 ^ key.k1, _IV2 ^ key.k0, _IV3 ^ key.k1)
        self._buffer = b""
        self._length = 0
        self._finished = False

    def _compress(self, m: int) -> None:
        v = self._v
        v = (v[0], v[1], v[2], v[3] ^ m)
        for _ in range(self._params.c):
            v = sip_round(v)
        self._v = (v[0] ^ m, v[1], v[2], v[3])

    def append(self, chunk: bytes) -> "SipHasher":
        if self._finished:
            raise RuntimeError("cannot append after finish")
        data = self._buffer + bytes(chunk)
        self._length += len(chunk)
        full = len(data) & ~7
        for off in range(0, full, 8):
            self._compress(struct.unpack_from("<Q", data, off)[0])
        self._buffer = data[full:]
        return self

    def finish(self) -> int:
        if self._finished:
            raise RuntimeError("finish may only be called once")
        self._finished = True
        m = int.from_bytes(self._buffer, "little") | ((self._length & 0xFF) << 56)
        self._compress(m)
        v = (self._v[0], self._v[1], self._v[2] ^ 0xFF, self._v[3])
        for _ in range(self._params.d):
            v = sip_round(v)
        return v[0] ^ v[1] ^ v[2] ^ v[3]


class SipTreeHasher:
    """Incremental 4-lane tree hash; buffers at most 31 pending bytes."""

    def __init__(self, key: Key128, params: SipParams = SIPHASH_24):
        self._key = key
        self._params = params
        self._lanes = [SipHasher(key, params) for _ in range(4)]
        self._buffer = b""
        self._finished = False

    def append(self, chunk: bytes) -> "SipTreeHasher":
        if self._finished:
            raise RuntimeError("cannot append after finish")
        data = self._buffer + bytes(chunk)
        full = len(data) & ~31
        for off in range(0, full, 32):
            for j in range(4):
                self._lanes[j].append(data[off + 8 * j : off + 8 * j + 8])
        self._buffer = data[full:]
        return self

    def finish(self) -> int:
        if self._finished:
            raise RuntimeError("finish may only be called once")
        if self._buffer:
            block = self._buffer + bytes(32 - len(self._buffer))
            for j in range(4):
                self._lanes[j].append(block[8 * j : 8 * j + 8])
            self._buffer = b""
        self._finished = True
        results = [lane.finish() for lane in self._lanes]
        return siphash(self._key, struct.pack("<4Q", *results), self._params)
