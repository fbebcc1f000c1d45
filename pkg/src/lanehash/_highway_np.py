"""Lane-vectorized HighwayHash backend built on numpy uint64 arrays.

Processes a whole batch of equal-length messages at once: the state is a
set of (n, 4) uint64 arrays and every operation maps onto elementwise
array arithmetic, mirroring the SIMD formulation. Bit-exact agreement
with :mod:`lanehash.highway` is enforced by tests.
"""

from __future__ import annotations

import struct

import numpy as np

from .highway import INIT0, INIT1, ZIPPER_OFFSETS, Key256

_M32 = np.uint64(0xFFFFFFFF)
_INIT0 = np.array(INIT0, dtype=np.uint64)
_INIT1 = np.array(INIT1, dtype=np.uint64)

# Byte gather index for zipper merge on a (n, 32) little-endian state
# image: both 16-byte halves permuted independently.
_ZIP32 = np.array(
    [off for off in ZIPPER_OFFSETS] + [16 + off for off in ZIPPER_OFFSETS],
    dtype=np.intp,
)


def _zipper(v: np.ndarray) -> np.ndarray:
    """Zipper-merge each row of a (n, 4) uint64 lane array."""
    raw = v.view(np.uint8).reshape(-1, 32)
    return raw[:, _ZIP32].copy().view(np.uint64).reshape(v.shape)


class BatchState:
    """HighwayHash state for n independent messages."""

    __slots__ = ("v0", "v1", "mul0", "mul1")

    def __init__(self, v0, v1, mul0, mul1):
        self.v0 = v0
        self.v1 = v1
        self.mul0 = mul0
        self.mul1 = mul1


def initialize(keys: np.ndarray) -> BatchState:
    """Expand (n, 4) uint64 key lanes into a batch state."""
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    rot = (keys >> np.uint64(32)) | (keys << np.uint64(32))
    return BatchState(
        v0=keys ^ _INIT0,
        v1=rot ^ _INIT1,
        mul0=np.broadcast_to(_INIT0, keys.shape).copy(),
        mul1=np.broadcast_to(_INIT1, keys.shape).copy(),
    )


def update(state: BatchState, packets: np.ndarray) -> None:
    """Fold one (n, 4) uint64 packet array into the state, in place."""
    v0, v1, mul0, mul1 = state.v0, state.v1, state.mul0, state.mul1
    v1 += packets
    v1 += mul0
    mul0 ^= (v1 & _M32) * (v0 >> np.uint64(32))
    v0 += mul1
    mul1 ^= (v0 & _M32) * (v1 >> np.uint64(32))
    v0 += _zipper(v1)
    v1 += _zipper(v0)


def permute_lanes(v0: np.ndarray) -> np.ndarray:
    rot = (v0 >> np.uint64(32)) | (v0 << np.uint64(32))
    return rot[:, [2, 3, 0, 1]]


def update_remainder(state: BatchState, tails: np.ndarray) -> None:
    """Absorb (n, r) uint8 tails, 1 <= r <= 31, in place."""
    r = tails.shape[1]
    if not 1 <= r <= 31:
        raise ValueError("remainder length must be in 1..31")
    rr = np.uint64(r)
    lo = (state.v0 & _M32) + rr
    hi = (state.v0 >> np.uint64(32)) + rr
    state.v0 = ((hi & _M32) << np.uint64(32)) | (lo & _M32)
    sh = np.uint64(r)
    inv = np.uint64(32 - r)
    lo = state.v1 & _M32
    hi = state.v1 >> np.uint64(32)
    lo = (((lo << sh) | (lo >> inv)) & _M32)
    hi = (((hi << sh) | (hi >> inv)) & _M32)
    state.v1 = (hi << np.uint64(32)) | lo
    n = tails.shape[0]
    packet = np.zeros((n, 32), dtype=np.uint8)
    whole = r & ~3
    packet[:, :whole] = tails[:, :whole]
    if r != whole:
        packet[:, 28 : 28 + (r - whole)] = tails[:, whole:]
    update(state, packet.view(np.uint64).reshape(n, 4))


def finalize(state: BatchState, width: int = 64, rounds: int = 4) -> np.ndarray:
    """Digest a batch state: (n,) uint64 or (n, 4) uint64."""
    if width not in (64, 256):
        raise ValueError("width must be 64 or 256")
    for _ in range(rounds):
        update(state, permute_lanes(state.v0))
    out = state.v0 + state.v1 + state.mul0 + state.mul1
    return out[:, 0] if width == 64 else out


def _key_lanes(key: Key256, n: int) -> np.ndarray:
    lanes = np.array(key.lanes, dtype=np.uint64)
    return np.broadcast_to(lanes, (n, 4)).copy()


def hash64_batch(
    key: Key256, messages: np.ndarray, rounds: int = 4
) -> np.ndarray:
    """Hash n equal-length messages given as a (n, length) uint8 array."""
    messages = np.ascontiguousarray(messages, dtype=np.uint8)
    n, length = messages.shape
    state = initialize(_key_lanes(key, n))
    full = length & ~31
    if full:
        packets = messages[:, :full].copy().view(np.uint64).reshape(n, -1, 4)
        for p in range(packets.shape[1]):
            update(state, packets[:, p, :])
    if length != full:
        update_remainder(state, messages[:, full:])
    return finalize(state, 64, rounds)


def hash64(key: Key256, message: bytes, rounds: int = 4) -> int:
    msg = np.frombuffer(bytes(message), dtype=np.uint8).reshape(1, -1)
    if len(message) == 0:
        msg = np.zeros((1, 0), dtype=np.uint8)
    return int(hash64_batch(key, msg, rounds)[0])


def hash256(key: Key256, message: bytes, rounds: int = 4):
    messages = np.frombuffer(bytes(message), dtype=np.uint8).reshape(1, -1)
    if len(message) == 0:
        messages = np.zeros((1, 0), dtype=np.uint8)
    n, length = messages.shape
    state = initialize(_key_lanes(key, n))
    full = length & ~31
    if full:
        packets = messages[:, :full].copy().view(np.uint64).reshape(n, -1, 4)
        for p in range(packets.shape[1]):
            update(state, packets[:, p, :])
    if length != full:
        update_remainder(state, messages[:, full:])
    out = finalize(state, 256, rounds)
    return tuple(int(x) for x in out[0])
