"""Catalog of named hash algorithms usable by the CLI and harnesses.

Every entry knows its key size, digest size, how to hash one message,
and how to build a streaming hasher. Digests are rendered as lowercase
hex of the little-endian byte image (lane 0 first for 256-bit output).
A few deliberately bad "hashes" are included as harness controls.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from . import backends, highway, sip

# (kernel algo id, p1, p2) for the jit avalanche kernels; see _kernels.
KernelSpec = Tuple[int, int, int]


@dataclass(frozen=True)
class Algorithm:
    """One keyed hash exposed under a stable name."""

    name: str
    key_size: int
    digest_size: int
    hash64: Optional[Callable[[bytes, bytes], int]]
    digest: Callable[[bytes, bytes], bytes]
    make_hasher: Callable[[bytes], object]
    kernel: Optional[KernelSpec] = None
    #: Controls are intentionally weak/degenerate and excluded from vectors.
    control: bool = False

    def digest_hex(self, key: bytes, message: bytes) -> str:
        return self.digest(key, message).hex()


def _highway64(key: bytes, message: bytes) -> int:
    return backends.get_backend().hash64(highway.Key256.from_bytes(key), message)


def _highway256(key: bytes, message: bytes) -> Tuple[int, int, int, int]:
    return backends.get_backend().hash256(highway.Key256.from_bytes(key), message)


def _sip_fn(params: sip.SipParams, tree: bool) -> Callable[[bytes, bytes], int]:
    fn = sip.siptreehash if tree else sip.siphash
    return lambda key, msg: fn(sip.Key128.from_bytes(key), msg, params)


def _le64(value: int) -> bytes:
    return struct.pack("<Q", value & 0xFFFFFFFFFFFFFFFF)


class _First8Hasher:
    """Keeps the first 8 bytes; a maximally linear 'hash'."""

    def __init__(self):
        self._head = b""

    def append(self, chunk: bytes) -> "_First8Hasher":
        if len(self._head) < 8:
            self._head = (self._head + bytes(chunk))[:8]
        return self

    def finish(self) -> int:
        return int.from_bytes(self._head.ljust(8, b"\0"), "little")


def _first8(key: bytes, message: bytes) -> int:
    return int.from_bytes(message[:8].ljust(8, b"\0"), "little")


class _ConstantHasher:
    def append(self, chunk: bytes) -> "_ConstantHasher":
        return self

    def finish(self) -> int:
        return 0


class RandomOracle:
    """Fresh random output per query, ignoring the message entirely.

    Emulates a cryptographically secure generator masquerading as a
    hash; used to calibrate the avalanche noise floor. Deliberately not
    a deterministic function of its inputs.
    """

    def __init__(self, seed: int = 0):
        self._rng = np.random.Generator(np.random.Philox(seed))

    def __call__(self, key: bytes, message: bytes) -> int:
        return int(self._rng.integers(0, 1 << 64, dtype=np.uint64))


def _algorithms() -> dict:
    algos = {}

    def add(algo: Algorithm):
        algos[algo.name] = algo

    add(
        Algorithm(
            name="highway64",
            key_size=32,
            digest_size=8,
            hash64=_highway64,
            digest=lambda k, m: _le64(_highway64(k, m)),
            make_hasher=lambda k: highway.StreamingHasher(highway.Key256.from_bytes(k)),
            kernel=(0, 4, 0),
        )
    )

    class _Highway256Stream:
        def __init__(self, key: bytes):
            self._inner = highway.StreamingHasher(highway.Key256.from_bytes(key))

        def append(self, chunk):
            self._inner.append(chunk)
            return self

        def finish(self):
            return self._inner.finish(256)

    add(
        Algorithm(
            name="highway256",
            key_size=32,
            digest_size=32,
            hash64=None,
            digest=lambda k, m: highway.digest256_to_bytes(_highway256(k, m)),
            make_hasher=_Highway256Stream,
        )
    )

    for name, params, tree in (
        ("siphash24", sip.SIPHASH_24, False),
        ("siphash13", sip.SIPHASH_13, False),
        ("siptree24", sip.SIPHASH_24, True),
        ("siptree13", sip.SIPHASH_13, True),
    ):
        fn = _sip_fn(params, tree)
        hasher_cls = sip.SipTreeHasher if tree else sip.SipHasher
        add(
            Algorithm(
                name=name,
                key_size=16,
                digest_size=8,
                hash64=fn,
                digest=lambda k, m, fn=fn: _le64(fn(k, m)),
                make_hasher=lambda k, cls=hasher_cls, p=params: cls(
                    sip.Key128.from_bytes(k), p
                ),
                kernel=(2 if tree else 1, params.c, params.d),
            )
        )

    add(
        Algorithm(
            name="first8bytes",
            key_size=16,
            digest_size=8,
            hash64=_first8,
            digest=lambda k, m: _le64(_first8(k, m)),
            make_hasher=lambda k: _First8Hasher(),
            control=True,
        )
    )
    add(
        Algorithm(
            name="constant",
            key_size=16,
            digest_size=8,
            hash64=lambda k, m: 0,
            digest=lambda k, m: _le64(0),
            make_hasher=lambda k: _ConstantHasher(),
            control=True,
        )
    )
    return algos


ALGORITHMS = _algorithms()

#: Deterministic, non-control algorithms included in conformance vectors.
VECTOR_ALGORITHMS = ("highway64", "highway256", "siphash24", "siphash13", "siptree24", "siptree13")


def get_algorithm(name: str) -> Algorithm:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm: {name!r}") from None


def finalization_variant(rounds: int) -> Callable[[bytes, bytes], int]:
    """HighwayHash-64 with a non-default finalization depth."""
    return lambda key, msg: backends.get_backend().hash64(
        highway.Key256.from_bytes(key), msg, rounds
    )
