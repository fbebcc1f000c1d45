"""lanehash: HighwayHash and SipHash-family keyed hashing with
statistical-quality and micro-benchmark harnesses."""

from .backends import available_backends, get_backend, select_backend
from .highway import (
    Key256,
    StreamingHasher,
    digest64_to_bytes,
    digest256_to_bytes,
)
from .registry import ALGORITHMS, get_algorithm
from .sip import (
    SIPHASH_13,
    SIPHASH_24,
    Key128,
    SipHasher,
    SipParams,
    SipTreeHasher,
    siphash,
    siptreehash,
)

__version__ = "0.1.0"


def highway_hash64(key, message: bytes) -> int:
    """64-bit HighwayHash via the selected backend."""
    if not isinstance(key, Key256):
        key = Key256.from_bytes(key)
    return get_backend().hash64(key, message)


def highway_hash256(key, message: bytes):
    """256-bit HighwayHash (four 64-bit lanes) via the selected backend."""
    if not isinstance(key, Key256):
        key = Key256.from_bytes(key)
    return get_backend().hash256(key, message)


__all__ = [
    "ALGORITHMS",
    "Key128",
    "Key256",
    "SIPHASH_13",
    "SIPHASH_24",
    "SipHasher",
    "SipParams",
    "SipTreeHasher",
    "StreamingHasher",
    "available_backends",
    "digest256_to_bytes",
    "digest64_to_bytes",
    "get_algorithm",
    "get_backend",
    "highway_hash256",
    "highway_hash64",
    "select_backend",
    "siphash",
    "siptreehash",
]
