"""Cross-language conformance vectors.

One record per line: ``algo,key_hex,message_hex,digest_hex``. Keys are
the fixed byte ramp 00 01 02 ..., messages are the byte ramp of the
given length, digests are lowercase hex of the little-endian byte image
(lane 0 first for 256-bit output).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, TextIO, Tuple

from .registry import VECTOR_ALGORITHMS, get_algorithm

#: Message lengths pinned by the conformance file: every remainder path
#: up to two packets, plus a few larger sizes.
DEFAULT_LENGTHS: Tuple[int, ...] = tuple(range(65)) + (256, 1023, 1024)


@dataclass(frozen=True)
class VectorRecord:
    algo: str
    key_hex: str
    message_hex: str
    digest_hex: str

    def to_line(self) -> str:
        return f"{self.algo},{self.key_hex},{self.message_hex},{self.digest_hex}"

    @classmethod
    def from_line(cls, line: str) -> "VectorRecord":
        parts = line.strip().split(",")
        if len(parts) != 4:
            raise ValueError(f"malformed vector line: {line!r}")
        return cls(*parts)


def ramp(n: int) -> bytes:
    return bytes(i & 0xFF for i in range(n))


def generate(
    algos: Sequence[str] = VECTOR_ALGORITHMS,
    lengths: Iterable[int] = DEFAULT_LENGTHS,
) -> List[VectorRecord]:
    records = []
    lengths = list(lengths)
    for name in algos:
        algo = get_algorithm(name)
        key = ramp(algo.key_size)
        for n in lengths:
            message = ramp(n)
            records.append(
                VectorRecord(name, key.hex(), message.hex(), algo.digest_hex(key, message))
            )
    return records


def write(records: Iterable[VectorRecord], stream: TextIO) -> None:
    for record in records:
        stream.write(record.to_line() + "\n")


def read(stream: TextIO) -> List[VectorRecord]:
    return [
        VectorRecord.from_line(line)
        for line in stream
        if line.strip() and not line.startswith("#")
    ]


def verify(records: Iterable[VectorRecord]) -> List[VectorRecord]:
    """Re-hash every record; returns the ones that do not reproduce."""
    failures = []
    for record in records:
        algo = get_algorithm(record.algo)
        key = bytes.fromhex(record.key_hex)
        message = bytes.fromhex(record.message_hex)
        if algo.digest_hex(key, message) != record.digest_hex:
            failures.append(record)
    return failures
