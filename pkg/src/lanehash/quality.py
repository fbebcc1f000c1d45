"""Statistical quality harness: avalanche bias, zero-input distribution,
and the finalization-depth experiment.

The avalanche protocol draws one key per sample and a fresh random
message per iteration, flips every input bit in turn (flip, hash,
restore), and tallies which output bits toggled. Per size, each sample
is reduced to its maximum cell bias and the median across samples is
retained. Randomness comes from a counter-mode Philox generator whose
period (> 2^250) comfortably exceeds the cube-root draw limit for the
requested iteration counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .registry import Algorithm

#: A generator with period p should not emit more than p^(1/3) numbers.
_MAX_DRAWS = 2 ** 85  # cube root of the Philox period (2^256)

#: Avalanche pass rule: every (median) bias below 1%.
DEFAULT_THRESHOLD = 0.01


@dataclass(frozen=True)
class HashUnderTest:
    """A named keyed hash mapping (key bytes, message bytes) -> uint64."""

    name: str
    key_size: int
    fn: Callable[[bytes, bytes], int]
    kernel: Optional[Tuple[int, int, int]] = None

    @classmethod
    def from_algorithm(cls, algo: Algorithm) -> "HashUnderTest":
        if algo.hash64 is None:
            raise ValueError(f"{algo.name} has no 64-bit digest")
        return cls(algo.name, algo.key_size, algo.hash64, algo.kernel)


@dataclass
class BiasMatrix:
    """Flip tallies for one sample: counts[input_bit][output_bit]."""

    size: int
    iterations: int
    counts: np.ndarray  # (8 * size, 64) int64

    def flip_rate(self) -> np.ndarray:
        return self.counts / self.iterations

    def bias(self) -> np.ndarray:
        return np.abs(self.flip_rate() - 0.5)

    def max_bias(self) -> float:
        return float(self.bias().max())


@dataclass
class BiasSummary:
    """Median-of-samples maximum bias for one input size."""

    size: int
    median_max_bias: float
    sample_count: int
    sample_maxima: Tuple[float, ...] = ()


@dataclass
class SizeVerdict:
    size: int
    median_max_bias: float
    threshold: float
    passed: bool
    noise_floor: float


@dataclass
class AvalancheReport:
    algorithm: str
    iterations: int
    samples: int
    seed: int
    verdicts: List[SizeVerdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def noise_floor(iterations: int) -> float:
    """Binomial sampling deviation limiting measurable bias."""
    return 0.5 / math.sqrt(iterations)


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _bias_counts(
    h: HashUnderTest, size: int, iterations: int, rng: np.random.Generator
) -> np.ndarray:
    """One sample: fixed key, fresh message per iteration."""
    key = rng.bytes(h.key_size)
    messages = rng.integers(0, 256, size=(iterations, size), dtype=np.uint8)
    if h.kernel is not None:
        try:
            from . import _kernels

            algo_id, p1, p2 = h.kernel
            lanes = np.zeros(4, dtype=np.uint64)
            lanes[: h.key_size // 8] = np.frombuffer(key, dtype=np.uint64)
            return _kernels.avalanche_counts(algo_id, lanes, messages, p1, p2)
        except ImportError:
            pass
    counts = np.zeros((8 * size, 64), dtype=np.int64)
    out_bits = np.arange(64, dtype=np.uint64)
    for row in messages:
        msg = bytearray(row.tobytes())
        base = h.fn(key, bytes(msg))
        for bit in range(8 * size):
            msg[bit >> 3] ^= 1 << (bit & 7)
            diff = h.fn(key, bytes(msg)) ^ base
            msg[bit >> 3] ^= 1 << (bit & 7)
            counts[bit] += ((np.uint64(diff) >> out_bits) & np.uint64(1)).astype(np.int64)
    return counts


def avalanche_bias(
    h: HashUnderTest, size: int, iterations: int, seed=0
) -> BiasMatrix:
    """Run one avalanche sample and return its flip-count matrix."""
    if not 4 <= size <= 32:
        raise ValueError("size must be in 4..32 bytes")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    draws = iterations * (size + 8)  # messages plus key material, in words
    if draws > _MAX_DRAWS:
        raise ValueError("iteration count exceeds the generator draw budget")
    return BiasMatrix(size, iterations, _bias_counts(h, size, iterations, _rng(seed)))


def median_bias(samples: Sequence[BiasMatrix]) -> BiasSummary:
    """Reduce samples to per-sample maxima and take their median."""
    if len(samples) < 3 or len(samples) % 2 == 0:
        raise ValueError("need an odd number of samples, at least 3")
    sizes = {s.size for s in samples}
    if len(sizes) != 1:
        raise ValueError("samples must share one input size")
    maxima = tuple(s.max_bias() for s in samples)
    return BiasSummary(
        size=samples[0].size,
        median_max_bias=float(np.median(maxima)),
        sample_count=len(samples),
        sample_maxima=maxima,
    )


def run_avalanche(
    h: HashUnderTest,
    sizes: Iterable[int] = range(4, 33),
    iterations: int = 20_000,
    samples: int = 5,
    seed: int = 0,
    threshold: float = DEFAULT_THRESHOLD,
) -> AvalancheReport:
    """Full protocol: per size, `samples` independent runs, median of maxima.

    Sample seeds are spawned deterministically from the master seed, so
    samples could be evaluated in any order (or in parallel) without
    changing the result.
    """
    report = AvalancheReport(h.name, iterations, samples, seed)
    floor = noise_floor(iterations)
    root = np.random.SeedSequence(seed)
    for size in sizes:
        seeds = root.spawn(samples)
        mats = [avalanche_bias(h, size, iterations, s) for s in seeds]
        summary = median_bias(mats)
        report.verdicts.append(
            SizeVerdict(
                size=size,
                median_max_bias=summary.median_max_bias,
                threshold=threshold,
                passed=summary.median_max_bias < threshold,
                noise_floor=floor,
            )
        )
    return report


@dataclass
class ZeroInputReport:
    """Digests of zero-filled messages of every length 0..max_size."""

    max_size: int
    collisions: List[Tuple[int, int]]
    bit_population: np.ndarray  # (64,) set-bit counts across digests

    @property
    def distinct(self) -> bool:
        return not self.collisions

    def imbalance(self) -> float:
        """Max deviation of any output bit's population from one half."""
        n = self.max_size + 1
        return float(np.abs(self.bit_population / n - 0.5).max())


def zero_input_distinctness(
    h: HashUnderTest, max_size: int, seed: int = 0
) -> ZeroInputReport:
    """Hash zero buffers of every length under one fixed random key."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    key = _rng(seed).bytes(h.key_size)
    seen: dict = {}
    collisions: List[Tuple[int, int]] = []
    population = np.zeros(64, dtype=np.int64)
    out_bits = np.arange(64, dtype=np.uint64)
    for length in range(max_size + 1):
        digest = h.fn(key, bytes(length))
        if digest in seen:
            collisions.append((seen[digest], length))
        else:
            seen[digest] = length
        population += ((np.uint64(digest) >> out_bits) & np.uint64(1)).astype(np.int64)
    return ZeroInputReport(max_size, collisions, population)


@dataclass
class FinalizationBias:
    rounds: int
    inputs: int
    exhaustive: bool
    max_bias: float
    mean_bias: float


def finalization_bias_experiment(
    rounds: int,
    inputs: int = 2 ** 20,
    seed: int = 0,
    exhaustive: bool = False,
) -> FinalizationBias:
    """Avalanche of a reduced-round HighwayHash over 3-byte messages.

    Enumerates either all 2^24 three-byte messages or a uniform sample
    of the declared size, flips each of the 24 input bits, and reports
    the maximum and mean per-cell bias.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    rng = _rng(seed)
    key = rng.bytes(32)
    if exhaustive:
        inputs = 2 ** 24
        raw = np.arange(inputs, dtype=np.uint32).view(np.uint8).reshape(-1, 4)
        messages = np.ascontiguousarray(raw[:, :3])
    else:
        messages = rng.integers(0, 256, size=(inputs, 3), dtype=np.uint8)
    try:
        from . import _kernels

        lanes = np.frombuffer(key, dtype=np.uint64).copy()
        counts = _kernels.avalanche_counts(0, lanes, messages, rounds, 0)
    except ImportError:
        from .registry import finalization_variant

        fn = finalization_variant(rounds)
        counts = np.zeros((24, 64), dtype=np.int64)
        out_bits = np.arange(64, dtype=np.uint64)
        for row in messages:
            msg = bytearray(row.tobytes())
            base = fn(key, bytes(msg))
            for bit in range(24):
                msg[bit >> 3] ^= 1 << (bit & 7)
                diff = fn(key, bytes(msg)) ^ base
                msg[bit >> 3] ^= 1 << (bit & 7)
                counts[bit] += ((np.uint64(diff) >> out_bits) & np.uint64(1)).astype(np.int64)
    bias = np.abs(counts / len(messages) - 0.5)
    return FinalizationBias(
        rounds=rounds,
        inputs=len(messages),
        exhaustive=exhaustive,
        max_bias=float(bias.max()),
        mean_bias=float(bias.mean()),
    )
