"""Robust micro-benchmark harness: interleaved sizes, mode/median estimate.

Measurements for different input sizes are taken in a randomly
interleaved order (deterministic per seed) to avoid unrealistic branch
prediction. Per run, the per-size tick samples are reduced with the
mode after binning to half the timer resolution; the median of the
per-run modes across runs is the final estimate. Absolute numbers are
machine-specific and the report carries a fingerprint saying so.
"""

from __future__ import annotations

import platform
import statistics
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .registry import Algorithm

PRESETS: Dict[str, Tuple[int, ...]] = {
    # Per-size set used for the cycles-per-byte comparison table.
    "table1": (8, 31, 32, 63, 64, 1024),
    # 32*i + {0, 9, 18, 27}: every packet-fill phase, small-size sweep.
    "fig1": tuple(
        sorted(32 * i + off for i in range(13) for off in (0, 9, 18, 27) if 32 * i + off > 0)
    ),
}

DEFAULT_RUNS = 9


@dataclass(frozen=True)
class Measurement:
    """One timed (possibly batched) hash invocation."""

    size: int
    ticks: float  # timer units per single invocation
    batch: int = 1  # invocations aggregated when the timer is coarse


@dataclass
class ThroughputEstimate:
    size: int
    ticks_per_byte: float
    dispersion: float  # mean absolute deviation of per-invocation ticks
    sample_count: int

    @property
    def bytes_per_tick(self) -> float:
        return 1.0 / self.ticks_per_byte if self.ticks_per_byte else float("inf")


class DigestSink:
    """Folds every digest into a running checksum so work cannot be elided.

    Present on every measurement path; there is no way to switch it off.
    """

    def __init__(self):
        self.value = 0
        self.consumed = 0

    def consume(self, digest: int) -> None:
        self.value ^= digest
        self.consumed += 1


def timer_resolution(timer: Callable[[], int] = time.perf_counter_ns) -> float:
    """Smallest observable positive timer delta, in timer units."""
    best = float("inf")
    for _ in range(200):
        a = timer()
        b = timer()
        while b == a:
            b = timer()
        best = min(best, b - a)
    return float(best)


def _calibrate_batch(
    invoke: Callable[[], int], timer: Callable[[], int], resolution: float
) -> int:
    """Batch invocations until one timed region spans >= 100 resolutions."""
    batch = 1
    while batch < 1 << 20:
        t0 = timer()
        for _ in range(batch):
            invoke()
        elapsed = timer() - t0
        if elapsed >= 100 * resolution:
            return batch
        batch *= 2
    return batch


class _Probe:
    """Prepared invocation target: one buffer, one key, one batch factor."""

    def __init__(
        self,
        algo: Algorithm,
        size: int,
        seed: int,
        timer: Callable[[], int],
        sink: DigestSink,
        resolution: float,
    ):
        if size < 1:
            raise ValueError("size must be >= 1")
        rng = np.random.Generator(np.random.Philox(seed))
        self.size = size
        self.key = rng.bytes(algo.key_size)
        buf = bytearray(size)
        # Only the first 8 bytes are initialized; the rest stays zero.
        buf[: min(8, size)] = rng.bytes(min(8, size))
        self.message = bytes(buf)
        self.hash_fn = algo.hash64 or (
            lambda k, m: int.from_bytes(algo.digest(k, m)[:8], "little")
        )
        self.timer = timer
        self.sink = sink
        self.batch = _calibrate_batch(self._invoke, timer, resolution)

    def _invoke(self) -> None:
        self.sink.consume(self.hash_fn(self.key, self.message))

    def measure(self) -> Measurement:
        timer = self.timer
        invoke = self._invoke
        t0 = timer()
        for _ in range(self.batch):
            invoke()
        ticks = (timer() - t0) / self.batch
        return Measurement(size=self.size, ticks=ticks, batch=self.batch)


def measure_one(
    algo: Algorithm,
    size: int,
    reps: int,
    seed: int = 0,
    timer: Callable[[], int] = time.perf_counter_ns,
    sink: DigestSink | None = None,
) -> List[Measurement]:
    """Time `reps` invocations of the algorithm on one buffer of `size`.

    The buffer is allocated once, with only its first 8 bytes
    initialized; every digest is fed to the sink.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    sink = sink or DigestSink()
    probe = _Probe(algo, size, seed, timer, sink, timer_resolution(timer))
    return [probe.measure() for _ in range(reps)]


def robust_estimate(
    samples: Sequence[Measurement], resolution: float = 1.0
) -> ThroughputEstimate:
    """Mode of half-resolution-binned ticks, with mean absolute deviation."""
    if len(samples) < 9:
        raise ValueError("robust_estimate needs at least 9 samples")
    sizes = {m.size for m in samples}
    if len(sizes) != 1:
        raise ValueError("samples must share one input size")
    size = samples[0].size
    half = max(resolution / 2.0, 1e-9)
    binned = Counter(round(m.ticks / half) for m in samples)
    top = max(binned.values())
    # Deterministic tie break: smallest tick value among equally common bins.
    mode = min(b for b, c in binned.items() if c == top) * half
    mad = sum(abs(m.ticks - mode) for m in samples) / len(samples)
    return ThroughputEstimate(
        size=size,
        ticks_per_byte=mode / size,
        dispersion=mad,
        sample_count=len(samples),
    )


@dataclass
class BenchReport:
    algorithm: str
    timer: str
    resolution: float
    backend: str
    machine: str
    runs: int
    estimates: List[ThroughputEstimate] = field(default_factory=list)


def sweep(
    algo: Algorithm,
    sizes: Iterable[int],
    reps: int = 30,
    runs: int = DEFAULT_RUNS,
    seed: int = 0,
    timer: Callable[[], int] = time.perf_counter_ns,
) -> BenchReport:
    """Per-size throughput table with randomized size interleaving.

    Each outer run measures every (size, rep) slot in a shuffled order
    and is reduced to a per-size mode; the median across runs wins.
    """
    sizes = list(sizes)
    if not sizes:
        raise ValueError("need at least one size")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    from . import backends

    resolution = timer_resolution(timer)
    rng = np.random.Generator(np.random.Philox(seed))
    sink = DigestSink()
    probes = {
        s: _Probe(algo, s, seed + i, timer, sink, resolution)
        for i, s in enumerate(sizes)
    }
    per_size_modes: Dict[int, List[float]] = {s: [] for s in sizes}
    per_size_all: Dict[int, List[Measurement]] = {s: [] for s in sizes}
    for run in range(runs):
        schedule = np.repeat(np.arange(len(sizes)), reps)
        rng.shuffle(schedule)
        collected: Dict[int, List[Measurement]] = {s: [] for s in sizes}
        # One measured invocation (possibly batched) per schedule slot.
        for idx in schedule:
            size = sizes[int(idx)]
            collected[size].append(probes[size].measure())
        for size in sizes:
            est = robust_estimate(collected[size], resolution)
            per_size_modes[size].append(est.ticks_per_byte * size)
            per_size_all[size].extend(collected[size])
    report = BenchReport(
        algorithm=algo.name,
        timer="perf_counter_ns",
        resolution=resolution,
        backend=backends.get_backend().name,
        machine=platform.platform(),
        runs=runs,
    )
    for size in sizes:
        mode_ticks = statistics.median(per_size_modes[size])
        all_samples = per_size_all[size]
        mad = sum(abs(m.ticks - mode_ticks) for m in all_samples) / len(all_samples)
        report.estimates.append(
            ThroughputEstimate(
                size=size,
                ticks_per_byte=mode_ticks / size,
                dispersion=mad,
                sample_count=len(all_samples),
            )
        )
    if sink.consumed == 0:
        raise RuntimeError("sink never consumed a digest")  # pragma: no cover
    return report


def format_report(report: BenchReport, machine_readable: bool = False) -> str:
    """Aligned text table, or `algo,size,...` rows for machines."""
    lines: List[str] = []
    if machine_readable:
        for e in report.estimates:
            lines.append(
                f"{report.algorithm},{e.size},{e.ticks_per_byte:.4f},"
                f"{e.bytes_per_tick:.6f},{e.dispersion:.2f},{e.sample_count}"
            )
        return "\n".join(lines)
    lines.append(
        f"# {report.algorithm} backend={report.backend} timer={report.timer}"
        f" resolution={report.resolution:.0f} machine={report.machine}"
    )
    lines.append(f"{'size':>6} {'ns/byte':>10} {'bytes/ns':>10} {'mad':>10} {'n':>6}")
    for e in report.estimates:
        lines.append(
            f"{e.size:>6} {e.ticks_per_byte:>10.3f} {e.bytes_per_tick:>10.4f}"
            f" {e.dispersion:>10.1f} {e.sample_count:>6}"
        )
    return "\n".join(lines)
