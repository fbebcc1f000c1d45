"""Command-line front end: hash files/streams, emit conformance vectors,
run the avalanche harness, and benchmark throughput."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import bench, quality, vectors
from .registry import ALGORITHMS, get_algorithm

CHUNK_SIZE = 64 * 1024


def _parse_key(parser: argparse.ArgumentParser, algo_name: str, key_hex: Optional[str]) -> bytes:
    algo = get_algorithm(algo_name)
    if key_hex is None:
        return bytes(algo.key_size)
    try:
        key = bytes.fromhex(key_hex)
    except ValueError:
        parser.error(f"--key is not valid hex: {key_hex!r}")
    if len(key) != algo.key_size:
        parser.error(
            f"{algo_name} needs a {algo.key_size * 2}-hex-character key, "
            f"got {len(key_hex)} characters"
        )
    return key


def _parse_sizes(parser: argparse.ArgumentParser, text: str) -> List[int]:
    """Accept '4..32' ranges and comma lists, possibly mixed."""
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            parser.error(f"bad size specification: {part!r}")
    if not out or any(s < 1 for s in out):
        parser.error(f"bad size specification: {text!r}")
    return out


def _algo_names(parser: argparse.ArgumentParser, text: str) -> List[str]:
    names = [n.strip() for n in text.split(",") if n.strip()]
    for name in names:
        if name not in ALGORITHMS:
            parser.error(
                f"unknown algorithm {name!r}; choose from {', '.join(sorted(ALGORITHMS))}"
            )
    return names


def _resolve_algo(parser: argparse.ArgumentParser, name: str, width: int) -> str:
    if name == "highway" or (name == "highway64" and width == 256):
        name = f"highway{width}"
    if name not in ALGORITHMS:
        parser.error(
            f"unknown algorithm {name!r}; choose from {', '.join(sorted(ALGORITHMS))}"
        )
    return name


def cmd_hash(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    name = _resolve_algo(parser, args.algo, args.width)
    algo = get_algorithm(name)
    key = _parse_key(parser, name, args.key)
    hasher = algo.make_hasher(key)
    label = args.input
    try:
        stream = sys.stdin.buffer if args.input == "-" else open(args.input, "rb")
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 1
    with stream:
        while True:
            chunk = stream.read(CHUNK_SIZE)
            if not chunk:
                break
            hasher.append(chunk)
    digest = hasher.finish()
    if isinstance(digest, tuple):
        from .highway import digest256_to_bytes

        hex_digest = digest256_to_bytes(digest).hex()
    else:
        from .highway import digest64_to_bytes

        hex_digest = digest64_to_bytes(digest).hex()
    print(f"{hex_digest}  {label}")
    return 0


def cmd_vectors(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    records = vectors.generate()
    if args.out == "-":
        vectors.write(records, sys.stdout)
    else:
        with open(args.out, "w") as f:
            vectors.write(records, f)
    return 0


def cmd_avalanche(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    sizes = _parse_sizes(parser, args.sizes)
    bad = [s for s in sizes if not 4 <= s <= 32]
    if bad:
        parser.error(f"avalanche sizes must be in 4..32, got {bad}")
    if args.samples < 3 or args.samples % 2 == 0:
        parser.error("--samples must be odd and at least 3")
    failed = False
    for name in _algo_names(parser, args.algo):
        algo = get_algorithm(name)
        if algo.hash64 is None:
            parser.error(f"{name} has no 64-bit digest to test")
        h = quality.HashUnderTest.from_algorithm(algo)
        report = quality.run_avalanche(
            h, sizes, iterations=args.iters, samples=args.samples, seed=args.seed
        )
        print(
            f"# {name}: {args.samples} samples x {args.iters} iterations,"
            f" noise floor {quality.noise_floor(args.iters):.4%}"
        )
        for v in report.verdicts:
            state = "pass" if v.passed else "FAIL"
            print(f"{name},{v.size},{v.median_max_bias:.6f},{v.threshold},{state}")
        if not report.passed:
            failed = True
    return 1 if failed else 0


def cmd_bench(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.preset:
        if args.preset not in bench.PRESETS:
            parser.error(f"unknown preset {args.preset!r}")
        sizes = list(bench.PRESETS[args.preset])
    elif args.sizes:
        sizes = _parse_sizes(parser, args.sizes)
    else:
        sizes = list(bench.PRESETS["table1"])
    for name in _algo_names(parser, args.algo):
        report = bench.sweep(
            get_algorithm(name), sizes, reps=args.reps, runs=args.runs, seed=args.seed
        )
        print(bench.format_report(report))
        print(bench.format_report(report, machine_readable=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lanehash",
        description="Keyed hashing (HighwayHash / SipHash family) with "
        "quality and throughput harnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hash", help="hash a file or standard input")
    p.add_argument("--algo", default="highway64", help="algorithm name")
    p.add_argument("--key", help="key as hex (defaults to all-zero key)")
    p.add_argument("--width", type=int, choices=(64, 256), default=64)
    p.add_argument("input", nargs="?", default="-", help="path or - for stdin")

    p = sub.add_parser("vectors", help="emit the conformance vector file")
    p.add_argument("--out", default="-", help="output path or - for stdout")

    p = sub.add_parser("avalanche", help="run the avalanche bias harness")
    p.add_argument("--algo", default="highway64", help="comma-separated names")
    p.add_argument("--sizes", default="4..32")
    p.add_argument("--iters", type=int, default=20_000)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bench", help="measure per-size throughput")
    p.add_argument("--algo", default="highway64", help="comma-separated names")
    p.add_argument("--preset", help="size preset: " + ", ".join(bench.PRESETS))
    p.add_argument("--sizes")
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--runs", type=int, default=bench.DEFAULT_RUNS)
    p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "hash": cmd_hash,
        "vectors": cmd_vectors,
        "avalanche": cmd_avalanche,
        "bench": cmd_bench,
    }[args.command]
    try:
        return handler(parser, args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
