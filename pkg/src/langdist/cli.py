"""Command-line front end: ``run``, ``verify`` and ``bench``.

Records go to stdout (TSV ``index<TAB>value`` or one JSON object per line),
statistics go to stderr as a single JSON line so the record stream stays
pipeable.  Exit codes: 2 invalid configuration, 3 input longer than
``--max-n`` (or the oracle cap in ``verify``), 4 disagreement in ``verify``.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numba

from . import oracle
from .core import GrowBuffer
from .rohd import RoPal, RoSq
from .roled import RoLedPal, RoLedSq
from .streamhd import PalStream, SqStream

EXIT_CONFIG = 2
EXIT_OVERFLOW = 3
EXIT_MISMATCH = 4

LANGS = ("pal", "sq")
METRICS = ("hd", "ed")
MODELS = ("stream", "ro", "oracle")


class ConfigError(ValueError):
    pass


class InputOverflow(ValueError):
    pass


@dataclass
class RunConfig:
    language: str = "pal"
    metric: str = "hd"
    model: str = "ro"
    k: int = 1
    seed: int = 0x5EED
    format: str = "tsv"
    stats: bool = False
    max_n: int = 1 << 20

    def validate(self) -> None:
        if self.language not in LANGS:
            raise ConfigError(f"unknown language {self.language!r}")
        if self.metric not in METRICS:
            raise ConfigError(f"unknown metric {self.metric!r}")
        if self.model not in MODELS + ("control",):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.format not in ("tsv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        if self.max_n < 1:
            raise ConfigError("max-n must be positive")
        if self.model == "stream" and self.metric == "ed":
            raise ConfigError("streaming edit distance is not provided; see README.md, section 'Scope'")
        if self.model == "control" and self.metric == "ed":
            raise ConfigError("the linear-memory control covers the Hamming problems only")


# ---------------------------------------------------------------------------
# Linear-memory control


@numba.njit(cache=True)
def _control_pal(t, i, k):
    d = 0
    for x in range(i // 2):
        if t[x] != t[i - 1 - x]:
            d += 1
            if d > k:
                break
    return d


@numba.njit(cache=True)
def _control_sq(t, i, k):
    if i % 2:
        return k + 1
    h = i // 2
    d = 0
    for x in range(h):
        if t[x] != t[h + x]:
            d += 1
            if d > k:
                break
    return d


class LinearControl:
    """Keeps the whole prefix and compares it directly; its space is the stored text."""

    def __init__(self, language: str, k: int):
        self.k = k
        self.kernel = _control_pal if language == "pal" else _control_sq
        self.buf = GrowBuffer()

    def push(self, ch) -> int:
        self.buf.append(ch)
        return min(self.k + 1, int(self.kernel(self.buf.arr, self.buf.n, self.k)))

    def words(self) -> int:
        return self.buf.n


class OracleRunner:
    """Brute-force table, recomputed from the stored prefix (desk scale only)."""

    def __init__(self, language: str, metric: str, k: int):
        self.fn = {
            ("pal", "hd"): oracle.oracle_hd_pal,
            ("sq", "hd"): oracle.oracle_hd_sq,
            ("pal", "ed"): oracle.oracle_ed_pal,
            ("sq", "ed"): oracle.oracle_ed_sq,
        }[(language, metric)]
        self.k = k
        self.text: list[int] = []

    def push(self, ch) -> int:
        self.text.append(ch)
        return self.fn(self.text, self.k)[-1]

    def table(self, text) -> list[int]:
        return self.fn(list(text), self.k)

    def words(self) -> int:
        return len(self.text)


def make_algorithm(cfg: RunConfig):
    """Instance with ``push(symbol) -> capped distance`` for the configuration."""
    cfg.validate()
    if cfg.model == "oracle":
        return OracleRunner(cfg.language, cfg.metric, cfg.k)
    if cfg.model == "control":
        return LinearControl(cfg.language, cfg.k)
    if cfg.model == "stream":
        cls = PalStream if cfg.language == "pal" else SqStream
        return cls(cfg.k, cfg.max_n, cfg.seed)
    if cfg.metric == "hd":
        return (RoPal if cfg.language == "pal" else RoSq)(cfg.k)
    if cfg.language == "pal":
        return RoLedPal(cfg.k)
    return RoLedSq(cfg.k, max_n=cfg.max_n)


# ---------------------------------------------------------------------------
# run


def _format(cfg: RunConfig, i: int, v: int) -> str:
    if cfg.format == "json":
        return json.dumps({"index": i, "value": v, "capped": v == cfg.k + 1}) + "\n"
    return f"{i}\t{v}\n"


def iter_bytes(stream) -> Iterator[int]:
    """Bytes of a binary stream, one at a time, without reading ahead of the consumer."""
    while True:
        b = stream.read(1)
        if not b:
            return
        yield b[0]


def run(cfg: RunConfig, data: Iterable[int], out, stats_out=None, factory: Callable | None = None) -> dict:
    """Emit one record per character as soon as it is consumed; returns the statistics."""
    algo = (factory or make_algorithm)(cfg)
    peak = 0
    total = 0
    worst = 0
    n = 0
    if isinstance(algo, OracleRunner):
        data = list(data)
        if len(data) > cfg.max_n:
            raise InputOverflow(f"input longer than max-n = {cfg.max_n}")
        table = iter(algo.table(data))
        algo.push = lambda _c: next(table)
    for c in data:
        if n >= cfg.max_n:
            raise InputOverflow(f"input longer than max-n = {cfg.max_n}")
        n += 1
        t0 = time.perf_counter_ns()
        v = algo.push(c)
        dt = time.perf_counter_ns() - t0
        total += dt
        worst = max(worst, dt)
        if cfg.stats and hasattr(algo, "words"):
            peak = max(peak, algo.words())
        out.write(_format(cfg, n, v))
        out.flush()
    stats = {
        "n": n,
        "peak_words": peak if cfg.stats else None,
        "ns_per_char_mean": total / n if n else 0.0,
        "ns_per_char_max": worst,
        "failures": getattr(algo, "failures", 0),
    }
    if cfg.stats and stats_out is not None:
        stats_out.write(json.dumps(stats) + "\n")
        stats_out.flush()
    return stats


# ---------------------------------------------------------------------------
# verify


def verify(cfg: RunConfig, data: bytes, out, factory: Callable | None = None) -> int:
    """Diff the algorithm's table against the oracle; returns the exit code."""
    cap = min(cfg.max_n, oracle.DEFAULT_SIZE_CAP)
    if len(data) > cap:
        raise InputOverflow(f"input of length {len(data)} exceeds the oracle cap {cap}")
    algo = (factory or make_algorithm)(cfg)
    got = [algo.push(c) for c in data]
    expected = OracleRunner(cfg.language, cfg.metric, cfg.k).table(data)
    bad = [i for i, (a, b) in enumerate(zip(got, expected)) if a != b]
    if not bad:
        out.write("OK, 0 mismatches\n")
        return 0
    i = bad[0]
    out.write(f"MISMATCH, {len(bad)} mismatches; first at {i + 1}: got {got[i]}, expected {expected[i]}\n")
    return EXIT_MISMATCH


# ---------------------------------------------------------------------------
# bench


def generate(kind: str, n: int, seed: int, sigma: int = 4) -> bytes:
    """Deterministic inputs: ``random``, ``periodic`` (noisy short period) or ``nearpal``."""
    rnd = random.Random(f"{kind}:{n}:{seed}:{sigma}")
    alpha = [97 + x for x in range(sigma)]
    if kind == "random":
        out = [rnd.choice(alpha) for _ in range(n)]
    elif kind == "periodic":
        q = [rnd.choice(alpha) for _ in range(rnd.randint(1, 8))]
        out = [q[x % len(q)] for x in range(n)]
        for _ in range(max(1, n // 512)):
            out[rnd.randrange(n)] = rnd.choice(alpha)
    elif kind == "nearpal":
        half = [rnd.choice(alpha) for _ in range((n + 1) // 2)]
        out = (half + half[::-1])[:n]
        for _ in range(max(1, n // 512)):
            out[rnd.randrange(n)] = rnd.choice(alpha)
    else:
        raise ConfigError(f"unknown generator {kind!r}")
    return bytes(out)


BENCH_FIELDS = ("n", "k", "model", "metric", "language", "peak_words", "ns_per_char_mean", "ns_per_char_max", "failures")


def bench(ns, ks, models, metrics, languages, gen: str, seed: int, out) -> list[dict]:
    writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS)
    writer.writeheader()
    rows = []
    for metric in metrics:
        for language in languages:
            for model in models:
                if model in ("stream", "control") and metric == "ed":
                    continue
                for k in ks:
                    for n in ns:
                        cfg = RunConfig(language, metric, model, k, seed, "tsv", True, max(n, 1))
                        stats = run(cfg, generate(gen, n, seed), _Null())
                        row = {
                            "n": n,
                            "k": k,
                            "model": model,
                            "metric": metric,
                            "language": language,
                            "peak_words": stats["peak_words"],
                            "ns_per_char_mean": round(stats["ns_per_char_mean"], 1),
                            "ns_per_char_max": stats["ns_per_char_max"],
                            "failures": stats["failures"],
                        }
                        writer.writerow(row)
                        out.flush()
                        rows.append(row)
    return rows


class _Null:
    def write(self, _s) -> None:
        pass

    def flush(self) -> None:
        pass


# ---------------------------------------------------------------------------
# argument parsing


def _int_list(s: str) -> list[int]:
    out = []
    for part in s.split(","):
        if ":" in part:  # a:b means the powers of two 2^a .. 2^b
            a, b = part.split(":")
            out.extend(1 << e for e in range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lang", choices=LANGS, default="pal")
    p.add_argument("--metric", choices=METRICS, default="hd")
    p.add_argument("-k", type=int, default=1)
    p.add_argument("--seed", type=int, default=0x5EED)
    p.add_argument("--max-n", type=int, default=1 << 20)
    p.add_argument("--file", default=None, help="read the text from PATH instead of stdin")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="langdist", description="Distances of every prefix to PAL and SQ.")
    sub = parser.add_subparsers(dest="command", required=True)
    pr = sub.add_parser("run", help="emit the capped distance of every prefix")
    _common(pr)
    pr.add_argument("--model", choices=MODELS + ("control",), default="ro")
    pr.add_argument("--format", choices=("tsv", "json"), default="tsv")
    pr.add_argument("--stats", action="store_true", help="write statistics to stderr")
    pv = sub.add_parser("verify", help="compare an algorithm with the oracle")
    _common(pv)
    pv.add_argument("--model", choices=MODELS, default="ro")
    pb = sub.add_parser("bench", help="CSV of space and time over a grid")
    pb.add_argument("--n", type=_int_list, default=_int_list("10:16"))
    pb.add_argument("-k", type=_int_list, default=[1, 4])
    pb.add_argument("--models", default="stream")
    pb.add_argument("--metrics", default="hd")
    pb.add_argument("--langs", default="pal")
    pb.add_argument("--gen", choices=("random", "periodic", "nearpal"), default="random")
    pb.add_argument("--seed", type=int, default=0x5EED)
    pb.add_argument("--out", default=None, help="CSV path (default stdout)")
    return parser


def _input(args) -> Iterable[int]:
    if args.file:
        with open(args.file, "rb") as fh:
            return fh.read()
    return iter_bytes(sys.stdin.buffer)


def main(argv=None, factory: Callable | None = None) -> int:
    """Entry point; ``factory`` replaces :func:`make_algorithm` (used by tests)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else 0
    try:
        if args.command == "bench":
            for name, vals, allowed in (
                ("models", args.models, MODELS + ("control",)),
                ("metrics", args.metrics, METRICS),
                ("langs", args.langs, LANGS),
            ):
                if any(v not in allowed for v in vals.split(",")):
                    raise ConfigError(f"bad --{name} value {vals!r}")
            out = open(args.out, "w", newline="") if args.out else sys.stdout
            try:
                bench(args.n, args.k, args.models.split(","), args.metrics.split(","), args.langs.split(","), args.gen, args.seed, out)
            finally:
                if args.out:
                    out.close()
            return 0
        cfg = RunConfig(args.lang, args.metric, args.model, args.k, args.seed, getattr(args, "format", "tsv"), getattr(args, "stats", False), args.max_n)
        cfg.validate()
        if args.command == "verify":
            data = bytes(_input(args)) if args.file else sys.stdin.buffer.read()
            return verify(cfg, data, sys.stdout, factory)
        run(cfg, _input(args), sys.stdout, sys.stderr, factory)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except oracle.OracleSizeExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
