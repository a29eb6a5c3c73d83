"""Streaming capped Hamming distance of every prefix to PAL and to SQ.

PAL keeps sketches of ``T[..i]`` and of its reverse and decodes them against
each other: ``hd(U, PAL) = hd(U, U^R) / 2``.

SQ works level by level with ``l = 2^j``.  Level ``j`` answers the even
positions ``2i`` in ``[3l, 6l)``: if ``T[..2i]`` is within ``k`` mismatches of
a square then ``T(i..i+l]`` is a k-mismatch occurrence of ``P_j = T[..l]``
ending inside ``T_j = T(3l/2..4l]``, at ``T_j`` position ``p = i - l/2``.  A
streaming matcher reports ``p`` with delay ``p - l/2``, i.e. exactly when
``T[2i]`` arrives, and hands back ``sk(T(3l/2..i])``; together with
``sk(T[..3l/2])`` and the running sketch this gives both halves of
``T[..2i]``, which are decoded against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import EXCEEDS, as_symbols, capped, symbol
from .hamsketch import (
    HamSketch,
    SketchParams,
    append_char,
    concat,
    decode,
    empty_sketch,
    prepend_char,
    split,
)
from .occstream import DelaySchedule, Matcher, SketchedPattern


@dataclass
class StreamConfig:
    k: int
    max_n: int = 1 << 16
    seed: int = 0x5EED


class PalStream:
    """Streaming k-LHD-PAL."""

    def __init__(self, k: int, max_n: int = 1 << 16, seed: int = 0x5EED):
        self.k = k
        self.params = SketchParams(n=max(max_n, 1), k=2 * k, seed=seed)
        self.fwd = empty_sketch(self.params)
        self.rev = empty_sketch(self.params)
        self.i = 0

    @property
    def failures(self) -> int:
        return self.params.stats.failures

    def push(self, ch) -> int:
        self.i += 1
        self.fwd = append_char(self.fwd, ch)
        self.rev = prepend_char(self.rev, ch)
        mi = decode(self.fwd, self.rev)
        if mi is EXCEEDS:
            return self.k + 1
        return capped(len(mi) // 2, self.k)

    def words(self) -> int:
        return self.fwd.words() + self.rev.words() + 2


@dataclass
class _SqLevel:
    ell: int
    matcher: Matcher
    s_j: HamSketch | None = None

    def words(self) -> int:
        return 2 + self.matcher.words() + (self.s_j.words() if self.s_j is not None else 0)


class SqStream:
    """Streaming k-LHD-SQ with the optional closest-square witness."""

    def __init__(self, k: int, max_n: int = 1 << 16, seed: int = 0x5EED):
        self.k = k
        self.params = SketchParams(n=max(max_n, 1), k=k, seed=seed)
        self.rolling = empty_sketch(self.params)
        self.i = 0
        self.head: list = []  # T[1..4], for the prefixes no level covers
        self.pow2: dict[int, HamSketch] = {}  # L -> sk(T[..L]) for powers of two
        self.levels: dict[int, _SqLevel] = {}
        self.filter_hit = False  # did the responsible level report the current position
        self.peak_levels = 0

    @property
    def failures(self) -> int:
        return self.params.stats.failures

    def _new_level(self, ell: int) -> _SqLevel:
        half = ell // 2

        def delay(p: int) -> int:
            return p - half if p >= ell else half

        sketches = {L: self.pow2[L] for L in SketchedPattern.ladder(ell, self.k)}
        pattern = SketchedPattern(ell, sketches)
        schedule = DelaySchedule.variable(delay, 5 * ell // 2 - 1)
        return _SqLevel(ell, Matcher(pattern, self.k, schedule, self.params))

    def push(self, ch) -> int:
        return self.push_with_request(ch, False)[0]

    def push_with_request(self, ch, want_witness: bool = True):
        """Capped distance of the new prefix to SQ, plus ``MI`` of its halves when asked."""
        k = self.k
        before = self.rolling
        self.rolling = append_char(before, ch)
        self.i += 1
        i = self.i
        if i <= 4:
            self.head.append(symbol(ch))
        if i & (i - 1) == 0:
            self.pow2[i] = self.rolling
            if i >= 2:
                self.levels[i] = self._new_level(i)
        answer = (k + 1, None)
        self.filter_hit = False
        if i in (2, 4):
            h = i // 2
            mi = tuple(
                (x + 1, a, b) for x, (a, b) in enumerate(zip(self.head[:h], self.head[h:i])) if a != b
            )
            if len(mi) <= k:
                answer = (len(mi), mi if want_witness else None)
            self.filter_hit = True
        done = []
        for ell, lev in self.levels.items():
            start = 3 * ell // 2
            if i == start:
                lev.s_j = self.rolling
            elif i > start:
                ends = lev.matcher.push(ch)
                if i % 2 == 0 and 3 * ell <= i < 6 * ell:
                    half_len = i // 2
                    p = half_len - ell // 2
                    if p in ends:
                        self.filter_hit = True
                        tup = lev.matcher.request_tuple(p)
                        first = concat(lev.s_j, tup.prefix_sketch)
                        second = split(self.rolling, first)
                        mi = decode(first, second)
                        if mi is not EXCEEDS:
                            answer = (len(mi), mi if want_witness else None)
                if i >= 6 * ell - 1:
                    done.append(ell)
        for ell in done:
            del self.levels[ell]
        self.peak_levels = max(self.peak_levels, len(self.levels))
        return answer

    def words(self) -> int:
        return (
            self.rolling.words()
            + sum(s.words() + 1 for s in self.pow2.values())
            + sum(lev.words() for lev in self.levels.values())
            + len(self.head)
            + 4
        )


def stream_table(text, language: str, k: int, max_n: int | None = None, seed: int = 0x5EED):
    """Run a streaming algorithm over ``text``; returns ``(table, failures)``."""
    syms = as_symbols(text)
    n = max_n or max(len(syms), 1)
    state = PalStream(k, n, seed) if language == "pal" else SqStream(k, n, seed)
    table = [state.push(c) for c in syms]
    return table, state.failures
