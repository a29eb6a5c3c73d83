"""Streaming k-mismatch occurrences with zero, fixed, or non-decreasing delays.

The engine never stores pattern or text characters.  The pattern is known only
through sketches of the prefixes ``P[..L]`` on a doubling ladder of lengths
``L``; a candidate start ``s`` carries the sketch of ``T[..s-1]`` and is tested
against ladder level ``L`` once ``T[s+L-1]`` has arrived, by decoding
``sk(T[s..s+L-1])`` against ``sk(P[..L])``.  Survivors move to the next level
and, after the last level, wait in a pending queue until their report time.

Candidates waiting at one level are kept as runs: starts in arithmetic
progression with difference ``q`` whose consecutive prefix sketches differ by
the same block sketch.  A run of any length then costs O(k) words, which keeps
periodic texts (many overlapping occurrences) in small space.

Variable delays are produced by running several fixed-delay engines and feeding
the one currently responsible with blank symbols, so that its fixed delay lands
each occurrence on its prescribed report step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core import EXCEEDS, as_symbols
from .hamsketch import (
    HamSketch,
    SketchParams,
    append_blank,
    append_char,
    concat,
    decode,
    empty_sketch,
    encode,
    split,
)


class _Blank:
    def __repr__(self) -> str:
        return "BLANK"


BLANK = _Blank()


class InvalidSchedule(ValueError):
    pass


class StreamClosed(RuntimeError):
    pass


class NotReported(LookupError):
    pass


@dataclass(frozen=True)
class OccurrenceTuple:
    """``end_pos`` with ``MI(T(end-|P|..end], P)`` (pattern coordinates) and ``sk(T[..end-|P|])``."""

    end_pos: int
    mi: tuple
    prefix_sketch: HamSketch

    def mi_in_text(self, m: int) -> tuple:
        """Mismatch information with positions in text coordinates."""
        off = self.end_pos - m
        return tuple((p + off, a, b) for p, a, b in self.mi)


@dataclass(frozen=True)
class DelaySchedule:
    """When each occurrence is reported: ``mode`` is ``none``, ``fixed`` or ``variable``.

    In variable mode ``oracle(i)`` gives the delay of occurrence ``i`` for
    ``i in [1..d]``; delays must be non-decreasing and positive.
    """

    mode: str = "none"
    delay: int = 0
    oracle: Callable[[int], int] | None = None
    d: int = 0

    @classmethod
    def none(cls) -> "DelaySchedule":
        return cls("none")

    @classmethod
    def fixed(cls, delay: int) -> "DelaySchedule":
        return cls("fixed", delay=delay)

    @classmethod
    def variable(cls, oracle: Callable[[int], int], d: int) -> "DelaySchedule":
        return cls("variable", oracle=oracle, d=d)

    def validate(self) -> None:
        if self.mode == "none":
            return
        if self.mode == "fixed":
            if self.delay < 0:
                raise InvalidSchedule("negative delay")
            return
        if self.mode != "variable":
            raise InvalidSchedule(f"unknown mode {self.mode!r}")
        if self.oracle is None or self.d < 1:
            raise InvalidSchedule("variable schedule needs an oracle and d >= 1")
        prev = self.oracle(1)
        if prev < 1:
            raise InvalidSchedule("variable delays must be positive")
        for i in range(2, self.d + 1):
            cur = self.oracle(i)
            if cur < prev:
                raise InvalidSchedule(f"delay decreases at position {i}")
            prev = cur


@dataclass
class SketchedPattern:
    """A pattern known through sketches of its prefixes at the ladder lengths."""

    length: int
    prefix_sketches: dict  # ladder length -> sketch of P[..L]

    @staticmethod
    def ladder(m: int, k: int) -> list[int]:
        lengths = []
        L = 1
        while L < m:
            if L > k:
                lengths.append(L)
            L *= 2
        lengths.append(m)
        return lengths

    @classmethod
    def from_string(cls, p: Sequence, params: SketchParams) -> "SketchedPattern":
        syms = as_symbols(p)
        m = len(syms)
        return cls(m, {L: encode(syms[:L], params) for L in cls.ladder(m, params.k)})

    def words(self) -> int:
        return 1 + sum(s.words() + 1 for s in self.prefix_sketches.values())


class _Run:
    """Starts s, s+q, ... with prefix sketches advancing by a fixed block sketch."""

    __slots__ = ("s", "A", "E", "count", "q", "B", "BE", "last_s", "last_A", "last_E")

    def __init__(self, s: int, A: HamSketch, E: HamSketch | None):
        self.s = s
        self.A = A
        self.E = E
        self.count = 1
        self.q = None
        self.B = None
        self.BE = None
        self.last_s = s
        self.last_A = A
        self.last_E = E

    def words(self) -> int:
        sk = [self.A, self.E, self.B, self.BE, self.last_A, self.last_E]
        return 4 + sum(x.words() for x in sk if x is not None)


class _RunQueue:
    def __init__(self):
        self.runs: deque[_Run] = deque()

    def __bool__(self) -> bool:
        return bool(self.runs)

    def clear(self) -> None:
        self.runs.clear()

    def head_start(self) -> int | None:
        return self.runs[0].s if self.runs else None

    def push(self, s: int, A: HamSketch, E: HamSketch | None = None) -> None:
        if self.runs:
            tail = self.runs[-1]
            if tail.q is None:
                tail.q = s - tail.last_s
                tail.B = split(A, tail.last_A)
                if E is not None:
                    tail.BE = split(E, tail.last_E)
                tail.count = 2
                tail.last_s, tail.last_A, tail.last_E = s, A, E
                return
            if s - tail.last_s == tail.q and split(A, tail.last_A) == tail.B and (
                E is None or split(E, tail.last_E) == tail.BE
            ):
                tail.count += 1
                tail.last_s, tail.last_A, tail.last_E = s, A, E
                return
        self.runs.append(_Run(s, A, E))

    def pop(self) -> tuple[int, HamSketch, HamSketch | None]:
        run = self.runs[0]
        out = (run.s, run.A, run.E)
        run.count -= 1
        if run.count == 0:
            self.runs.popleft()
        else:
            run.s += run.q
            run.A = concat(run.A, run.B)
            if run.E is not None:
                run.E = concat(run.E, run.BE)
            if run.count == 1:
                run.q = run.B = run.BE = None
        return out

    def words(self) -> int:
        return 1 + sum(r.words() for r in self.runs)

    def __len__(self) -> int:
        return sum(r.count for r in self.runs)


class FixedDelayEngine:
    """k-mismatch occurrences of a sketched pattern reported with a fixed delay.

    ``lo..hi`` restricts which end positions this engine is responsible for.
    """

    def __init__(
        self,
        pattern: SketchedPattern,
        params: SketchParams,
        delay: int = 0,
        lo: int = 1,
        hi: int | None = None,
    ):
        self.params = params
        self.k = params.k
        self.m = pattern.length
        self.pattern = pattern
        self.ladder = SketchedPattern.ladder(self.m, self.k)
        self.delay = delay
        self.lo = max(lo, self.m)
        self.hi = hi
        self.pos = 0  # input symbols consumed, blanks included
        self.queues = [_RunQueue() for _ in self.ladder]
        self.pending = _RunQueue()
        self.emitted: dict[int, tuple[HamSketch, HamSketch]] = {}
        self.tests = 0

    # -- input ----------------------------------------------------------------
    def step(self, before: HamSketch, after: HamSketch) -> list[int]:
        """Consume a text symbol; ``before``/``after`` sketch the input prefix."""
        self.pos += 1
        s = self.pos
        end = s + self.m - 1
        if end >= self.lo and (self.hi is None or end <= self.hi):
            self.queues[0].push(s, before)
        self._run_tests(after)
        return self._emit()

    def step_blank(self) -> list[int]:
        """Consume a blank: it falls inside every live candidate window."""
        self.pos += 1
        for q in self.queues:
            q.clear()
        return self._emit()

    def _run_tests(self, rolling: HamSketch) -> None:
        top = len(self.ladder) - 1
        for t, L in enumerate(self.ladder):
            queue = self.queues[t]
            due = self.pos - L + 1
            if queue.head_start() != due:
                continue
            s, A, _ = queue.pop()
            if L > self.k:
                self.tests += 1
                if decode(split(rolling, A), self.pattern.prefix_sketches[L]) is EXCEEDS:
                    continue
            if t == top:
                self.pending.push(s, A, rolling)
            else:
                self.queues[t + 1].push(s, A)

    def _emit(self) -> list[int]:
        self.emitted.clear()
        out = []
        while self.pending and self.pending.head_start() + self.m - 1 + self.delay == self.pos:
            s, A, E = self.pending.pop()
            end = s + self.m - 1
            self.emitted[end] = (A, E)
            out.append(end)
        return out

    # -- output ---------------------------------------------------------------
    def tuple_for(self, end: int) -> OccurrenceTuple:
        if end not in self.emitted:
            raise NotReported(f"position {end} was not reported at this step")
        A, E = self.emitted[end]
        mi = decode(split(E, A), self.pattern.prefix_sketches[self.m])
        return OccurrenceTuple(end, mi, A)

    def live_candidates(self) -> int:
        return sum(len(q) for q in self.queues) + len(self.pending)

    def words(self) -> int:
        return 8 + sum(q.words() for q in self.queues) + self.pending.words()


class Matcher:
    """Streaming k-mismatch matcher for one pattern and one delay schedule."""

    def __init__(self, pattern, k: int, schedule: DelaySchedule, params: SketchParams):
        if params.k != k:
            raise ValueError("sketch budget must equal k")
        schedule.validate()
        if not isinstance(pattern, SketchedPattern):
            pattern = SketchedPattern.from_string(pattern, params)
        if pattern.length < 1:
            raise ValueError("pattern must be non-empty")
        self.pattern = pattern
        self.m = pattern.length
        self.k = k
        self.params = params
        self.schedule = schedule
        self.rolling = empty_sketch(params)
        self.j = 0  # text symbols received
        self.closed = False
        self._last: dict[int, FixedDelayEngine] = {}
        if schedule.mode == "variable":
            self._init_multiplex()
        else:
            delay = schedule.delay if schedule.mode == "fixed" else 0
            self.engines = [FixedDelayEngine(pattern, params, delay)]

    # -- multiplexing for non-decreasing delays ---------------------------------
    def _init_multiplex(self) -> None:
        sched = self.schedule
        delta = sched.oracle
        bounds = [1]
        while bounds[-1] <= sched.d:
            bounds.append(bounds[-1] + delta(bounds[-1]))
        self.bounds = bounds  # s_0 .. s_t
        self.engines = [
            FixedDelayEngine(self.pattern, self.params, delta(bounds[r - 1]), bounds[r - 1], min(bounds[r] - 1, sched.d))
            for r in range(1, len(bounds))
        ]
        self.next_i = 1  # smallest i whose report step i + delta(i) is still ahead
        self.blanks = [0] * len(self.engines)

    def _role(self, r: int, j: int) -> str:
        """Role of instance r (0-based) while processing text symbol j."""
        s_r = self.bounds[r + 1]
        s_next = self.bounds[r + 2] if r + 2 < len(self.bounds) else None
        if j < s_r:
            return "passive"
        if s_next is None or j < s_next:
            return "active"
        return "inactive"

    def _push_variable(self, ch) -> list[int]:
        j = self.j
        before = self.rolling
        out: list[int] = []
        needs_text = any(self.bounds[r + 1] > j for r in range(len(self.engines)))
        if needs_text:
            self.rolling = append_blank(before) if ch is BLANK else append_char(before, ch)
        for r, eng in enumerate(self.engines):
            if j < self.bounds[r + 1]:
                if ch is BLANK:
                    eng.step_blank()
                else:
                    eng.step(before, self.rolling)
        i = self.next_i
        if i <= self.schedule.d and i + self.schedule.oracle(i) == j:
            self.next_i += 1
            for r, eng in enumerate(self.engines):
                if self._role(r, j) == "active":
                    self.blanks[r] += 1
                    for end in eng.step_blank():
                        out.append(end)
                        self._last[end] = eng
                    break
        return out

    def check_invariant(self) -> bool:
        """Consumed-input counts of all instances match their roles."""
        j = self.j
        delta = self.schedule.oracle
        i = self.next_i - 1
        for r, eng in enumerate(self.engines):
            s_prev, s_r = self.bounds[r], self.bounds[r + 1]
            role = self._role(r, j)
            if role == "passive":
                ok = eng.pos == j
            elif role == "active":
                ok = eng.pos == (s_r - 1) + (1 + i - s_prev)
            else:
                ok = eng.pos == (s_r - 1) + delta(s_prev)
            if not ok:
                return False
        return sum(self._role(r, j) == "active" for r in range(len(self.engines))) <= 1

    # -- public operations -------------------------------------------------------
    def push(self, ch) -> list[int]:
        """Consume one text symbol (or ``BLANK``); returns end positions due now."""
        if self.closed:
            raise StreamClosed("push after end of stream")
        self.j += 1
        self._last = {}
        if self.schedule.mode == "variable":
            return self._push_variable(ch)
        eng = self.engines[0]
        before = self.rolling
        if ch is BLANK:
            self.rolling = append_blank(before)
            ends = eng.step_blank()
        else:
            self.rolling = append_char(before, ch)
            ends = eng.step(before, self.rolling)
        for end in ends:
            self._last[end] = eng
        return ends

    def request_tuple(self, end: int) -> OccurrenceTuple:
        if end not in self._last:
            raise NotReported(f"position {end} was not reported at this step")
        return self._last[end].tuple_for(end)

    def close(self) -> None:
        self.closed = True

    def words(self) -> int:
        return self.pattern.words() + self.rolling.words() + sum(e.words() for e in self.engines) + 4


def new_matcher(p, k: int, schedule: DelaySchedule, params: SketchParams) -> Matcher:
    return Matcher(p, k, schedule, params)
