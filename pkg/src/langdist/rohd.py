"""Read-only online capped Hamming distance of every prefix to PAL and to SQ.

Both algorithms read the text from a read-only buffer and keep
``O(k log n)`` words of working state.  Preprocessing (pattern ladders, the
prefix family of the text) runs as step generators under a per-arrival work
budget; :class:`JobScheduler` counts the work and records any deadline that
had to be met by running a job to completion out of schedule.

PAL: with ``l_j = floor(1.5^j)`` level ``j`` answers ``i`` in
``(2 l_{j-1}, 2 l_j]``.  If ``T[..i]`` is within ``k`` mismatches of a
palindrome then ``T(i - l_j..i]`` is a 2k-mismatch occurrence of
``T[..l_j]^R``, and the last ``floor(i/2)`` entries of its mismatch list are
exactly the mismatches between the two halves of ``T[..i]``.

SQ: over the prefix family ``P_1, ..., P_t`` of the text itself, level ``j``
answers the even ``i`` in ``[2 l_j, 2 l_{j+1})``.  A square ``T[..2h]`` within
``k`` mismatches forces a k-mismatch occurrence of ``P_j`` ending at
``h + l_j``.  Occurrences are extended one by one when ``P_j`` is aperiodic;
when ``P_j`` is periodic with period ``Q``, the leftmost occurrence is tracked
against ``Q^∞`` and the candidates are the ``h`` congruent to it modulo ``|Q|``.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Generator, Optional

from .core import ReversedPrefixView, SliceView, as_symbols, capped, swap_mi
from .rokmatch import HamPeriod, Ladder, OnlineMatcher, chain_mi, hamming_period_steps, ladder_steps

WAIT = None  # a job yields WAIT when it needs characters that have not arrived


class JobScheduler:
    """Runs step generators with a fixed work budget per arriving character."""

    def __init__(self, budget: int):
        self.budget = budget
        self.jobs: list[list] = []  # [generator, result holder]
        self.max_work = 0  # most work units spent by one job in one arrival
        self.deadline_misses = 0

    def submit(self, gen: Generator) -> dict:
        holder: dict = {}
        self.jobs.append([gen, holder])
        return holder

    def _step(self, job) -> bool:
        """Advance one step; returns False when the job waits or is finished."""
        gen, holder = job
        try:
            cost = next(gen)
        except StopIteration as stop:
            holder["result"] = stop.value
            return False
        if cost is WAIT:
            return False
        holder["_spent"] = holder.get("_spent", 0) + cost
        return True

    def tick(self) -> None:
        live = []
        for job in self.jobs:
            job[1]["_spent"] = 0
            while job[1]["_spent"] < self.budget and self._step(job):
                pass
            self.max_work = max(self.max_work, job[1]["_spent"])
            if "result" not in job[1]:
                live.append(job)
        self.jobs = live

    def force(self, holder: dict) -> None:
        """Finish a job now because its result is due; counted as a deadline miss."""
        if "result" in holder:
            return
        self.deadline_misses += 1
        for job in self.jobs:
            if job[1] is holder:
                while "result" not in holder:
                    if not self._step(job) and "result" not in holder:
                        raise RuntimeError("job waits for text that has not arrived")
        self.jobs = [job for job in self.jobs if job[1] is not holder]


def _default_budget(k: int) -> int:
    return 128 * (k + 1)


# ---------------------------------------------------------------------------
# PAL


class _PalLevel:
    __slots__ = ("ell", "lo", "hi", "job", "matcher", "deadline", "hit", "max_feed")

    def __init__(self, ell: int, prev: int, job: dict):
        self.ell = ell
        self.lo = 2 * prev  # owns (lo, hi]
        self.hi = 2 * ell
        self.job = job
        self.matcher: Optional[OnlineMatcher] = None
        self.deadline = self.lo + 1
        self.hit = None  # (end, MI) reported at the current position
        self.max_feed = 0


class RoPal:
    """Read-only k-LHD-PAL."""

    def __init__(self, k: int, budget: int | None = None, track_space: bool = False):
        self.k = k
        self.track_space = track_space
        self.text: list = []
        self.i = 0
        self.sched = JobScheduler(budget or _default_budget(k))
        self.levels: list[_PalLevel] = []
        self._j = 1
        self.filter_hit = False
        self.max_feed = 0  # most matcher characters fed to one level in one arrival
        self.peak_words = 0

    @staticmethod
    def ell(j: int) -> int:
        return math.floor(1.5**j) if j > 0 else 0

    @property
    def deadline_misses(self) -> int:
        return self.sched.deadline_misses

    def _launch(self, j: int) -> None:
        ell = self.ell(j)
        view = ReversedPrefixView(self.text, ell)
        holder = self.sched.submit(ladder_steps(view, 2 * self.k)) if 2 * self.k < ell else {"result": None}
        self.levels.append(_PalLevel(ell, self.ell(j - 1), holder))

    def _feed(self, lev: _PalLevel, i: int) -> None:
        if lev.matcher is None:
            if "result" not in lev.job:
                if i < lev.deadline:
                    return
                self.sched.force(lev.job)
            view = ReversedPrefixView(self.text, lev.ell)
            lev.matcher = OnlineMatcher(view, 2 * self.k, text=self.text, ladder=lev.job["result"])
        mt = lev.matcher
        if i >= lev.deadline:
            want = i - mt.i
        else:
            remaining = lev.deadline - mt.i
            want = min(i - mt.i, -(-remaining // (lev.deadline - i + 1)))
        lev.hit = None
        for _ in range(want):
            res = mt.advance()
            if res and res[0][0] == i:
                lev.hit = res[0]
        lev.max_feed = max(lev.max_feed, want)
        self.max_feed = max(self.max_feed, want)

    def push(self, ch) -> int:
        self.text.append(ch)
        self.i += 1
        i = self.i
        while self.ell(self._j) == i:
            self._launch(self._j)
            self._j += 1
        self.sched.tick()
        answer = self.k + 1
        self.filter_hit = False
        for lev in self.levels:
            self._feed(lev, i)
        if i == 1:
            answer = 0
            self.filter_hit = True
        for lev in self.levels:
            if lev.lo < i <= lev.hi and i > 1:
                if lev.hit is not None:
                    self.filter_hit = True
                    half = i // 2
                    mi = [t for t in lev.hit[1] if t[0] > lev.ell - half]
                    answer = capped(len(mi), self.k)
        self.levels = [lev for lev in self.levels if lev.hi > i]
        if self.track_space:
            self.peak_words = max(self.peak_words, self.words())
        return answer

    def words(self) -> int:
        w = 8 + 3 * len(self.sched.jobs)
        for lev in self.levels:
            w += 8 + (lev.matcher.words() if lev.matcher is not None else 0)
        return w


# ---------------------------------------------------------------------------
# SQ


@dataclass
class FamilyEntry:
    """One member ``P_j = T[..ell]`` of the prefix family of the text."""

    ell: int
    nxt: int  # length of P_{j+1}
    period: Optional[HamPeriod] = None
    next_mi: tuple = ()  # MI(P_{j+1}, Q_j^∞) when periodic


def _base_after(L: int) -> int:
    j = 0
    while math.floor(1.5**j) <= L:
        j += 1
    return math.floor(1.5**j)


def family_steps(text: list, k: int, out: list) -> Generator:
    """Build the prefix family of the growing text, appending entries to ``out``.

    Never returns; yields ``WAIT`` until the characters it needs arrive.
    """
    L = 1
    while True:
        while len(text) < L:
            yield WAIT
        nxt = _base_after(L)
        res = yield from hamming_period_steps(SliceView(text, 0, L), k)
        if res is None:
            out.append(FamilyEntry(L, nxt))
        else:
            mi = list(res.mi)
            x = L
            while x < nxt and len(mi) < 2 * k + 1:
                while len(text) <= x:
                    yield WAIT
                c = text[res.qs + x % res.q]
                if text[x] != c:
                    mi.append((x + 1, text[x], c))
                x += 1
                yield 1
            out.append(FamilyEntry(L, x, res, tuple(mi)))
            if x < nxt:
                out.append(FamilyEntry(x, nxt))
        L = nxt


class _SqLevel:
    def __init__(self, entry: FamilyEntry, job: dict):
        self.e = entry
        self.ell = entry.ell
        self.job = job
        self.matcher: Optional[OnlineMatcher] = None
        self.deadline = 2 * entry.ell
        self.occ_hi = entry.ell + entry.nxt - 1  # last useful occurrence end
        self.cands: list[list] = []  # aperiodic: [half length h, MI(T[..x], T(h..h+x])]
        self.anchor: Optional[list] = None  # periodic: [origin, MI vs Q^∞ in text positions, alive]
        self.hit_at = None  # occurrence (end, MI) reported at the current position
        self.occ_ends: set[int] = set()  # instrumentation only, not counted as working space
        self.max_feed = 0
        self.peak_mi = 0
        if entry.period is not None:
            self.pj_mi = [t for t in entry.next_mi if t[0] <= entry.ell]
            self.next_q = list(entry.next_mi)

    def words(self) -> int:
        w = 10 + (self.matcher.words() if self.matcher is not None else 0)
        w += sum(2 + 3 * len(c[1]) for c in self.cands)
        if self.anchor is not None:
            w += 3 + 3 * len(self.anchor[1])
        if self.e.period is not None:
            w += 3 + 3 * len(self.e.next_mi)
        return w


class RoSq:
    """Read-only k-LHD-SQ."""

    def __init__(self, k: int, budget: int | None = None, track_space: bool = False):
        self.k = k
        self.track_space = track_space
        self.text: list = []
        self.i = 0
        self.sched = JobScheduler(budget or _default_budget(k))
        self.family: list[FamilyEntry] = []
        self._family_job = self.sched.submit(family_steps(self.text, k, self.family))
        self._seen = 0  # family entries already turned into levels
        self.levels: list[_SqLevel] = []
        self.filter_hit = False
        self.max_feed = 0
        self.peak_words = 0
        self.peak_mi = 0

    @property
    def deadline_misses(self) -> int:
        return self.sched.deadline_misses

    def _spawn_levels(self) -> None:
        while self._seen < len(self.family):
            entry = self.family[self._seen]
            self._seen += 1
            view = SliceView(self.text, 0, entry.ell)
            job = self.sched.submit(ladder_steps(view, self.k)) if self.k < entry.ell else {"result": None}
            self.levels.append(_SqLevel(entry, job))

    def _ensure_family(self, i: int) -> None:
        """The level owning even ``i`` must exist by time ``i``."""
        if self.family and self.family[-1].nxt * 2 > i:
            return
        self.sched.deadline_misses += 1
        gen_job = next(job for job in self.sched.jobs if job[1] is self._family_job)
        while not (self.family and self.family[-1].nxt * 2 > i):
            if not self.sched._step(gen_job):
                raise RuntimeError("prefix family needs unread text")
        self._spawn_levels()

    def _feed(self, lev: _SqLevel, i: int) -> None:
        lev.hit_at = None
        if lev.matcher is None:
            if "result" not in lev.job:
                if i < lev.deadline:
                    return
                self.sched.force(lev.job)
            view = SliceView(self.text, 0, lev.ell)
            lev.matcher = OnlineMatcher(view, self.k, text=self.text, ladder=lev.job["result"])
        mt = lev.matcher
        top = min(i, lev.occ_hi)
        if mt.i >= top:
            return
        if i >= lev.deadline:
            want = top - mt.i
        else:
            remaining = lev.deadline - mt.i
            want = min(top - mt.i, -(-remaining // (lev.deadline - i + 1)))
        for _ in range(want):
            res = mt.advance()
            if res:
                if res[0][0] >= lev.deadline:
                    lev.occ_ends.add(res[0][0])
                if res[0][0] == i:
                    lev.hit_at = res[0]
        lev.max_feed = max(lev.max_feed, want)
        self.max_feed = max(self.max_feed, want)

    def _level_step(self, lev: _SqLevel, i: int, ch) -> Optional[list]:
        """Process T[i] for one level; returns MI of the halves when it reports ``i``."""
        k, text, ell = self.k, self.text, lev.ell
        out = None
        if lev.e.period is None:
            keep = []
            for cand in lev.cands:
                h, mi = cand
                x = i - h
                a = text[x - 1]
                if a != ch:
                    mi.append((x, a, ch))
                    if len(mi) > k:
                        continue
                if i == 2 * h:
                    out = mi
                else:
                    keep.append(cand)
            lev.cands = keep
            if lev.hit_at is not None and i >= 2 * ell:
                h = i - ell
                mi = list(swap_mi(lev.hit_at[1]))
                if h == ell:
                    out = mi
                else:
                    lev.cands.append([h, mi])
            return out
        per = lev.e.period
        q = per.q
        anc = lev.anchor
        if anc is not None and anc[2]:
            qc = text[per.qs + (i - anc[0] - 1) % q]
            if ch != qc:
                anc[1].append((i, ch, qc))
                if len(anc[1]) > 6 * k + 1:
                    anc[2] = False
        if anc is None and lev.hit_at is not None and i >= 2 * ell:
            origin = i - ell
            mi = chain_mi(lev.hit_at[1], lev.pj_mi)
            anc = lev.anchor = [origin, [(t[0] + origin, t[1], t[2]) for t in mi], True]
        if anc is not None and anc[2] and i % 2 == 0:
            h = i // 2
            if h >= anc[0] and (h - anc[0]) % q == 0:
                idx = bisect_right(anc[1], (h, float("inf"), float("inf")))
                second = [(t[0] - h, t[1], t[2]) for t in anc[1][idx:]]
                first = [t for t in lev.e.next_mi if t[0] <= h]
                lev.peak_mi = max(lev.peak_mi, len(first) + len(second))
                mi = chain_mi(first, swap_mi(second))
                if len(mi) <= k:
                    out = mi
        return out

    def push(self, ch) -> int:
        return self.push_with_witness(ch)[0]

    def push_with_witness(self, ch):
        """Capped distance of the new prefix to SQ and ``MI`` of its halves (or ``None``)."""
        self.text.append(ch)
        self.i += 1
        i = self.i
        self.sched.tick()
        self._spawn_levels()
        if i % 2 == 0:
            self._ensure_family(i)
        answer = (self.k + 1, None)
        self.filter_hit = False
        for lev in self.levels:
            self._feed(lev, i)
            mi = self._level_step(lev, i, ch)
            if i % 2 == 0 and 2 * lev.ell <= i < 2 * lev.e.nxt:
                self.filter_hit = i // 2 + lev.ell in lev.occ_ends
                if mi is not None:
                    answer = (len(mi), tuple(mi))
        self.levels = [lev for lev in self.levels if 2 * lev.e.nxt - 1 > i]
        for lev in self.levels:
            self.peak_mi = max(self.peak_mi, lev.peak_mi)
        if self.track_space:
            self.peak_words = max(self.peak_words, self.words())
        return answer

    def words(self) -> int:
        fam = sum(3 + 3 * len(e.next_mi) for e in self.family)
        return 8 + 3 * len(self.sched.jobs) + fam + sum(lev.words() for lev in self.levels)


def ro_table(text, language: str, k: int):
    """Read-only table of capped distances for every prefix of ``text``."""
    state = RoPal(k) if language == "pal" else RoSq(k)
    return [state.push(c) for c in as_symbols(text)]
