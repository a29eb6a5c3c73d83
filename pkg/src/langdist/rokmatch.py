"""Read-only online k-mismatch pattern matching in O(k) time per character.

The pattern ``P`` and the text ``T`` are read-only sequences: nothing is
copied, characters are looked up on demand, and the working space is
``O(k log m)`` words.  The matcher walks a ladder of prefixes
``P_1, P_2, ..., P_t = P`` whose lengths grow by a factor of at most 3/2.
Layer ``j`` turns k-mismatch occurrences of ``P_j`` into occurrences of
``P_{j+1}``:

* if ``P_j`` is aperiodic, every occurrence is extended character by
  character (there are O(1) of them per ``|P_j|/2`` text positions);
* if ``P_j`` is k-mismatch periodic with period ``Q_j``, only the leftmost
  occurrence per block of ``ceil(|P_j|/2)`` output positions is tracked, as a
  mismatch list against ``Q_j^∞``; this is enough to recover all occurrences
  of ``P_{j+1}`` ending in that block, because they are ``|Q_j|`` apart.

Building blocks exposed here: :func:`two_way_occurrences` (constant-space
exact matching), :func:`pillar_ipm`, :func:`hamming_period` and
:func:`build_ladder`.  The ladder construction is written as a generator that
yields the number of character comparisons it just made, so callers that must
spread the work over arriving characters can drive it under a budget.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Generator, Sequence

from .core import PeriodCertificate, ReversedPrefixView, SliceView, as_symbols, swap_mi

# ---------------------------------------------------------------------------
# Constant-space exact matching


def _maximal_suffix(x: Sequence, m: int, reverse: bool) -> tuple[int, int]:
    ms, j, k, p = -1, 0, 1, 1
    while j + k < m:
        a = x[j + k]
        b = x[ms + k]
        if (a > b) if reverse else (a < b):
            j += k
            k = 1
            p = j - ms
        elif a == b:
            if k != p:
                k += 1
            else:
                j += p
                k = 1
        else:
            ms = j
            j = ms + 1
            k = p = 1
    return ms, p


def two_way_steps(x: Sequence, y: Sequence) -> Generator[int, None, list[int]]:
    """Generator form of :func:`two_way_occurrences`.

    Yields the number of character comparisons done since the previous yield.
    """
    m, n = len(x), len(y)
    if m == 0:
        return list(range(n + 1))
    if m > n:
        return []
    i1, p1 = _maximal_suffix(x, m, False)
    i2, p2 = _maximal_suffix(x, m, True)
    yield m
    ell, per = (i1, p1) if i1 > i2 else (i2, p2)
    out: list[int] = []
    if all(x[t] == x[per + t] for t in range(ell + 1)):
        memory = -1
        j = 0
        while j <= n - m:
            i = max(ell, memory) + 1
            i0 = i
            while i < m and x[i] == y[i + j]:
                i += 1
            yield i - i0 + 1
            if i >= m:
                i = ell
                while i > memory and x[i] == y[i + j]:
                    i -= 1
                if i <= memory:
                    out.append(j)
                j += per
                memory = m - per - 1
            else:
                j += i - ell
                memory = -1
    else:
        per = max(ell + 1, m - ell - 1) + 1
        j = 0
        while j <= n - m:
            i = ell + 1
            while i < m and x[i] == y[i + j]:
                i += 1
            yield i - ell
            if i >= m:
                i = ell
                while i >= 0 and x[i] == y[i + j]:
                    i -= 1
                if i < 0:
                    out.append(j)
                j += per
            else:
                j += i - ell
    return out


def run(gen: Generator):
    """Drive a step generator to completion and return its result."""
    try:
        while True:
            next(gen)
    except StopIteration as stop:
        return stop.value


def two_way_occurrences(needle: Sequence, hay: Sequence) -> list[int]:
    """0-based starts of exact occurrences, in O(|needle| + |hay|) time and O(1) space."""
    return run(two_way_steps(needle, hay))


@dataclass(frozen=True)
class ArithProgression:
    first: int
    step: int
    count: int

    def __iter__(self):
        step = self.step or 1  # a single occurrence has step 0
        return iter(range(self.first, self.first + step * self.count, step))

    def __len__(self) -> int:
        return self.count


def pillar_ipm(needle: Sequence, hay: Sequence) -> ArithProgression:
    """Exact occurrences (1-based starts) of ``needle`` in ``hay`` with ``|hay| <= 2|needle|``.

    Under the length condition the occurrences form an arithmetic progression.
    """
    if len(hay) > 2 * len(needle):
        raise ValueError("internal pattern matching needs |hay| <= 2|needle|")
    occ = two_way_occurrences(needle, hay)
    if not occ:
        return ArithProgression(0, 0, 0)
    step = occ[1] - occ[0] if len(occ) > 1 else 0
    return ArithProgression(occ[0] + 1, step, len(occ))


# ---------------------------------------------------------------------------
# Mismatch-periodicity


@dataclass(frozen=True)
class HamPeriod:
    """``U`` within ``2d`` mismatches of ``Q^∞`` where ``Q = U[qs:qs+q]`` and ``q | qs``."""

    qs: int
    q: int
    mi: tuple  # MI(U, Q^∞[1..|U|]), 1-based positions

    def char(self, u: Sequence, x: int):
        """``Q^∞[x+1]`` (0-based ``x``) read from ``u``."""
        return u[self.qs + x % self.q]


def hamming_period_steps(u: Sequence, d: int) -> Generator[int, None, HamPeriod | None]:
    """Find the period of a d-mismatch periodic string, or report that there is none.

    ``U`` is d-mismatch periodic when ``hd(U, Q^∞) <= 2d`` for a primitive
    ``Q`` with ``128 d |Q| <= |U|``.  Of ``2d + 1`` disjoint equal blocks of a
    periodic ``U`` at least one is mismatch-free, so its smallest period is
    ``|Q|``; each block proposes one candidate, which is verified by a scan.
    O(d |U|) time and O(1) extra space apart from the returned mismatch list.
    """
    n = len(u)
    d = max(d, 1)
    qmax = n // (128 * d)
    if qmax < 1:
        return None
    block = n // (2 * d + 1)
    half = (block + 1) // 2
    for x in range(2 * d + 1):
        f0 = x * block
        occ = yield from two_way_steps(SliceView(u, f0, half), SliceView(u, f0 + 1, block - 1))
        if not occ:
            continue
        q = occ[0] + 1
        if q > qmax:
            continue
        qs = f0 + (-f0) % q
        mi = []
        for z in range(n):
            c = u[qs + z % q]
            if u[z] != c:
                mi.append((z + 1, u[z], c))
                if len(mi) > 2 * d:
                    break
            if z & 63 == 63:
                yield 64
        if len(mi) <= 2 * d:
            return HamPeriod(qs, q, tuple(mi))
    return None


def hamming_period(u: Sequence, d: int) -> PeriodCertificate | None:
    """Certificate of d-mismatch periodicity (``Q`` is stored as a symbol tuple) or ``None``."""
    u = as_symbols(u)
    res = run(hamming_period_steps(u, d))
    if res is None:
        return None
    return PeriodCertificate(tuple(u[res.qs : res.qs + res.q]), "hamming", res.mi, max(d, 1))


# ---------------------------------------------------------------------------
# Prefix ladder


def base_lengths(m: int) -> list[int]:
    """Distinct values of ``min(m, floor(1.5^j))`` for ``j >= 0``."""
    out = []
    j = 0
    while True:
        L = min(m, math.floor(1.5**j))
        if not out or out[-1] != L:
            out.append(L)
        if L == m:
            return out
        j += 1


@dataclass
class Ladder:
    """Prefix family of the pattern, with period data for its k-mismatch periodic members.

    ``lengths`` is strictly increasing and ends with ``m``.  For a periodic
    ``P_j`` (``j < t``) ``periods[j]`` is a :class:`HamPeriod` of ``P_j`` and
    ``next_mi[j]`` is ``MI(P_{j+1}, Q_j^∞)``.
    """

    m: int
    k: int
    lengths: list[int]
    periods: dict = field(default_factory=dict)
    next_mi: dict = field(default_factory=dict)

    def words(self) -> int:
        return (
            len(self.lengths)
            + 3 * len(self.periods)
            + sum(3 * len(v) + 1 for v in self.next_mi.values())
        )


def ladder_steps(p: Sequence, k: int) -> Generator[int, None, Ladder]:
    m = len(p)
    base = base_lengths(m)
    family = set(base)
    found: dict[int, HamPeriod] = {}
    for idx, L in enumerate(base):
        if L == m:
            break
        res = yield from hamming_period_steps(SliceView(p, 0, L), k)
        if res is None:
            continue
        found[L] = res
        nxt = base[idx + 1]
        cnt = len(res.mi)
        x = L
        while x < nxt:
            if p[x] != p[res.qs + x % res.q]:
                cnt += 1
            x += 1
            if cnt == 2 * k + 1:
                break
        family.add(x)
        yield x - L
    lengths = sorted(family)
    lad = Ladder(m, k, lengths)
    for j, L in enumerate(lengths[:-1]):
        res = found.get(L)
        if res is None:
            continue
        L2 = lengths[j + 1]
        mi = []
        for z in range(L2):
            c = p[res.qs + z % res.q]
            if p[z] != c:
                mi.append((z + 1, p[z], c))
        yield L2
        lad.periods[j] = res
        lad.next_mi[j] = tuple(mi)
    return lad


def build_ladder(p: Sequence, k: int) -> Ladder:
    return run(ladder_steps(p, k))


# ---------------------------------------------------------------------------
# Mismatch-list algebra


def chain_mi(mi_ab: Sequence, mi_bc: Sequence) -> list:
    """``MI(A, C)`` from ``MI(A, B)`` and ``MI(B, C)`` for position-aligned strings."""
    ab = {t[0]: t for t in mi_ab}
    bc = {t[0]: t for t in mi_bc}
    out = []
    for pos in sorted(ab.keys() | bc.keys()):
        x = ab.get(pos)
        y = bc.get(pos)
        a = x[1] if x is not None else y[1]
        c = y[2] if y is not None else x[2]
        if a != c:
            out.append((pos, a, c))
    return out


# ---------------------------------------------------------------------------
# The online matcher


def _flatten(seq: Sequence) -> tuple:
    """``(base, offset, sign)`` with ``seq[x] == base[offset + sign * x]``, for fast access."""
    if isinstance(seq, SliceView) and isinstance(seq.base, (list, tuple)):
        return seq.base, seq.start, 1
    if isinstance(seq, ReversedPrefixView) and isinstance(seq.base, (list, tuple)):
        return seq.base, seq.length - 1, -1
    return seq, 0, 1


class _AperiodicLayer:
    """Extends each occurrence of ``P_j`` independently."""

    def __init__(self, owner: "OnlineMatcher", lj: int, lnext: int):
        self.o = owner
        self.lj = lj
        self.lnext = lnext
        self.live: list[list] = []  # [end of P_j occurrence, mismatch list]
        self.peak = 0

    def step(self, i: int, ch, incoming) -> list:
        k, delta = self.o.k, self.lnext - self.lj
        base, off, sgn = self.o.flat
        off += sgn * (self.lj - 1)
        live = self.live
        dead = []
        for cand in live:
            d = i - cand[0]
            pc = base[off + sgn * d]
            if ch != pc:
                mi = cand[1]
                mi.append((self.lj + d, ch, pc))
                if len(mi) > k:
                    dead.append(id(cand))
        out = []
        # candidates are ordered by start, so only the oldest can be due
        if live and i - live[0][0] == delta:
            if not dead or dead[0] != id(live[0]):
                out.append((i, live[0][1]))
            if dead and dead[0] == id(live[0]):
                dead.pop(0)
            live.pop(0)
        if dead:
            gone = set(dead)
            live = self.live = [c for c in live if id(c) not in gone]
        if incoming is not None:
            live.append((i, list(incoming)))
        if len(live) > self.peak:
            self.peak = len(live)
        return out

    def words(self) -> int:
        return sum(2 + 3 * len(c[1]) for c in self.live) + 4


class _Anchor:
    __slots__ = ("block", "origin", "mi", "alive", "end")

    def __init__(self, block: int, origin: int, mi: list, end: int):
        self.block = block  # output block index r
        self.origin = origin  # Q^∞ is aligned with T at position origin + 1
        self.mi = mi  # MI(T(origin..i], Q^∞), text positions
        self.alive = True
        self.end = end  # last output position of the block


class _PeriodicLayer:
    """Tracks the leftmost occurrence per output block against ``Q_j^∞``."""

    def __init__(self, owner: "OnlineMatcher", lj: int, lnext: int, per: HamPeriod, next_mi):
        self.o = owner
        self.lj = lj
        self.lnext = lnext
        self.per = per
        self.next_mi = next_mi  # MI(P_{j+1}, Q^∞)
        self.next_q = swap_mi(next_mi)  # MI(Q^∞, P_{j+1})
        self.pj_mi = [t for t in next_mi if t[0] <= lj]  # MI(P_j, Q^∞)
        self.b = (lj + 1) // 2
        self.live: list[_Anchor] = []
        self.seen_blocks: set[int] = set()
        self.peak_mi = 0
        self.peak = 0

    def step(self, i: int, ch, incoming) -> list:
        o, k = self.o, self.o.k
        delta = self.lnext - self.lj
        q = self.per.q
        out = []
        for a in self.live:
            if not a.alive or i > a.end:
                continue
            qc = self.per.char(o.pattern, i - a.origin - 1)
            if ch != qc:
                a.mi.append((i, ch, qc))
                if len(a.mi) > 6 * k + 1:
                    a.alive = False
                    continue
            check_from = a.origin + self.lj + delta
            if i >= check_from and (i - check_from) % q == 0:
                lo = i - self.lnext
                idx = bisect_right(a.mi, (lo, float("inf"), float("inf")))
                window = [(t[0] - lo, t[1], t[2]) for t in a.mi[idx:]]
                self.peak_mi = max(self.peak_mi, len(window))
                mi = chain_mi(window, self.next_q)
                if len(mi) <= k:
                    out.append((i, mi))
        self.live = [a for a in self.live if a.alive and a.end > i]
        if incoming is not None:
            r = (i + delta + self.b - 1) // self.b - 1
            if r not in self.seen_blocks:
                self.seen_blocks.add(r)
                self.seen_blocks = {x for x in self.seen_blocks if x >= r - 2}
                origin = i - self.lj
                mi = chain_mi(incoming, self.pj_mi)
                mi = [(t[0] + origin, t[1], t[2]) for t in mi]
                self.live.append(_Anchor(r, origin, mi, (r + 1) * self.b))
        self.peak = max(self.peak, len(self.live))
        return out

    def words(self) -> int:
        return sum(4 + 3 * len(a.mi) for a in self.live) + 3 * len(self.seen_blocks) + 6


class OnlineMatcher:
    """k-mismatch occurrences of a read-only pattern in a read-only text.

    Args:
        pattern: random-access pattern (any sequence; views are fine).
        k: mismatch threshold.
        text: random-access text that grows as characters arrive; when
            omitted the matcher keeps its own list and :meth:`push` appends to it.
        ladder: optionally a prebuilt :class:`Ladder` for ``pattern``.

    :meth:`advance` consumes the next text character and returns the
    occurrences ending there as ``(end, MI)`` pairs, ``MI`` in pattern
    coordinates with entries ``(pos, text char, pattern char)``.
    """

    def __init__(self, pattern: Sequence, k: int, text: Sequence | None = None, ladder: Ladder | None = None):
        self.pattern = pattern
        self.flat = _flatten(pattern)
        self.m = len(pattern)
        self.k = k
        self._own = text is None
        self.text = [] if text is None else text
        self.i = 0
        self.small = k >= self.m
        self.layers: list = []
        self.ladder = None
        if not self.small:
            self.ladder = ladder or build_ladder(pattern, k)
            L = self.ladder.lengths
            for j in range(len(L) - 1):
                if j in self.ladder.periods:
                    self.layers.append(
                        _PeriodicLayer(self, L[j], L[j + 1], self.ladder.periods[j], self.ladder.next_mi[j])
                    )
                else:
                    self.layers.append(_AperiodicLayer(self, L[j], L[j + 1]))

    def push(self, ch) -> list:
        if not self._own:
            raise RuntimeError("matcher reads a shared text; use advance()")
        self.text.append(ch)
        return self.advance()

    def advance(self) -> list:
        self.i += 1
        i = self.i
        ch = self.text[i - 1]
        p = self.pattern
        if self.small:
            if i < self.m:
                return []
            mi = [
                (x + 1, self.text[i - self.m + x], p[x])
                for x in range(self.m)
                if self.text[i - self.m + x] != p[x]
            ]
            return [(i, mi)]
        incoming = [] if ch == p[0] else [(1, ch, p[0])]
        if len(incoming) > self.k:
            incoming = None
        for layer in self.layers:
            if incoming is None and not layer.live:
                continue
            res = layer.step(i, ch, incoming)
            incoming = res[0][1] if res else None
        return [] if incoming is None else [(i, incoming)]

    @property
    def peak_reconstructed(self) -> int:
        """Largest mismatch list extracted against a period (bounded by ``8k + 2``)."""
        return max((l.peak_mi for l in self.layers if isinstance(l, _PeriodicLayer)), default=0)

    def words(self) -> int:
        w = 6
        if self.ladder is not None:
            w += self.ladder.words()
        return w + sum(layer.words() for layer in self.layers)


def ro_occurrences(p, t, k: int) -> list[tuple[int, tuple]]:
    """All k-mismatch occurrences as ``(end, MI)`` (convenience wrapper)."""
    p = as_symbols(p)
    t = as_symbols(t)
    mt = OnlineMatcher(p, k)
    out = []
    for c in t:
        for end, mi in mt.push(c):
            out.append((end, tuple(mi)))
    return out
