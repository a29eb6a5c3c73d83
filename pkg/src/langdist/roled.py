"""Read-only online edit-distance algorithms.

* :class:`DelayedErrorMatcher` reports the k-error occurrences of a pattern
  with a delay of exactly ``d`` characters, by recursion over three regimes.
* :class:`RoLedPal` and :class:`RoLedSq` compute the capped edit distance of
  every prefix to PAL and to SQ.  A prefix is examined only when it passes an
  occurrence filter; otherwise the answer is ``k + 1``.

Texts are kept in a :class:`~langdist.core.GrowBuffer` (the read-only input);
patterns are fragments of a buffer described by :class:`Flat`.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numba
import numpy as np

from .core import (
    EditScript,
    GrowBuffer,
    PowerPrefix,
    ReversedPrefixView,
    SliceView,
    as_symbols,
    symbol,
)
from .edtools import (
    IncrementalBanded,
    _lv_flat,
    _lv_query,
    banded_ed,
    ed_period,
    kerror_ends_flat,
    lcp_periodic,
    lv_build,
    periodic_layout,
    periodic_script_flat,
)

INF = 1 << 30


@dataclass(frozen=True)
class Flat:
    """Fragment ``x -> src[off + sign * x]`` for ``0 <= x < length``; ``src`` is a buffer or array."""

    src: object
    off: int
    sign: int
    length: int

    def array(self) -> np.ndarray:
        return self.src.arr if isinstance(self.src, GrowBuffer) else self.src

    def flat(self) -> tuple:
        return self.array(), self.off, self.sign, self.length

    def prefix(self, length: int) -> "Flat":
        return Flat(self.src, self.off, self.sign, length)

    def reversed_suffix(self, length: int) -> "Flat":
        """The last ``length`` characters, reversed."""
        return Flat(self.src, self.off + self.sign * (self.length - 1), -self.sign, length)


# ---------------------------------------------------------------------------
# Delayed k-error matcher


@numba.njit(cache=True)
def _combine(p, poff, psg, rlen, t, i, k, lo_w, lwin):
    """min over window ``i'`` of ``lwin[i' - lo_w] + ed(R, T(i'..i])`` via one LV on reversals."""
    blen = min(i, rlen + k)
    table = _lv_flat(p, poff, psg, rlen, t, i - 1, -1, blen, k)
    best = k + 1
    for w in range(2 * k + 1):
        ip = lo_w + w
        if ip < 0 or ip > i or lwin[w] > k:
            continue
        v = lwin[w] + _lv_query(table, k, rlen, i - ip)
        if v < best:
            best = v
    return best


class _BlockNode:
    """``d >= m/4``: blocks of ``b = max(1, m // 4)`` ends, computed offline ``d - b`` steps late."""

    def __init__(self, pat: Flat, k: int, d: int, text: GrowBuffer):
        self.pat, self.k, self.d, self.text = pat, k, d, text
        self.b = max(1, pat.length // 4)
        self.pending: dict[int, int] = {}
        self.calls = 0

    def step(self, s: int) -> list:
        b, m, k = self.b, self.pat.length, self.k
        r = s - self.d + b
        if r >= b and r % b == 0:
            lo = max(0, r - b - m - k)
            dist = kerror_ends_flat(self.pat.flat(), (self.text.arr, lo, 1, r - lo), k, r - b - lo + 1)
            self.calls += 1
            for idx, v in enumerate(dist.tolist()):
                if v <= k:
                    self.pending[r - b + 1 + idx] = v
        i = s - self.d
        v = self.pending.pop(i, None)
        return [(i, v)] if v is not None else []

    def depth(self) -> int:
        return 1

    def words(self) -> int:
        return 4 + 2 * len(self.pending)


class _SplitNode:
    """``P = L R`` with ``L`` matched recursively and ``R`` checked by Landau-Vishkin.

    ``rblock > 0`` (the ``k <= d < m/4`` regime) restricts the check to ends
    where an offline pass over blocks of ``rblock`` characters found ``R``;
    otherwise every end is checked.  An empty ``L`` is the base case.
    """

    def __init__(self, pat: Flat, k: int, d: int, text: GrowBuffer, rlen: int, child_delay: int, rblock: int):
        self.pat, self.k, self.d, self.text = pat, k, d, text
        self.rlen = rlen
        self.llen = pat.length - rlen
        self.rr = pat.reversed_suffix(rlen)
        self.rflat = Flat(pat.src, pat.off + pat.sign * self.llen, pat.sign, rlen)
        self.child = _make_node(pat.prefix(self.llen), k, child_delay, text) if self.llen > 0 else None
        self.rblock = rblock
        self.rocc: dict[int, int] = {}
        self.ldist: dict[int, int] = {}
        self.lv_calls = 0

    def step(self, s: int) -> list:
        k = self.k
        if self.child is not None:
            for e, v in self.child.step(s):
                self.ldist[e] = v
        if self.rblock and s % self.rblock == 0:
            r, db = s, self.rblock
            lo = max(0, r - db - self.rlen - k)
            dist = kerror_ends_flat(self.rflat.flat(), (self.text.arr, lo, 1, r - lo), k, r - db - lo + 1)
            for idx, v in enumerate(dist.tolist()):
                if v <= k:
                    self.rocc[r - db + 1 + idx] = v
        i = s - self.d
        if i < 1:
            return []
        if self.rblock and self.rocc.pop(i, None) is None:
            self._prune(i - self.rlen - k)
            return []
        lo_w = i - self.rlen - k
        self._prune(lo_w)
        lwin = np.full(2 * k + 1, INF, dtype=np.int64)
        any_hit = False
        for w in range(2 * k + 1):
            ip = lo_w + w
            if ip < 0 or ip > i:
                continue
            if self.child is None:
                v = 0
            elif ip == 0:
                v = self.llen if self.llen <= k else INF
            else:
                v = self.ldist.get(ip, INF)
            if v <= k:
                lwin[w] = v
                any_hit = True
        if not any_hit:
            return []
        self.lv_calls += 1
        arr = self.rr.array()
        best = int(_combine(arr, self.rr.off, self.rr.sign, self.rlen, self.text.arr, i, k, lo_w, lwin))
        return [(i, best)] if best <= k else []

    def _prune(self, lo: int) -> None:
        if self.ldist and min(self.ldist) < lo:
            self.ldist = {e: v for e, v in self.ldist.items() if e >= lo}

    def depth(self) -> int:
        return 1 + (self.child.depth() if self.child is not None else 0)

    def words(self) -> int:
        own = 6 + 2 * len(self.ldist) + 2 * len(self.rocc)
        return own + (self.child.words() if self.child is not None else 0)


def _make_node(pat: Flat, k: int, d: int, text: GrowBuffer):
    m = pat.length
    if 4 * d >= m:
        return _BlockNode(pat, k, d, text)
    if d >= k:
        if d == 0:  # k = 0 = d: exact matching, checked at every end
            return _SplitNode(pat, k, d, text, m, 0, 0)
        return _SplitNode(pat, k, d, text, 4 * d, 5 * d - k, d)
    if m <= 4 * k:
        return _SplitNode(pat, k, d, text, m, 0, 0)
    return _SplitNode(pat, k, d, text, 4 * k, d + 3 * k, 0)


class DelayedErrorMatcher:
    """Reports ``(i, min_j ed(P, T(j..i]))`` for every k-error occurrence end ``i`` upon reading ``T[i + d]``.

    With ``text=None`` the matcher owns its text and is fed with :meth:`push`;
    otherwise it reads a shared buffer and is driven by :meth:`advance`.
    """

    def __init__(self, pattern, k: int, delay: int, text: GrowBuffer | None = None):
        if delay < 0:
            raise ValueError("delay must be non-negative")
        self.own = text is None
        self.text = GrowBuffer() if text is None else text
        if isinstance(pattern, Flat):
            pat = pattern
        else:
            arr = np.asarray(as_symbols(pattern), dtype=np.int64)
            pat = Flat(arr, 0, 1, len(arr))
        if pat.length == 0:
            raise ValueError("pattern must be non-empty")
        self.pattern, self.k, self.delay = pat, k, delay
        self.root = _make_node(pat, k, delay, self.text)
        self.steps = 0

    def push(self, ch) -> list:
        if not self.own:
            raise RuntimeError("matcher reads a shared text; use advance()")
        self.text.append(symbol(ch))
        return self.advance()

    def advance(self) -> list:
        """Process the next already-stored text character."""
        if self.steps >= len(self.text):
            raise RuntimeError("no unread text character")
        self.steps += 1
        return self.root.step(self.steps)

    def depth(self) -> int:
        return self.root.depth()

    def words(self) -> int:
        return 4 + self.root.words()


def dem_occurrences(p, t, k: int, d: int) -> list[tuple[int, int, int]]:
    """``(step, end, dist)`` for every emission over ``t`` followed by ``d`` padding characters.

    Padding uses a symbol absent from ``p`` and ``t``; emissions for ends past
    ``|t|`` are dropped.
    """
    t = as_symbols(t)
    pad = max(as_symbols(p) + t + (0,)) + 1
    dem = DelayedErrorMatcher(p, k, d)
    out = []
    for step, c in enumerate(list(t) + [pad] * d, start=1):
        for e, v in dem.push(c):
            if e <= len(t):
                out.append((step, e, v))
    return out


# ---------------------------------------------------------------------------
# Distance kernels around the middle


@numba.njit(cache=True)
def _pal_min(t, i, k):
    """min over ``j`` near ``i/2`` of ed(T[..j], T[j+1+c..i]^R) for c in {0, 1}; returns (best, j, c)."""
    h = i // 2
    x = min(i, h + k)
    table = _lv_flat(t, 0, 1, x, t, i - 1, -1, i, k)
    best, bj, bc = k + 1, -1, 0
    for j in range(max(0, h - k), min(x, h + k) + 1):
        for c in range(2):
            y = i - j - c
            if y < 0:
                continue
            v = _lv_query(table, k, j, y)
            if v < best:
                best, bj, bc = v, j, c
    return best, bj, bc


@numba.njit(cache=True)
def _sq_min(t, i, k):
    """min over ``j`` near ``i/2`` of ed(T[..j], T(j..i]); returns (best, j)."""
    h = i // 2
    best, bj = k + 1, -1
    for j in range(max(0, h - k), min(i, h + k) + 1):
        if abs(i - 2 * j) > k:
            continue
        table = _lv_flat(t, 0, 1, j, t, j, 1, i - j, k)
        v = _lv_query(table, k, j, i - j)
        if v < best:
            best, bj = v, j
    return best, bj


def _script_layout(flat: tuple, q, budget: int):
    res = periodic_script_flat(flat, q, budget)
    if res is None:
        return None
    _, phase, _, script = res
    return periodic_layout(script, flat[3], phase)


# ---------------------------------------------------------------------------
# Occurrence filters


class _PeriodicFilter:
    """``Occ' = {p + m|Q| + delta : 0 <= m <= r, |delta| <= 10k}`` with ``r`` tracked online.

    ``r`` is the largest ``m`` with ``ed(T[p..p + m|Q|], W) <= budget`` for
    windows ``W`` of ``root^∞`` with a free start phase and a free end.  The
    cost is non-decreasing in the fragment length, so positions not yet read
    are judged by the current cost, which can only over-approximate ``r``.
    """

    def __init__(self, p: int, q: tuple, root: tuple, k: int, budget: int, horizon: int):
        self.p, self.qlen, self.k = p, len(q), k
        self.budget = budget
        self.track = IncrementalBanded(PowerPrefix(root, horizon + budget + 2 * len(q) + 2), budget, len(q))
        self.fed = p - 1
        self.x_fail: int | None = None

    def feed(self, text: list, upto: int) -> None:
        while self.x_fail is None and self.fed < upto:
            self.fed += 1
            self.track.append(text[self.fed - 1])
            if self.track.best() > self.budget:
                self.x_fail = self.fed

    def contains(self, e: int) -> bool:
        slack = 10 * self.k
        m_lo = max(0, -(-(e - slack - self.p) // self.qlen))
        if self.p + m_lo * self.qlen > e + slack:
            return False
        return self.x_fail is None or self.p + m_lo * self.qlen < self.x_fail

    def words(self) -> int:
        return 6 + len(self.track.col)


@dataclass
class _LedLevel:
    ell: int
    dem: DelayedErrorMatcher | None
    cert: object
    last_end: int  # the matcher runs over T[..last_end]
    occ: set = field(default_factory=set)
    p: int | None = None
    per: _PeriodicFilter | None = None

    @property
    def periodic(self) -> bool:
        return self.cert is not None

    def words(self) -> int:
        w = 8 + len(self.occ)
        if self.dem is not None:
            w += self.dem.words()
        if self.per is not None:
            w += self.per.words()
        if self.cert is not None:
            w += len(self.cert.q) + 3 * self.cert.witness.cost
        return w


class _RoLedBase:
    def __init__(self, k: int, debug: bool = False):
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        self.debug = debug
        self.buf = GrowBuffer()
        self.syms: list[int] = []  # the same read-only text, for Python-level access
        self.i = 0
        self.filter_hit = False
        self.stats = {"filter_passes": 0, "periodic_evals": 0, "naive_evals": 0, "periodic_levels": 0}
        self.peak_words = 0

    def _read(self, ch) -> int:
        c = symbol(ch)
        self.buf.append(c)
        self.syms.append(c)
        self.i += 1
        return self.i

    def _advance(self, lev: _LedLevel, i: int) -> None:
        """Run the level's matcher up to ``T[min(i, last_end)]`` and record what it finds."""
        upto = min(i, lev.last_end)
        if lev.dem is not None and lev.dem.steps >= lev.last_end:
            lev.dem = None
        while lev.dem is not None and lev.dem.steps < upto:
            for e, _ in lev.dem.advance():
                if e < lev.ell:
                    continue
                if lev.periodic:
                    lev.p = e
                    lev.dem = None  # only the leftmost occurrence is needed
                    self._start_periodic(lev)
                    break
                lev.occ.add(e)
        if lev.per is not None:
            lev.per.feed(self.syms, i)

    def _start_periodic(self, lev: _LedLevel) -> None:
        raise NotImplementedError


class RoLedPal(_RoLedBase):
    """Read-only k-LED-PAL.

    Level ``j`` (``l = 2^j``) answers ``i`` in ``[l, 2l)``.  Its matcher
    reports the 2k-error occurrences of ``T[..l]^R`` with delay 0, started
    at ``T[l]`` after catching up on ``T[..l]``.
    """

    def __init__(self, k: int, debug: bool = False):
        super().__init__(k, debug)
        self.levels: dict[int, _LedLevel] = {}

    def _launch(self, ell: int) -> None:
        k = self.k
        pat = Flat(self.buf, ell - 1, -1, ell)
        dem = DelayedErrorMatcher(pat, 2 * k, 0, self.buf)
        cert = ed_period(self.syms[:ell], 2 * k) if ell >= 256 * k else None
        lev = _LedLevel(ell, dem, cert, 2 * ell - 1)
        if cert is not None:
            self.stats["periodic_levels"] += 1
        self.levels[ell] = lev

    def _start_periodic(self, lev: _LedLevel) -> None:
        q = tuple(lev.cert.q)
        lev.per = _PeriodicFilter(lev.p, q, q[::-1], self.k, 12 * self.k, 2 * lev.ell)

    def push(self, ch) -> int:
        return self.push_with_witness(ch)[0]

    def push_with_witness(self, ch):
        """Capped distance of the new prefix and, in debug mode, ``(split, script)`` to a closest palindrome."""
        k = self.k
        i = self._read(ch)
        self.filter_hit = False
        if i >= 2 and i & (i - 1) == 0:
            self._launch(i)
        for lev in self.levels.values():
            self._advance(lev, i)
        for ell in [e for e in self.levels if 2 * e - 1 < i]:
            del self.levels[ell]
        if self.debug:
            self.peak_words = max(self.peak_words, self.words())
        if i == 1:
            self.filter_hit = True
            return 0, (((0, 1), EditScript(())) if self.debug else None)
        lev = self.levels[1 << (i.bit_length() - 1)]
        if lev.periodic:
            passes = lev.per is not None and lev.per.contains(i)
        else:
            passes = i in lev.occ
            lev.occ.discard(i)
        if not passes:
            return k + 1, None
        self.filter_hit = True
        self.stats["filter_passes"] += 1
        if lev.periodic:
            best, j, c = self._periodic_eval(lev, i)
        else:
            best, j, c = (int(v) for v in _pal_min(self.buf.arr, i, k))
            self.stats["naive_evals"] += 1
        wit = self._witness(i, j, c) if self.debug and best <= k else None
        return best, wit

    def _periodic_eval(self, lev: _LedLevel, i: int):
        k = self.k
        h = i // 2
        x = min(i, h + k)
        ylen = min(i, i - (h - k))
        q = tuple(lev.cert.q)
        budget = 12 * k
        lay_u = _script_layout((self.buf.arr, 0, 1, x), q, budget)
        lay_v = _script_layout((self.buf.arr, i - 1, -1, ylen), q, budget) if lay_u is not None else None
        if lay_u is None or lay_v is None:
            self.stats["naive_evals"] += 1
            return tuple(int(v) for v in _pal_min(self.buf.arr, i, k))
        self.stats["periodic_evals"] += 1
        u = SliceView(self.syms, 0, x)
        v = ReversedPrefixView(self.syms, i, ylen)
        table = lv_build(u, v, k, lambda a, b: lcp_periodic(u, a, v, b, None, None, q, layouts=(lay_u, lay_v)))
        best, bj, bc = k + 1, -1, 0
        for j in range(max(0, h - k), x + 1):
            for c in range(2):
                y = i - j - c
                if y < 0 or y > ylen:
                    continue
                val = table.query(j, y)
                if val < best:
                    best, bj, bc = val, j, c
        return best, bj, bc

    def _witness(self, i: int, j: int, c: int):
        t = self.syms
        x = tuple(t[:j])
        y = tuple(t[j + c : i][::-1])
        _, script = banded_ed(x, y, self.k)
        return (j, c), script

    def words(self) -> int:
        return 6 + sum(lev.words() for lev in self.levels.values())


def _base_lengths_up_to(n: int) -> list[int]:
    out, j = [], 1
    while True:
        v = int(1.5**j)
        if v > n:
            break
        if not out or v != out[-1]:
            out.append(v)
        j += 1
    return out


class RoLedSq(_RoLedBase):
    """Read-only k-LED-SQ.

    The filtering family holds the prefixes ``T[..floor(1.5^j)]`` plus, after
    a 3k-error periodic member whose periodicity breaks before the next base
    length, the shortest extension that is no longer 3k-error periodic.
    Member ``P`` keeps the 3k-error occurrences of ``P`` ending in
    ``T[..l' + l + ceil(k/2)]`` where ``l'`` is the next base length.
    """

    def __init__(self, k: int, debug: bool = False, max_n: int = 1 << 22):
        super().__init__(k, debug)
        self.half = -(-k // 2)
        self.bases = _base_lengths_up_to(max_n)
        self.next_base = 0
        self.members: list[_LedLevel] = []
        self.member_lens: list[int] = []
        self.ext: tuple | None = None  # (IncrementalBanded, stop length) for a periodic base member

    def _next_base_after(self, ell: int) -> int:
        idx = bisect_right(self.bases, ell)
        return self.bases[idx] if idx < len(self.bases) else 2 * ell + 2

    def _add_member(self, ell: int) -> None:
        k = self.k
        dem = DelayedErrorMatcher(Flat(self.buf, 0, 1, ell), 3 * k, 0, self.buf)
        cert = ed_period(self.syms[:ell], 3 * k) if ell >= 384 * k else None
        if cert is not None:
            self.stats["periodic_levels"] += 1
        lev = _LedLevel(ell, dem, cert, self._next_base_after(ell) + ell + self.half)
        self.members.append(lev)
        self.member_lens.append(ell)

    def _start_periodic(self, lev: _LedLevel) -> None:
        q = tuple(lev.cert.q)
        lev.per = _PeriodicFilter(lev.p, q, q, self.k, 2 * (10 * self.k + 1), lev.last_end)

    def _grow_family(self, i: int) -> None:
        k = self.k
        if self.ext is not None:
            track, stop = self.ext
            if i >= stop:
                self.ext = None
            else:
                track.append(self.syms[i - 1])
                if track.best() > 6 * k:
                    self.ext = None
                    self._add_member(i)
        while self.next_base < len(self.bases) and self.bases[self.next_base] == i:
            self.next_base += 1
            self._add_member(i)
            lev = self.members[-1]
            if lev.periodic:
                q = tuple(lev.cert.q)
                stop = self._next_base_after(i)
                track = IncrementalBanded(PowerPrefix(q, stop + 6 * k + 1), 6 * k)
                track.extend(self.syms[:i])
                self.ext = (track, stop)

    def push(self, ch) -> int:
        return self.push_with_witness(ch)[0]

    def push_with_witness(self, ch):
        """Capped distance of the new prefix and, in debug mode, ``(split, script)`` to a closest square."""
        k = self.k
        i = self._read(ch)
        self.filter_hit = False
        self._grow_family(i)
        for lev in self.members:
            if lev.dem is not None or lev.per is not None:
                self._advance(lev, i)
        h = i // 2
        self._retire(h)
        idx = bisect_right(self.member_lens, h - self.half) - 1
        if self.debug:
            self.peak_words = max(self.peak_words, self.words())
        if idx < 0:
            self.filter_hit = True
            best, j = (int(v) for v in _sq_min(self.buf.arr, i, k))
            return best, (self._witness(i, j) if self.debug and best <= k else None)
        lev = self.members[idx]
        e = h + lev.ell
        passes = (lev.per is not None and lev.per.contains(e)) if lev.periodic else e in lev.occ
        if not passes:
            return k + 1, None
        self.filter_hit = True
        self.stats["filter_passes"] += 1
        if lev.periodic:
            best, j = self._periodic_eval(lev, i)
        else:
            best, j = (int(v) for v in _sq_min(self.buf.arr, i, k))
            self.stats["naive_evals"] += 1
        return best, (self._witness(i, j) if self.debug and best <= k else None)

    def _retire(self, h: int) -> None:
        # a member stops being selectable once the next one is, and its matcher has finished
        while len(self.members) >= 2 and self.member_lens[1] + self.half <= h - 1:
            lev = self.members[0]
            if lev.last_end > self.i:
                break
            self.members.pop(0)
            self.member_lens.pop(0)

    def _periodic_eval(self, lev: _LedLevel, i: int):
        k = self.k
        h = i // 2
        q = tuple(lev.cert.q)
        lay = _script_layout((self.buf.arr, 0, 1, i), q, 2 * (10 * k + 1) + 7 * k + 1)
        if lay is None:
            self.stats["naive_evals"] += 1
            return tuple(int(v) for v in _sq_min(self.buf.arr, i, k))
        self.stats["periodic_evals"] += 1
        whole = SliceView(self.syms, 0, i)
        best, bj = k + 1, -1
        for j in range(max(0, h - k), min(i, h + k) + 1):
            if abs(i - 2 * j) > k:
                continue

            def oracle(x: int, y: int, j=j) -> int:
                return min(j - x, lcp_periodic(whole, x, whole, j + y, None, None, q, layouts=(lay, lay)))

            table = lv_build(SliceView(self.syms, 0, j), SliceView(self.syms, j, i - j), k, oracle)
            val = table.query(j, i - j)
            if val < best:
                best, bj = val, j
        return best, bj

    def _witness(self, i: int, j: int):
        t = self.syms
        _, script = banded_ed(tuple(t[:j]), tuple(t[j:i]), self.k)
        return j, script

    def words(self) -> int:
        w = 8 + sum(lev.words() for lev in self.members)
        if self.ext is not None:
            w += len(self.ext[0].col)
        return w


def ro_led_table(text, language: str, k: int) -> list[int]:
    state = RoLedPal(k) if language == "pal" else RoLedSq(k, max_n=max(len(text), 1))
    return [state.push(c) for c in as_symbols(text)]
