"""Edit-distance toolkit: banded DP, Landau-Vishkin, LCP in approximately periodic strings,
d-error periods and offline k-error occurrences.

Strings are random-access sequences; the numba kernels instead take a flat
``(base array, offset, sign, length)`` description so that reversed prefixes
and fragments of a read-only text can be passed without copying:
character ``x`` (0-based) is ``base[offset + sign * x]``.

Edit scripts follow :class:`langdist.core.EditScript`: operations are applied
left to right and positions refer to the current string, so the scripts
produced here have non-decreasing positions.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numba
import numpy as np

from .core import (
    EXCEEDS,
    Del,
    EditScript,
    Ins,
    PeriodCertificate,
    PowerPrefix,
    Sub,
    as_symbols,
    is_primitive,
    lcp as naive_lcp,
    smallest_period,
)

INF = 1 << 30


# ---------------------------------------------------------------------------
# Banded dynamic programming


def _band_table(u: Sequence, v: Sequence, k: int):
    """Rows ``D[x][y - x + k]`` for ``|x - y| <= k``; out-of-band cells are ``INF``."""
    n, m = len(u), len(v)
    w = 2 * k + 1
    rows = []
    prev = [INF] * w
    for y in range(0, min(m, k) + 1):
        prev[y + k] = y
    rows.append(prev)
    for x in range(1, n + 1):
        cur = [INF] * w
        ux = u[x - 1]
        for off in range(w):
            y = x + off - k
            if y < 0 or y > m:
                continue
            if y == 0:
                cur[off] = x
                continue
            best = prev[off] + (ux != v[y - 1])  # diagonal: same offset in the previous row
            if off + 1 < w and prev[off + 1] + 1 < best:  # (x-1, y) -> delete u[x]
                best = prev[off + 1] + 1
            if off > 0 and cur[off - 1] + 1 < best:  # (x, y-1) -> insert v[y]
                best = cur[off - 1] + 1
            cur[off] = best
        rows.append(cur)
        prev = cur
    return rows


def _trace(rows, u: Sequence, v: Sequence, k: int, x: int, y: int) -> EditScript:
    rev = []
    while x > 0 or y > 0:
        off = y - x + k
        cur = rows[x][off]
        if x > 0 and y > 0 and rows[x - 1][off] + (u[x - 1] != v[y - 1]) == cur:
            if u[x - 1] != v[y - 1]:
                rev.append(("S", y, v[y - 1]))
            x -= 1
            y -= 1
        elif x > 0 and off + 1 <= 2 * k and rows[x - 1][off + 1] + 1 == cur:
            rev.append(("D", y + 1, None))
            x -= 1
        else:
            rev.append(("I", y, v[y - 1]))
            y -= 1
    ops = []
    for kind, pos, ch in reversed(rev):
        if kind == "S":
            ops.append(Sub(pos, ch))
        elif kind == "D":
            ops.append(Del(pos))
        else:
            ops.append(Ins(pos, ch))
    return EditScript(tuple(ops))


def banded_ed(u: Sequence, v: Sequence, k: int):
    """``(ed(u, v), optimal EditScript)`` when ``ed(u, v) <= k``, else ``EXCEEDS``."""
    if abs(len(u) - len(v)) > k:
        return EXCEEDS
    rows = _band_table(u, v, k)
    d = rows[len(u)][len(v) - len(u) + k]
    if d > k:
        return EXCEEDS
    return d, _trace(rows, u, v, k, len(u), len(v))


class IncrementalBanded:
    """Banded DP of a fixed string ``a`` against a growing string ``b``.

    ``a`` may be any random-access sequence, including a lazily indexed
    periodic one; only ``a[..len(b) + k + start_window]`` is ever read.
    With ``start_window = w > 0`` the alignment may skip up to ``w - 1`` leading
    characters of ``a`` for free.  Each :meth:`append` costs O(k + w).
    """

    def __init__(self, a: Sequence, k: int, start_window: int = 0, a_len: int | None = None):
        self.a = a
        self.k = k
        self.w = max(start_window, 1)
        self.a_len = a_len if a_len is not None else (len(a) if hasattr(a, "__len__") else INF)
        self.y = 0
        hi = min(self.a_len, self.w - 1 + k)
        # column for b = empty: cells L in [0, hi]
        self.lo = 0
        self.col = [0 if L < self.w else L - (self.w - 1) for L in range(hi + 1)]

    def append(self, ch) -> None:
        k, w = self.k, self.w
        y = self.y + 1
        lo = max(0, y - k)
        hi = min(self.a_len, y + w - 1 + k)
        prev, plo = self.col, self.lo
        col = []
        for L in range(lo, hi + 1):
            best = INF
            pi = L - plo
            if 0 <= pi < len(prev):  # (L, y-1) -> insert b[y]
                best = prev[pi] + 1
            if L > 0:
                if 0 <= pi - 1 < len(prev):
                    c = prev[pi - 1] + (self.a[L - 1] != ch)
                    if c < best:
                        best = c
                if col and col[-1] + 1 < best:  # (L-1, y) -> skip a[L]
                    best = col[-1] + 1
            col.append(min(best, INF))
        self.col, self.lo, self.y = col, lo, y

    def extend(self, chars) -> None:
        for c in chars:
            self.append(c)

    def best(self) -> int:
        """``min`` over prefixes of ``a`` (after the free start) of the distance to ``b``."""
        return min(self.col) if self.col else INF

    def value(self, length: int | None = None) -> int:
        """Distance between ``b`` and ``a[..length]`` (default ``len(a)``) if inside the band."""
        L = self.a_len if length is None else length
        idx = L - self.lo
        return self.col[idx] if 0 <= idx < len(self.col) else INF


def periodic_script(u: Sequence, q: Sequence, budget: int):
    """Closest windows of ``Q^∞`` to ``u`` with free start phase and free end.

    Returns ``(cost, phase, length, script)`` where ``script`` turns ``u`` into
    ``Q^∞[phase .. phase + length)``, or ``None`` when every window costs more
    than ``budget``.  Ties go to the smallest cost, then the smallest phase,
    then the shortest window.
    """
    q = tuple(q)
    p = len(q)
    n = len(u)
    best = None
    for phase in range(p):
        target = PowerPrefix(q[phase:] + q[:phase], n + budget)
        rows = _band_table(u, target, budget)
        last = rows[n]
        for off, c in enumerate(last):
            L = n + off - budget
            if 0 <= L <= n + budget and c <= budget:
                key = (c, phase, L)
                if best is None or key < best[0]:
                    best = (key, rows, target)
    if best is None:
        return None
    (c, phase, L), rows, target = best
    script = _trace(rows, u, target, budget, n, L)
    return c, phase, L, script


# ---------------------------------------------------------------------------
# Landau-Vishkin


@dataclass
class LVTable:
    """Furthest-reaching points: ``L[e][d + k]`` is the largest ``x`` with ``ed(u[..x], v[..x+d]) <= e``.

    ``-1`` marks an unreachable diagonal.
    """

    k: int
    table: list
    len_u: int
    len_v: int

    def query(self, x: int, y: int) -> int:
        """``ed_{<=k}(u[..x], v[..y])`` (``k + 1`` means more than ``k``)."""
        d = y - x
        if abs(d) > self.k:
            return self.k + 1
        for e in range(self.k + 1):
            if self.table[e][d + self.k] >= x:
                return e
        return self.k + 1


def lv_build(u: Sequence, v: Sequence, k: int, lcp_oracle: Callable[[int, int], int] | None = None) -> LVTable:
    """Landau-Vishkin table using ``O(k^2)`` LCP queries ``lcp_oracle(x, y)`` (0-based)."""
    n, m = len(u), len(v)
    if lcp_oracle is None:
        lcp_oracle = lambda x, y: naive_lcp(u, v, x, y)  # noqa: E731
    w = 2 * k + 1
    table = []
    prev = None
    for e in range(k + 1):
        row = [-1] * w
        for d in range(-min(e, k), min(e, k) + 1):
            idx = d + k
            best = -1
            if e == 0:
                best = 0 if d == 0 else -1
            else:
                if prev[idx] >= 0:
                    best = prev[idx] + 1  # substitution
                if idx - 1 >= 0 and prev[idx - 1] >= 0:
                    best = max(best, prev[idx - 1])  # insertion (advance in v)
                if idx + 1 < w and prev[idx + 1] >= 0:
                    best = max(best, prev[idx + 1] + 1)  # deletion (advance in u)
                if best < 0 and d == -e:
                    best = e  # reach (e, 0) by deleting the first e characters of u
                if best < 0 and d == e:
                    best = 0  # reach (0, e) by inserting
            if best < 0:
                continue
            best = min(best, n, m - d)
            if best < max(0, -d):
                continue
            best += lcp_oracle(best, best + d) if best < n and best + d < m else 0
            row[idx] = best
        table.append(row)
        prev = row
    return LVTable(k, table, n, m)


@numba.njit(cache=True)
def _lv_flat(a, aoff, asg, alen, b, boff, bsg, blen, k):
    w = 2 * k + 1
    table = np.full((k + 1, w), -1, dtype=np.int64)
    for e in range(k + 1):
        lim = min(e, k)
        for d in range(-lim, lim + 1):
            idx = d + k
            best = -1
            if e == 0:
                best = 0 if d == 0 else -1
            else:
                pv = table[e - 1]
                if pv[idx] >= 0:
                    best = pv[idx] + 1
                if idx - 1 >= 0 and pv[idx - 1] >= 0 and pv[idx - 1] > best:
                    best = pv[idx - 1]
                if idx + 1 < w and pv[idx + 1] >= 0 and pv[idx + 1] + 1 > best:
                    best = pv[idx + 1] + 1
                if best < 0 and d == -e:
                    best = e
                if best < 0 and d == e:
                    best = 0
            if best < 0:
                continue
            if best > alen:
                best = alen
            if best > blen - d:
                best = blen - d
            lo = -d if d < 0 else 0
            if best < lo:
                continue
            x = best
            y = best + d
            while x < alen and y < blen and a[aoff + asg * x] == b[boff + bsg * y]:
                x += 1
                y += 1
            table[e, idx] = x
    return table


@numba.njit(cache=True)
def _lv_query(table, k, x, y):
    d = y - x
    if d > k or d < -k:
        return k + 1
    for e in range(k + 1):
        if table[e, d + k] >= x:
            return e
    return k + 1


def lv_flat(a: tuple, b: tuple, k: int) -> np.ndarray:
    """Numba Landau-Vishkin with naive LCP; ``a`` and ``b`` are ``(base, offset, sign, length)``."""
    return _lv_flat(a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], k)


def lv_query(table: np.ndarray, k: int, x: int, y: int) -> int:
    return int(_lv_query(table, k, x, y))


@numba.njit(cache=True)
def _ed_flat(a, aoff, asg, alen, b, boff, bsg, blen, k):
    t = _lv_flat(a, aoff, asg, alen, b, boff, bsg, blen, k)
    return _lv_query(t, k, alen, blen)


def ed_flat(a: tuple, b: tuple, k: int) -> int:
    """``ed_{<=k}`` of two flat strings via Landau-Vishkin."""
    return int(_ed_flat(a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3], k))


def flat_of(seq) -> tuple:
    arr = np.asarray(as_symbols(seq), dtype=np.int64) if not isinstance(seq, np.ndarray) else seq
    return arr, 0, 1, len(arr)


# ---------------------------------------------------------------------------
# LCP in approximately periodic strings


class _PeriodicLayout:
    """Where a string copies ``Q^∞`` (from ``phase``) under an edit script."""

    def __init__(self, script: EditScript, n: int, phase: int):
        starts, ends, shifts = [], [], []
        special = set()
        ux = 0  # characters of u consumed
        tx = 0  # characters of the target produced

        def copy_until(stop_u):
            nonlocal ux, tx
            if stop_u > ux:
                starts.append(ux)
                ends.append(stop_u)
                shifts.append(tx - ux + phase)
                tx += stop_u - ux
                ux = stop_u

        for op in script:
            # the op acts at target position op.pos, i.e. after copying op.pos - 1 - tx characters
            copy_until(ux + (op.pos - 1 - tx))
            if isinstance(op, Sub):
                special.add(ux)
                ux += 1
                tx += 1
            elif isinstance(op, Del):
                special.add(ux)
                ux += 1
            else:
                tx += 1
        copy_until(n)
        self.starts, self.ends, self.shifts, self.special = starts, ends, shifts, special

    def run(self, x: int):
        """``(end, shift)`` of the copied run containing ``x``, or ``None`` if ``x`` is edited."""
        if x in self.special:
            return None
        idx = bisect_right(self.starts, x) - 1
        if idx < 0 or x >= self.ends[idx]:
            return None
        nxt = self.ends[idx]
        return nxt, self.shifts[idx]


def lcp_periodic(
    u: Sequence,
    i: int,
    v: Sequence,
    j: int,
    es_u: EditScript,
    es_v: EditScript,
    q,
    phase_u: int = 0,
    phase_v: int = 0,
    layouts: tuple | None = None,
) -> int:
    """``LCP(u[i:], v[j:])`` (0-based) given scripts from ``u``, ``v`` to windows of ``Q^∞``.

    ``es_u`` turns ``u`` into ``Q^∞[phase_u ..)`` and likewise for ``v``.
    Runs over copied stretches in equal phase are skipped in O(1); in
    different phases a mismatch appears within ``|Q|`` characters because
    ``Q`` is primitive.  Time O((|es_u| + |es_v| + 1) |Q|).
    """
    p = q if isinstance(q, int) else len(q)
    lu = layouts[0] if layouts else _PeriodicLayout(es_u, len(u), phase_u)
    lv = layouts[1] if layouts else _PeriodicLayout(es_v, len(v), phase_v)
    nu, nv = len(u), len(v)
    a, b = i, j
    while a < nu and b < nv:
        ru = lu.run(a)
        rv = lv.run(b)
        if ru is None or rv is None:
            if u[a] != v[b]:
                break
            a += 1
            b += 1
            continue
        span = min(ru[0] - a, rv[0] - b)
        if (a + ru[1] - b - rv[1]) % p == 0:
            a += span
            b += span
            continue
        t = 0
        lim = min(span, p)
        while t < lim and u[a + t] == v[b + t]:
            t += 1
        a += t
        b += t
        if t < span:
            break
    return a - i


def periodic_layout(script: EditScript, n: int, phase: int = 0) -> _PeriodicLayout:
    return _PeriodicLayout(script, n, phase)


# ---------------------------------------------------------------------------
# d-error periods


@numba.njit(cache=True)
def _ed_to_power(u, c, phase, cap):
    """min over L of ed(u, C^∞[phase .. phase + L)), capped at cap + 1."""
    n = len(u)
    p = len(c)
    w = 2 * cap + 1
    big = cap + 1
    prev = np.full(w, big, dtype=np.int64)
    for off in range(cap, w):
        prev[off] = off - cap  # row x = 0: L = off - cap insertions
    for x in range(1, n + 1):
        cur = np.full(w, big, dtype=np.int64)
        for off in range(w):
            L = x + off - cap
            if L < 0:
                continue
            if L == 0:
                cur[off] = min(x, big)
                continue
            best = prev[off] + (1 if u[x - 1] != c[(phase + L - 1) % p] else 0)
            if off + 1 < w and prev[off + 1] + 1 < best:
                best = prev[off + 1] + 1
            if off > 0 and cur[off - 1] + 1 < best:
                best = cur[off - 1] + 1
            cur[off] = min(best, big)
        prev = cur
    best = big
    for off in range(w):
        if prev[off] < best:
            best = prev[off]
    return best


def _smallest_rotation(q: tuple) -> tuple:
    return min(q[r:] + q[:r] for r in range(len(q)))


def ed_period(u, d: int) -> PeriodCertificate | None:
    """Certificate that ``u`` is d-error periodic, or ``None``.

    ``u`` is cut into ``4d`` equal blocks; at most ``2d`` of them are touched
    by the edits, and an untouched block is exactly periodic with a rotation
    of ``Q`` as its period.  Each block period seeds one candidate class; the
    admissible rotation is found by a banded DP against ``Q^∞`` and the
    certificate carries an optimal script.  Among admissible rotations the
    lexicographically smallest is returned.
    """
    if d < 1:
        raise ValueError("d must be positive")
    u = as_symbols(u)
    n = len(u)
    qmax = n // (128 * d)
    if qmax < 1:
        return None
    nb = 4 * d
    blen = n // nb
    arr = np.asarray(u, dtype=np.int64)
    tried = set()
    for b in range(nb):
        block = u[b * blen : (b + 1) * blen]
        per = smallest_period(block)
        if per > qmax or 2 * per > len(block):
            continue
        root = _smallest_rotation(tuple(block[:per]))
        if root in tried:
            continue
        tried.add(root)
        carr = np.asarray(root, dtype=np.int64)
        admissible = []
        for r in range(per):
            if _ed_to_power(arr, carr, r, 2 * d) <= 2 * d:
                admissible.append(root[r:] + root[:r])
        if not admissible:
            continue
        q = min(admissible)
        if not is_primitive(q):
            continue
        best = None
        for L in range(max(0, n - 2 * d), n + 2 * d + 1):
            res = banded_ed(u, PowerPrefix(q, L), 2 * d)
            if res is not EXCEEDS and (best is None or res[0] < best[0]):
                best = res
        if best is not None:
            return PeriodCertificate(q, "edit", best[1], d)
    return None


# ---------------------------------------------------------------------------
# Offline k-error occurrences


@dataclass(frozen=True)
class Chain:
    """Occurrence ends ``start, start + diff, ...`` (``count`` of them), all at distance ``dist``."""

    start: int
    diff: int
    count: int
    dist: int

    def ends(self) -> list[int]:
        return [self.start + x * self.diff for x in range(self.count)]

    def __contains__(self, end: int) -> bool:
        off = end - self.start
        if self.diff == 0:
            return off == 0
        return off >= 0 and off % self.diff == 0 and off // self.diff < self.count


@numba.njit(cache=True)
def _sellers_flat(p, poff, psg, m, t, toff, tsg, n, k, first_end):
    """min_j ed(P, T(j..i]) capped at k+1 for i in [first_end, n] (1-based ends)."""
    big = k + 1
    col = np.empty(m + 1, dtype=np.int64)
    for x in range(m + 1):
        col[x] = x if x < big else big
    lfirst = first_end if first_end > 0 else 1
    out = np.full(n - lfirst + 1 if n >= lfirst else 0, big, dtype=np.int64)
    # Ukkonen cut-off: rows beyond `last` hold values > k
    last = min(m, k)
    for i in range(1, n + 1):
        c = t[toff + tsg * (i - 1)]
        diag = col[0]
        col[0] = 0
        top = min(m, last + 1)
        for x in range(1, top + 1):
            old = col[x] if x <= last else big
            best = diag + (1 if p[poff + psg * (x - 1)] != c else 0)
            if old + 1 < best:
                best = old + 1
            if col[x - 1] + 1 < best:
                best = col[x - 1] + 1
            if best > big:
                best = big
            diag = old
            col[x] = best
        for x in range(top + 1, m + 1):
            col[x] = big
        last = top
        while last > 0 and col[last] > k:
            last -= 1
        if i >= lfirst:
            out[i - lfirst] = col[m] if m <= last or col[m] <= k else big
    return out


def kerror_ends_flat(p: tuple, t: tuple, k: int, first_end: int = 1) -> np.ndarray:
    """Capped ``min_j ed(P, T(j..i])`` for ends ``i >= first_end`` of flat strings."""
    return _sellers_flat(p[0], p[1], p[2], p[3], t[0], t[1], t[2], t[3], k, first_end)


def chains_of(occ: list[tuple[int, int]], q: int) -> list[Chain]:
    """Split ``(end, dist)`` pairs into maximal progressions of difference ``q`` with equal distance.

    Chains with different residues may interleave.
    """
    by_key: dict = {}
    for end, dist in occ:
        by_key.setdefault((dist, end % q), []).append(end)
    out = []
    for (dist, _), ends in by_key.items():
        ends.sort()
        start = prev = ends[0]
        count = 1
        for e in ends[1:]:
            if e == prev + q:
                count += 1
            else:
                out.append(Chain(start, q, count, dist))
                start, count = e, 1
            prev = e
        out.append(Chain(start, q, count, dist))
    out.sort(key=lambda c: (c.start, c.dist))
    return out


def offline_kerror_occs(p, t, k: int, with_chains: bool = False, period: PeriodCertificate | None = None):
    """All k-error occurrence ends (1-based) with their minimal distances.

    When ``with_chains`` is set and ``p`` is 2k-error periodic (``period`` may
    be supplied to skip the detection), the occurrences are additionally
    compressed into chains of difference ``|Q|``.
    """
    ps = as_symbols(p)
    ts = as_symbols(t)
    if len(ps) == 0:
        occ = [(i, 0) for i in range(0, len(ts) + 1)]
    else:
        dist = kerror_ends_flat(flat_of(ps), flat_of(ts), k)
        occ = [(i + 1, int(dd)) for i, dd in enumerate(dist.tolist()) if dd <= k]
    if not with_chains:
        return occ
    if period is None and k >= 1:
        period = ed_period(ps, 2 * k)
    chains = chains_of(occ, len(period.q)) if period is not None else None
    return occ, chains


# ---------------------------------------------------------------------------
# Scripts against Q^∞ for flat strings


@numba.njit(cache=True)
def _power_band(u, uoff, usg, n, c, phase, cap):
    """Band table of ``u`` against ``C^∞[phase ..)``: ``D[x, L - x + cap]``, capped at ``cap + 1``."""
    p = len(c)
    w = 2 * cap + 1
    big = cap + 1
    D = np.full((n + 1, w), big, dtype=np.int32)
    for off in range(cap, w):
        D[0, off] = off - cap
    for x in range(1, n + 1):
        ux = u[uoff + usg * (x - 1)]
        for off in range(w):
            L = x + off - cap
            if L < 0:
                continue
            if L == 0:
                D[x, off] = x if x < big else big
                continue
            best = D[x - 1, off] + (1 if ux != c[(phase + L - 1) % p] else 0)
            if off + 1 < w and D[x - 1, off + 1] + 1 < best:
                best = D[x - 1, off + 1] + 1
            if off > 0 and D[x, off - 1] + 1 < best:
                best = D[x, off - 1] + 1
            D[x, off] = best if best < big else big
    return D


@numba.njit(cache=True)
def _power_trace(D, u, uoff, usg, n, c, phase, cap, L):
    """Traceback into (kind, pos, ch) arrays; kind 0 = Sub, 1 = Del, 2 = Ins."""
    p = len(c)
    cost = D[n, L - n + cap]
    kinds = np.empty(cost, dtype=np.int64)
    pos = np.empty(cost, dtype=np.int64)
    chs = np.empty(cost, dtype=np.int64)
    t = cost
    x = n
    y = L
    while x > 0 or y > 0:
        off = y - x + cap
        cur = D[x, off]
        if x > 0 and y > 0:
            cy = c[(phase + y - 1) % p]
            mis = 1 if u[uoff + usg * (x - 1)] != cy else 0
            if D[x - 1, off] + mis == cur:
                if mis:
                    t -= 1
                    kinds[t] = 0
                    pos[t] = y
                    chs[t] = cy
                x -= 1
                y -= 1
                continue
        if x > 0 and off + 1 < 2 * cap + 1 and D[x - 1, off + 1] + 1 == cur:
            t -= 1
            kinds[t] = 1
            pos[t] = y + 1
            chs[t] = 0
            x -= 1
            continue
        t -= 1
        kinds[t] = 2
        pos[t] = y
        chs[t] = c[(phase + y - 1) % p]
        y -= 1
    return kinds, pos, chs


def periodic_script_flat(u: tuple, q, budget: int):
    """As :func:`periodic_script` for a flat string ``(base, offset, sign, length)``."""
    base, uoff, usg, n = u
    carr = np.asarray(as_symbols(q), dtype=np.int64)
    p = len(carr)
    best = None
    for phase in range(p):
        D = _power_band(base, uoff, usg, n, carr, phase, budget)
        row = D[n]
        off = int(np.argmin(row))
        c = int(row[off])
        if c <= budget and (best is None or (c, phase, n + off - budget) < best[0]):
            best = ((c, phase, n + off - budget), D)
    if best is None:
        return None
    (c, phase, L), D = best
    kinds, pos, chs = _power_trace(D, base, uoff, usg, n, carr, phase, budget, L)
    ops = []
    for kd, ps, ch in zip(kinds.tolist(), pos.tolist(), chs.tolist()):
        ops.append(Sub(ps, ch) if kd == 0 else Del(ps) if kd == 1 else Ins(ps, ch))
    return c, phase, L, EditScript(tuple(ops))
