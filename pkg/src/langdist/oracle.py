"""Brute-force reference implementations.

Everything here is written for clarity and independence from the algorithmic
modules: Hamming quantities are computed by direct comparison, edit distances
by textbook Wagner-Fischer dynamic programming.  The capped variants restrict
the same recurrence to the diagonal band that can hold values below the cap,
which leaves every capped value unchanged.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numba
import numpy as np

from .core import (
    Del,
    EditScript,
    Ins,
    PeriodCertificate,
    PowerPrefix,
    Sub,
    as_symbols,
    capped,
    hamming,
    is_primitive,
)

DEFAULT_SIZE_CAP = 4096
BIG = 1 << 40


class InternalDisagreement(AssertionError):
    """Two formulations of the same quantity produced different values."""


class OracleSizeExceeded(ValueError):
    pass


def _arr(t) -> np.ndarray:
    return np.asarray(as_symbols(t), dtype=np.int64)


def _check_size(n: int, cap: int) -> None:
    if n > cap:
        raise OracleSizeExceeded(f"input length {n} exceeds oracle cap {cap}")


# ---------------------------------------------------------------------------
# Edit distance kernels


@numba.njit(cache=True)
def wagner_fischer(u, v):
    m, n = len(u), len(v)
    prev = np.arange(n + 1)
    cur = np.empty(n + 1, dtype=np.int64)
    for x in range(1, m + 1):
        cur[0] = x
        for y in range(1, n + 1):
            best = prev[y - 1] + (0 if u[x - 1] == v[y - 1] else 1)
            if prev[y] + 1 < best:
                best = prev[y] + 1
            if cur[y - 1] + 1 < best:
                best = cur[y - 1] + 1
            cur[y] = best
        prev, cur = cur, prev
    return prev[n]


@numba.njit(cache=True)
def _capped_ed_kernel(u, v, cap):
    """min(cap, ed(u, v)) using only cells with |x - y| <= cap."""
    m, n = len(u), len(v)
    if abs(m - n) >= cap:
        return cap
    big = 1 << 40
    prev = np.full(n + 1, big, dtype=np.int64)
    cur = np.full(n + 1, big, dtype=np.int64)
    for y in range(0, min(n, cap) + 1):
        prev[y] = y
    for x in range(1, m + 1):
        lo = max(0, x - cap)
        hi = min(n, x + cap)
        if lo > 0:
            cur[lo - 1] = big
        if lo == 0:
            cur[0] = x
            start = 1
        else:
            start = lo
        for y in range(start, hi + 1):
            best = prev[y - 1] + (0 if u[x - 1] == v[y - 1] else 1)
            if prev[y] + 1 < best:
                best = prev[y] + 1
            if cur[y - 1] + 1 < best:
                best = cur[y - 1] + 1
            cur[y] = best
        if hi < n:
            cur[hi + 1] = big
        prev, cur = cur, prev
    r = prev[n]
    return r if r < cap else cap


@numba.njit(cache=True)
def _sellers(p, t, k):
    """For each end position, min over starts of ed(t(j..i], p) (free start)."""
    m = len(p)
    col = np.arange(m + 1)
    out = np.empty(len(t), dtype=np.int64)
    for i in range(1, len(t) + 1):
        diag = col[0]
        col[0] = 0
        for x in range(1, m + 1):
            up = col[x]
            best = diag + (0 if p[x - 1] == t[i - 1] else 1)
            if up + 1 < best:
                best = up + 1
            if col[x - 1] + 1 < best:
                best = col[x - 1] + 1
            col[x] = best
            diag = up
        out[i - 1] = col[m]
    return out


def edit_distance(u, v) -> int:
    return int(wagner_fischer(_arr(u), _arr(v)))


def capped_edit_distance(u, v, cap: int) -> int:
    return int(_capped_ed_kernel(_arr(u), _arr(v), cap))


@numba.njit(cache=True)
def _wf_table(u, v):
    m, n = len(u), len(v)
    D = np.empty((m + 1, n + 1), dtype=np.int32)
    for x in range(m + 1):
        D[x, 0] = x
    for y in range(n + 1):
        D[0, y] = y
    for x in range(1, m + 1):
        for y in range(1, n + 1):
            best = D[x - 1, y - 1] + (0 if u[x - 1] == v[y - 1] else 1)
            if D[x - 1, y] + 1 < best:
                best = D[x - 1, y] + 1
            if D[x, y - 1] + 1 < best:
                best = D[x, y - 1] + 1
            D[x, y] = best
    return D


def edit_script(u: Sequence, v: Sequence) -> EditScript:
    """An optimal script from ``u`` to ``v`` by full-table traceback (left to right)."""
    m, n = len(u), len(v)
    D = _wf_table(_arr(u), _arr(v))
    steps = []
    x, y = m, n
    while x or y:
        if x and y and D[x][y] == D[x - 1][y - 1] + (u[x - 1] != v[y - 1]):
            steps.append(("sub" if u[x - 1] != v[y - 1] else "keep", x, y))
            x, y = x - 1, y - 1
        elif x and D[x][y] == D[x - 1][y] + 1:
            steps.append(("del", x, y))
            x -= 1
        else:
            steps.append(("ins", x, y))
            y -= 1
    ops = []
    for kind, x, y in reversed(steps):
        # after this step, y characters of v are produced; positions refer to v
        if kind == "sub":
            ops.append(Sub(y, v[y - 1]))
        elif kind == "del":
            ops.append(Del(y + 1))
        elif kind == "ins":
            ops.append(Ins(y, v[y - 1]))
    return EditScript(tuple(ops))


# ---------------------------------------------------------------------------
# Prefix distance tables


def oracle_hd_pal(t, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> list[int]:
    a = _arr(t)
    _check_size(len(a), size_cap)
    out = []
    for i in range(1, len(a) + 1):
        h = i // 2
        left = a[:h]
        right = a[i - h : i][::-1]
        out.append(capped(int(np.count_nonzero(left != right)), k))
    return out


def oracle_hd_sq(t, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> list[int]:
    a = _arr(t)
    _check_size(len(a), size_cap)
    out = []
    for i in range(1, len(a) + 1):
        if i % 2:
            out.append(k + 1)
        else:
            h = i // 2
            out.append(capped(int(np.count_nonzero(a[:h] != a[h:i])), k))
    return out


@numba.njit(cache=True)
def _ed_pal_table(a, k):
    n = len(a)
    whole = np.empty(n, dtype=np.int64)
    window = np.empty(n, dtype=np.int64)
    for m in range(1, n + 1):
        u = a[:m]
        ur = u[::-1].copy()
        whole[m - 1] = _capped_ed_kernel(u, ur, 2 * k + 2)
        best = k + 1
        mid = m // 2
        for i in range(max(0, mid - k), min(m, mid + k) + 1):
            left = u[:i]
            r1 = u[i:][::-1].copy()
            e = _capped_ed_kernel(left, r1, k + 1)
            if e < best:
                best = e
            if i + 1 <= m:
                r2 = u[i + 1 :][::-1].copy()
                e = _capped_ed_kernel(left, r2, k + 1)
                if e < best:
                    best = e
        window[m - 1] = best
    return whole, window


def oracle_ed_pal(t, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> list[int]:
    """Capped edit distance of every prefix to the palindromes, computed two ways."""
    a = _arr(t)
    _check_size(len(a), size_cap)
    if len(a) == 0:
        return []
    whole, window = _ed_pal_table(a, k)
    out = []
    for i, (w, win) in enumerate(zip(whole.tolist(), window.tolist()), start=1):
        half = capped(w // 2 if w < 2 * k + 2 else k + 1, k)
        if half != win:
            raise InternalDisagreement(
                f"prefix {i}: half of ed(U, U^R) gives {half}, split window gives {win}"
            )
        out.append(win)
    return out


@numba.njit(cache=True)
def _ed_sq_table(a, k):
    n = len(a)
    out = np.empty(n, dtype=np.int64)
    for m in range(1, n + 1):
        best = k + 1
        mid = m // 2
        for i in range(max(0, mid - k), min(m, mid + k) + 1):
            e = _capped_ed_kernel(a[:i], a[i:m], k + 1)
            if e < best:
                best = e
        out[m - 1] = best
    return out


def oracle_ed_sq(t, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> list[int]:
    a = _arr(t)
    _check_size(len(a), size_cap)
    if len(a) == 0:
        return []
    return [int(x) for x in _ed_sq_table(a, k)]


# ---------------------------------------------------------------------------
# Occurrences


def oracle_occurrences(p, t, k: int, metric: str = "hamming") -> list[tuple[int, int]]:
    """``(end, distance)`` for every k-mismatch (or k-error) occurrence of ``p`` in ``t``."""
    pa, ta = _arr(p), _arr(t)
    m = len(pa)
    if metric == "hamming":
        out = []
        for i in range(m, len(ta) + 1):
            d = int(np.count_nonzero(ta[i - m : i] != pa))
            if d <= k:
                out.append((i, d))
        return out
    if metric == "edit":
        if len(ta) == 0:
            return []
        best = _sellers(pa, ta, k)
        return [(i + 1, int(d)) for i, d in enumerate(best.tolist()) if d <= k]
    raise ValueError(f"unknown metric {metric!r}")


def oracle_occurrence_mi(p, t, k: int) -> list[tuple[int, tuple]]:
    """Hamming occurrences with ``MI(T(i-|P|..i], P)`` in pattern coordinates (integer symbols)."""
    t = as_symbols(t)
    p = as_symbols(p)
    out = []
    for i, _ in oracle_occurrences(p, t, k, "hamming"):
        out.append((i, hamming(t[i - len(p) : i], p)))
    return out


# ---------------------------------------------------------------------------
# Approximate periods


def _hamming_period(a: np.ndarray, d: int):
    n = len(a)
    lmax = n // (128 * d)
    for L in range(1, lmax + 1):
        residues = np.arange(n) % L
        # counts[r, c] = number of positions x = r (mod L) with a[x] = c
        alphabet, codes = np.unique(a, return_inverse=True)
        counts = np.zeros((L, len(alphabet)), dtype=np.int64)
        np.add.at(counts, (residues, codes), 1)
        starts = np.arange(n - L + 1)
        frag = codes[starts[:, None] + np.arange(L)[None, :]]
        agree = counts[np.arange(L)[None, :], frag].sum(axis=1)
        dist = n - agree
        for s in np.flatnonzero(dist <= 2 * d).tolist():
            q = tuple(int(c) for c in a[s : s + L])
            if is_primitive(q):
                return q
    return None


def _edit_period_candidates(a: np.ndarray, d: int, L: int):
    """Rotations of length-L fragments lying in long exactly L-periodic runs.

    A string within 2d edits of a prefix of Q^∞ keeps an unedited piece of
    that prefix of length at least (|U| - 4d) / (2d + 1); it is a fragment of U
    with period |Q|, and Q is a rotation of each of its length-|Q| fragments.
    """
    n = len(a)
    need = max(2 * L, (n - 4 * d) // (2 * d + 1))
    eq = a[L:] == a[:-L] if n > L else np.zeros(0, dtype=bool)
    seen = set()
    x = 0
    while x < len(eq):
        if not eq[x]:
            x += 1
            continue
        y = x
        while y < len(eq) and eq[y]:
            y += 1
        run_len = (y - x) + L  # a[x .. y+L) has period L
        if run_len >= need:
            frag = tuple(int(c) for c in a[x : x + L])
            for r in range(L):
                q = frag[r:] + frag[:r]
                if q not in seen:
                    seen.add(q)
                    yield q
        x = y
    return


def _edit_certificate(u: tuple, q: tuple, d: int):
    """Script from u to the closest prefix of Q^∞ if that distance is at most 2d."""
    n = len(u)
    best = None
    ua = np.asarray(u, dtype=np.int64)
    for length in range(max(0, n - 2 * d), n + 2 * d + 1):
        target = PowerPrefix(q, length).materialize()
        e = int(_capped_ed_kernel(ua, np.asarray(target, dtype=np.int64), 2 * d + 1))
        if e <= 2 * d and (best is None or e < best[0]):
            best = (e, target)
    if best is None:
        return None
    return edit_script(u, best[1])


def oracle_period(u, d: int, metric: str = "hamming") -> PeriodCertificate | None:
    """Exhaustive search for a d-mismatch / d-error period with its witness."""
    if d < 1:
        raise ValueError("d must be positive")
    a = _arr(u)
    _check_size(len(a), DEFAULT_SIZE_CAP)
    ut = tuple(int(c) for c in a)
    if metric == "hamming":
        q = _hamming_period(a, d)
        if q is None:
            return None
        return PeriodCertificate(q, "hamming", hamming(ut, PowerPrefix(q, len(ut)).materialize()), d)
    if metric == "edit":
        for L in range(1, len(a) // (128 * d) + 1):
            for q in _edit_period_candidates(a, d, L):
                if not is_primitive(q):
                    continue
                script = _edit_certificate(ut, q, d)
                if script is not None:
                    return PeriodCertificate(q, "edit", script, d)
        return None
    raise ValueError(f"unknown metric {metric!r}")


# ---------------------------------------------------------------------------
# Enumeration of the languages themselves


def palindromes(alphabet: Sequence, length: int):
    half = (length + 1) // 2
    for left in itertools.product(alphabet, repeat=half):
        tail = left[: length // 2][::-1]
        yield tuple(left) + tuple(tail)


def squares(alphabet: Sequence, length: int):
    if length % 2:
        return
    for half in itertools.product(alphabet, repeat=length // 2):
        yield tuple(half) + tuple(half)


def brute_hd_to_language(u: Sequence, language: str, alphabet: Sequence) -> float:
    gen = palindromes if language == "pal" else squares
    best = math.inf
    for w in gen(alphabet, len(u)):
        best = min(best, sum(1 for a, b in zip(u, w) if a != b))
    return best


def brute_ed_to_language(u: Sequence, language: str, alphabet: Sequence) -> int:
    """Minimum edit distance to a member of the language.

    Candidates up to length ``|u| + ceil(|u|/2)`` suffice: both distances are at
    most ``ceil(|u|/2)``, and a member longer than that bound would be farther.
    """
    gen = palindromes if language == "pal" else squares
    ua = np.asarray(as_symbols(u), dtype=np.int64)
    bound = len(u) + (len(u) + 1) // 2
    best = BIG
    syms = as_symbols(alphabet)
    for length in range(0, bound + 1):
        for w in gen(syms, length):
            e = int(wagner_fischer(ua, np.asarray(w, dtype=np.int64)))
            best = min(best, e)
    return best
