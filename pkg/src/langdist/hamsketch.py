"""Hamming-distance sketches with concatenation, splitting and decoding.

A sketch of ``U`` over budget ``k`` stores, modulo the prime ``p = 2^61 - 1``:

* ``s_j = sum_x w(U[x]) * x^j`` for ``j = 0..2k+1`` (positions ``x`` are 1-based),
* ``t_j = sum_x w(U[x])^2 * x^j`` for ``j = 0..k``,
* a fingerprint ``sum_x w(U[x]) * r^x`` at a seed-derived point ``r``,
* ``r^|U|`` and ``r^-|U|`` so that concatenation and splitting stay O(k^2),

with symbol weight ``w(c) = 1 / (c + mu)`` for a seed-derived ``mu``.  Positions
enter the power sums through a seed-derived affine map ``y = alpha * x + beta``.
An affine map alone does not randomise anything: the syndromes stay an affine
image of integer moment sequences, and small-integer coincidences (common for
the antisymmetric differences of a palindrome test) can fake a short error
locator.  Random weights make such coincidences polynomial identities in
``mu`` that fail except with negligible probability.  For two sketches of equal length the
differences of the ``s_j`` are power sums of the mismatch positions weighted
by ``w(U[x]) - w(V[x])``; Berlekamp-Massey recovers the error locator when at
most ``k`` positions differ, its roots give the positions, and a transposed
Vandermonde solve gives the weight differences.  The ``t_j`` family yields
``w(U[x])^2 - w(V[x])^2`` and hence both characters.  Every candidate answer
is checked against all syndromes and the fingerprint before it is returned.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numba
import numpy as np

from ._field import P, addmod, find_roots, invmod, mulmod, powmod, submod
from .core import EXCEEDS, UnequalLength, as_symbols

MAX_SYMBOL = (1 << 32) - 1
_SERIAL_MAGIC = b"HSK"
_SERIAL_VERSION = 1

# decode status codes returned by the compiled kernel
_EQUAL, _FOUND, _EXCEEDS, _CAUGHT = 0, 1, 2, 3


class SketchOverflow(ValueError):
    """A sketch would describe a string longer than the configured maximum."""


@dataclass
class SketchStats:
    """Instrumentation shared by all sketches of one parameter set."""

    decodes: int = 0
    exceeds: int = 0
    failures: int = 0  # syndrome-consistent candidates rejected by later checks


@dataclass(frozen=True)
class SketchParams:
    """Sketch parameters; ``k`` is the decoding budget, ``n`` the maximum length.

    The field is fixed to ``2^61 - 1``; ``c`` only bounds how large ``n`` may be
    (``n^(c+1) < p``) so that the fingerprint fails with probability O(n^-c).
    """

    n: int
    k: int
    c: float = 2.0
    seed: int = 0x5EED

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if self.n < 1 or self.n >= P:
            raise ValueError("n out of range")
        if (self.n + 1) ** (self.c + 1) >= P:
            raise ValueError(f"n={self.n} too large for failure exponent c={self.c}")

    @property
    def p(self) -> int:
        return P

    @property
    def width(self) -> int:
        return 3 * self.k + 6

    @cached_property
    def _ctx(self) -> "_Context":
        return _Context(self)

    @property
    def stats(self) -> SketchStats:
        return self._ctx.stats


class _Context:
    def __init__(self, params: SketchParams):
        k = params.k
        rng = np.random.default_rng(params.seed)
        self.r = int(rng.integers(2, P - 1))
        self.r_inv = pow(self.r, P - 2, P)
        self.rng_state = int(rng.integers(1, 1 << 62))
        self.alpha = int(rng.integers(1, P - 1))
        self.beta = int(rng.integers(0, P - 1))
        self.alpha_inv = pow(self.alpha, P - 2, P)
        # c + mu never wraps around to 0 for symbols up to MAX_SYMBOL
        self.mu = int(rng.integers(1, P - MAX_SYMBOL - 1))
        self._weights: dict[int, int] = {}
        size = 2 * k + 2
        binom = np.zeros((size, size), dtype=np.int64)
        for j in range(size):
            for t in range(j + 1):
                binom[j, t] = math.comb(j, t) % P
        self.binom = binom
        self.stats = SketchStats()
        self.empty = np.zeros(params.width, dtype=np.int64)
        self.empty[3 * k + 4] = 1
        self.empty[3 * k + 5] = 1

    def weight(self, c: int) -> int:
        w = self._weights.get(c)
        if w is None:
            w = self._weights[c] = pow(c + self.mu, P - 2, P)
        return w


# ---------------------------------------------------------------------------
# Compiled kernels.  Layout: [s_0..s_{2k+1}, t_0..t_k, fp, r^len, r^-len]


@numba.njit(cache=True)
def _k_add_symbol(data, k, pos, w, r, r_inv):
    out = data.copy()
    n1 = 2 * k + 2
    w2 = mulmod(w, w)
    xp = 1
    for j in range(n1):
        out[j] = addmod(out[j], mulmod(w, xp))
        if j <= k:
            out[n1 + j] = addmod(out[n1 + j], mulmod(w2, xp))
        xp = mulmod(xp, pos)
    fpi = n1 + k + 1
    out[fpi + 1] = mulmod(out[fpi + 1], r)
    out[fpi + 2] = mulmod(out[fpi + 2], r_inv)
    out[fpi] = addmod(out[fpi], mulmod(w, out[fpi + 1]))
    return out


@numba.njit(cache=True)
def _k_encode(symbols, k, r, r_inv, alpha, beta, mu):
    n1 = 2 * k + 2
    out = np.zeros(3 * k + 6, dtype=np.int64)
    fpi = n1 + k + 1
    rp = 1
    for idx in range(len(symbols)):
        pos = addmod(mulmod(alpha, idx + 1), beta)
        w = invmod(symbols[idx] + mu)
        w2 = mulmod(w, w)
        xp = 1
        for j in range(n1):
            out[j] = addmod(out[j], mulmod(w, xp))
            if j <= k:
                out[n1 + j] = addmod(out[n1 + j], mulmod(w2, xp))
            xp = mulmod(xp, pos)
        rp = mulmod(rp, r)
        out[fpi] = addmod(out[fpi], mulmod(w, rp))
    out[fpi + 1] = rp
    out[fpi + 2] = powmod(r_inv, len(symbols))
    return out


@numba.njit(cache=True)
def _k_shift_into(src, offset, out, k, binom):
    """out[family] += syndromes of src with every position increased by offset."""
    n1 = 2 * k + 2
    opow = np.empty(n1, dtype=np.int64)
    opow[0] = 1
    for j in range(1, n1):
        opow[j] = mulmod(opow[j - 1], offset)
    for j in range(n1):
        acc = 0
        for t in range(j + 1):
            acc = addmod(acc, mulmod(mulmod(binom[j, t], opow[j - t]), src[t]))
        out[j] = addmod(out[j], acc)
    for j in range(k + 1):
        acc = 0
        for t in range(j + 1):
            acc = addmod(acc, mulmod(mulmod(binom[j, t], opow[j - t]), src[n1 + t]))
        out[n1 + j] = addmod(out[n1 + j], acc)


@numba.njit(cache=True)
def _k_concat(a, b, len_a, k, binom, alpha):
    n1 = 2 * k + 2
    fpi = n1 + k + 1
    out = a.copy()
    _k_shift_into(b, mulmod(alpha, len_a), out, k, binom)
    out[fpi] = addmod(a[fpi], mulmod(a[fpi + 1], b[fpi]))
    out[fpi + 1] = mulmod(a[fpi + 1], b[fpi + 1])
    out[fpi + 2] = mulmod(a[fpi + 2], b[fpi + 2])
    return out


@numba.njit(cache=True)
def _k_split(ab, a, len_a, k, binom, alpha):
    n1 = 2 * k + 2
    fpi = n1 + k + 1
    diff = np.empty_like(ab)
    for j in range(fpi):
        diff[j] = submod(ab[j], a[j])
    out = np.zeros_like(ab)
    _k_shift_into(diff, submod(0, mulmod(alpha, len_a)), out, k, binom)
    out[fpi] = mulmod(submod(ab[fpi], a[fpi]), a[fpi + 2])
    out[fpi + 1] = mulmod(ab[fpi + 1], a[fpi + 2])
    out[fpi + 2] = mulmod(ab[fpi + 2], a[fpi + 1])
    return out


@numba.njit(cache=True)
def _k_decode(a, b, length, k, r, rng_state, max_symbol, beta, alpha_inv, mu):
    """Returns (status, positions, weights_a, weights_b)."""
    n1 = 2 * k + 2
    fpi = n1 + k + 1
    none = np.zeros(0, dtype=np.int64)
    D = np.empty(n1, dtype=np.int64)
    T = np.empty(k + 1, dtype=np.int64)
    allzero = True
    for j in range(n1):
        D[j] = submod(a[j], b[j])
        if D[j] != 0:
            allzero = False
    for j in range(k + 1):
        T[j] = submod(a[n1 + j], b[n1 + j])
    fpd = submod(a[fpi], b[fpi])
    if allzero:
        if fpd == 0:
            for j in range(k + 1):
                if T[j] != 0:
                    return _CAUGHT, none, none, none
            return _EQUAL, none, none, none
        return _CAUGHT, none, none, none
    # Berlekamp-Massey over the first 2k syndromes
    C = np.zeros(n1 + 1, dtype=np.int64)
    B = np.zeros(n1 + 1, dtype=np.int64)
    C[0] = 1
    B[0] = 1
    L = 0
    m = 1
    bb = 1
    for nn in range(2 * k):
        d = D[nn]
        for i in range(1, L + 1):
            d = addmod(d, mulmod(C[i], D[nn - i]))
        if d == 0:
            m += 1
            continue
        coef = mulmod(d, invmod(bb))
        if 2 * L <= nn:
            Tmp = C.copy()
            for i in range(n1 + 1 - m):
                C[i + m] = submod(C[i + m], mulmod(coef, B[i]))
            L = nn + 1 - L
            B = Tmp
            bb = d
            m = 1
        else:
            for i in range(n1 + 1 - m):
                C[i + m] = submod(C[i + m], mulmod(coef, B[i]))
            m += 1
        if L > k:
            return _EXCEEDS, none, none, none
    if L == 0:
        return _EXCEEDS, none, none, none
    # the recurrence must also predict the two extra syndromes
    for nn in range(2 * k, n1):
        d = D[nn]
        for i in range(1, L + 1):
            d = addmod(d, mulmod(C[i], D[nn - i]))
        if d != 0:
            return _EXCEEDS, none, none, none
    if C[L] == 0:
        return _CAUGHT, none, none, none
    # locator with the positions as roots: sigma(x) = x^L C(1/x)
    sigma = np.zeros(L + 1, dtype=np.int64)
    for i in range(L + 1):
        sigma[L - i] = C[i]
    roots = find_roots(sigma, rng_state ^ D[0])
    if len(roots) != L:
        return _CAUGHT, none, none, none
    xs = np.empty(L, dtype=np.int64)
    for i in range(L):
        xs[i] = mulmod(submod(roots[i], beta), alpha_inv)
        if xs[i] < 1 or xs[i] > length:
            return _CAUGHT, none, none, none
    # values at each root: e_i = sum_j q_j D_j / q(x_i), q = sigma / (x - x_i)
    e = np.empty(L, dtype=np.int64)
    f = np.empty(L, dtype=np.int64)
    q = np.empty(L, dtype=np.int64)
    for i in range(L):
        xi = roots[i]
        carry = 0
        for d in range(L, 0, -1):
            carry = addmod(sigma[d], mulmod(carry, xi)) if d < L else sigma[d]
            q[d - 1] = carry
        den = 0
        for d in range(L - 1, -1, -1):
            den = addmod(mulmod(den, xi), q[d])
        if den == 0:
            return _CAUGHT, none, none, none
        inv = invmod(den)
        se = 0
        sf = 0
        for d in range(L):
            se = addmod(se, mulmod(q[d], D[d]))
            sf = addmod(sf, mulmod(q[d], T[d]))
        e[i] = mulmod(se, inv)
        f[i] = mulmod(sf, inv)
        if e[i] == 0:
            return _CAUGHT, none, none, none
    # full consistency check against every syndrome and the fingerprint
    xp = np.ones(L, dtype=np.int64)
    for j in range(n1):
        acc = 0
        acc2 = 0
        for i in range(L):
            acc = addmod(acc, mulmod(e[i], xp[i]))
            if j <= k:
                acc2 = addmod(acc2, mulmod(f[i], xp[i]))
        if acc != D[j] or (j <= k and acc2 != T[j]):
            return _CAUGHT, none, none, none
        for i in range(L):
            xp[i] = mulmod(xp[i], roots[i])
    acc = 0
    for i in range(L):
        acc = addmod(acc, mulmod(e[i], powmod(r, xs[i])))
    if acc != fpd:
        return _CAUGHT, none, none, none
    inv2 = (P + 1) // 2
    wa = np.empty(L, dtype=np.int64)
    wb = np.empty(L, dtype=np.int64)
    for i in range(L):
        s = mulmod(f[i], invmod(e[i]))  # w_a + w_b
        wa[i] = mulmod(addmod(s, e[i]), inv2)
        wb[i] = mulmod(submod(s, e[i]), inv2)
        if wa[i] == 0 or wb[i] == 0:
            return _CAUGHT, none, none, none
        wa[i] = submod(invmod(wa[i]), mu)  # back from weights to symbols
        wb[i] = submod(invmod(wb[i]), mu)
        if wa[i] > max_symbol or wb[i] > max_symbol:
            return _CAUGHT, none, none, none
    order = np.argsort(xs)
    return _FOUND, xs[order], wa[order], wb[order]


# ---------------------------------------------------------------------------
# Public interface


class HamSketch:
    """Immutable sketch of a string; compare with ``==``."""

    __slots__ = ("params", "length", "data")

    def __init__(self, params: SketchParams, length: int, data: np.ndarray):
        self.params = params
        self.length = length
        self.data = data

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HamSketch)
            and self.params == other.params
            and self.length == other.length
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.length, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"HamSketch(length={self.length}, k={self.params.k})"

    def words(self) -> int:
        return len(self.data) + 1

    def to_bytes(self) -> bytes:
        head = _SERIAL_MAGIC + struct.pack("<BIQ", _SERIAL_VERSION, self.params.k, self.length)
        return head + self.data.astype("<u8").tobytes()

    @classmethod
    def from_bytes(cls, raw: bytes, params: SketchParams) -> "HamSketch":
        if raw[:3] != _SERIAL_MAGIC:
            raise ValueError("not a serialised sketch")
        version, k, length = struct.unpack_from("<BIQ", raw, 3)
        if version != _SERIAL_VERSION or k != params.k:
            raise ValueError("incompatible sketch header")
        data = np.frombuffer(raw[16:], dtype="<u8").astype(np.int64)
        if len(data) != params.width:
            raise ValueError("truncated sketch payload")
        return cls(params, length, data)


def empty_sketch(params: SketchParams) -> HamSketch:
    return HamSketch(params, 0, params._ctx.empty)


def _weight_arg(ch) -> int:
    c = ord(ch) if isinstance(ch, str) else int(ch)
    if not 0 <= c <= MAX_SYMBOL:
        raise ValueError(f"symbol {c} outside supported alphabet")
    return c


def encode(u: Sequence, params: SketchParams) -> HamSketch:
    syms = np.asarray(as_symbols(u), dtype=np.int64)
    if len(syms) > params.n:
        raise SketchOverflow(f"length {len(syms)} exceeds n={params.n}")
    if len(syms) and (syms.min() < 0 or syms.max() > MAX_SYMBOL):
        raise ValueError("symbol outside supported alphabet")
    ctx = params._ctx
    data = _k_encode(syms, params.k, ctx.r, ctx.r_inv, ctx.alpha, ctx.beta, ctx.mu)
    return HamSketch(params, len(syms), data)


def append_char(s: HamSketch, ch) -> HamSketch:
    params = s.params
    if s.length >= params.n:
        raise SketchOverflow("append beyond n")
    ctx = params._ctx
    pos = (ctx.alpha * (s.length + 1) + ctx.beta) % P
    data = _k_add_symbol(s.data, params.k, pos, ctx.weight(_weight_arg(ch)), ctx.r, ctx.r_inv)
    return HamSketch(params, s.length + 1, data)


def append_blank(s: HamSketch) -> HamSketch:
    """Sketch of ``s`` followed by a weight-zero position (a blank symbol)."""
    params = s.params
    if s.length >= params.n:
        raise SketchOverflow("append beyond n")
    ctx = params._ctx
    pos = (ctx.alpha * (s.length + 1) + ctx.beta) % P
    data = _k_add_symbol(s.data, params.k, pos, 0, ctx.r, ctx.r_inv)
    return HamSketch(params, s.length + 1, data)


def prepend_char(s: HamSketch, ch) -> HamSketch:
    return concat(append_char(empty_sketch(s.params), ch), s)


def concat(a: HamSketch, b: HamSketch) -> HamSketch:
    params = a.params
    if a.length + b.length > params.n:
        raise SketchOverflow("concatenation beyond n")
    if b.length == 0:
        return a
    if a.length == 0:
        return b
    ctx = params._ctx
    data = _k_concat(a.data, b.data, a.length, params.k, ctx.binom, ctx.alpha)
    return HamSketch(params, a.length + b.length, data)


def split(ab: HamSketch, a: HamSketch) -> HamSketch:
    """Sketch of ``V`` given sketches of ``UV`` and ``U``."""
    if a.length > ab.length:
        raise ValueError("prefix longer than the whole")
    params = ab.params
    if a.length == 0:
        return ab
    ctx = params._ctx
    data = _k_split(ab.data, a.data, a.length, params.k, ctx.binom, ctx.alpha)
    return HamSketch(params, ab.length - a.length, data)


def decode(a: HamSketch, b: HamSketch):
    """``MI(U, V)`` as ``(pos, U[pos], V[pos])`` triples, or ``EXCEEDS`` if ``hd > k``.

    Characters are returned as integer symbols.

    Raises:
        UnequalLength: if the sketched strings have different lengths.
    """
    if a.length != b.length:
        raise UnequalLength(f"sketch lengths {a.length} and {b.length} differ")
    params = a.params
    ctx = params._ctx
    ctx.stats.decodes += 1
    status, pos, wa, wb = _k_decode(
        a.data, b.data, a.length, params.k, ctx.r, ctx.rng_state, MAX_SYMBOL,
        ctx.beta, ctx.alpha_inv, ctx.mu,
    )
    if status == _EQUAL:
        return ()
    if status == _FOUND:
        return tuple(
            (int(x), int(ca), int(cb)) for x, ca, cb in zip(pos.tolist(), wa.tolist(), wb.tolist())
        )
    ctx.stats.exceeds += 1
    if status == _CAUGHT:
        ctx.stats.failures += 1
    return EXCEEDS


def decode_distance(a: HamSketch, b: HamSketch) -> int | None:
    """Number of mismatches if at most ``k``, else ``None``."""
    mi = decode(a, b)
    return None if mi is EXCEEDS else len(mi)
