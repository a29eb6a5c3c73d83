"""Arithmetic modulo the Mersenne prime 2^61 - 1, compiled with numba.

Field elements are int64 values in ``[0, P)``.  Polynomials are int64 arrays
of coefficients, lowest degree first, paired with an explicit degree.
"""

from __future__ import annotations

import numba
import numpy as np

P = (1 << 61) - 1
_M31 = (1 << 31) - 1
_M30 = (1 << 30) - 1


@numba.njit(cache=True, inline="always")
def mulmod(a, b):
    ah = a >> 31
    al = a & _M31
    bh = b >> 31
    bl = b & _M31
    hh = ah * bh
    mid = ah * bl + al * bh
    ll = al * bl
    t = (hh << 1) + (mid >> 30) + ((mid & _M30) << 31)
    t = (t & P) + (t >> 61)
    t += ll
    t = (t & P) + (t >> 61)
    t = (t & P) + (t >> 61)
    if t >= P:
        t -= P
    return t


@numba.njit(cache=True, inline="always")
def addmod(a, b):
    t = a + b
    if t >= P:
        t -= P
    return t


@numba.njit(cache=True, inline="always")
def submod(a, b):
    t = a - b
    if t < 0:
        t += P
    return t


@numba.njit(cache=True)
def powmod(a, e):
    result = 1
    base = a
    while e > 0:
        if e & 1:
            result = mulmod(result, base)
        base = mulmod(base, base)
        e >>= 1
    return result


@numba.njit(cache=True)
def invmod(a):
    return powmod(a, P - 2)


# ---------------------------------------------------------------------------
# Polynomials


@numba.njit(cache=True)
def poly_deg(a):
    d = len(a) - 1
    while d >= 0 and a[d] == 0:
        d -= 1
    return d


@numba.njit(cache=True)
def poly_rem(a, f, df):
    """a mod f for monic f of degree df >= 1; returns an array of length df."""
    r = a.copy()
    for d in range(len(r) - 1, df - 1, -1):
        c = r[d]
        if c != 0:
            shift = d - df
            for x in range(df + 1):
                r[shift + x] = submod(r[shift + x], mulmod(c, f[x]))
    out = np.zeros(df, dtype=np.int64)
    for x in range(min(df, len(r))):
        out[x] = r[x]
    return out


@numba.njit(cache=True)
def poly_mulmod(a, b, f, df):
    prod = np.zeros(2 * df, dtype=np.int64)
    for x in range(df):
        if a[x] == 0:
            continue
        for y in range(df):
            if b[y] != 0:
                prod[x + y] = addmod(prod[x + y], mulmod(a[x], b[y]))
    return poly_rem(prod, f, df)


@numba.njit(cache=True)
def poly_powmod(base, e, f, df):
    """base^e mod f where base has length df."""
    result = np.zeros(df, dtype=np.int64)
    result[0] = 1
    b = base.copy()
    while e > 0:
        if e & 1:
            result = poly_mulmod(result, b, f, df)
        b = poly_mulmod(b, b, f, df)
        e >>= 1
    return result


@numba.njit(cache=True)
def poly_monic_gcd(a, b):
    """Monic gcd of two polynomials (arrays may be padded with zeros)."""
    x = a.copy()
    y = b.copy()
    dx = poly_deg(x)
    dy = poly_deg(y)
    while dy >= 0:
        # x <- x mod y
        inv = invmod(y[dy])
        while dx >= dy:
            c = mulmod(x[dx], inv)
            shift = dx - dy
            for t in range(dy + 1):
                x[shift + t] = submod(x[shift + t], mulmod(c, y[t]))
            dx = poly_deg(x)
            if dx < 0:
                break
        x, y = y, x
        dx, dy = dy, dx
    out = np.zeros(max(dx + 1, 1), dtype=np.int64)
    if dx < 0:
        return out
    inv = invmod(x[dx])
    for t in range(dx + 1):
        out[t] = mulmod(x[t], inv)
    return out


@numba.njit(cache=True)
def poly_divexact(a, b):
    """Quotient a / b for monic b dividing a."""
    da = poly_deg(a)
    db = poly_deg(b)
    r = a.copy()
    q = np.zeros(da - db + 1, dtype=np.int64)
    for d in range(da, db - 1, -1):
        c = r[d]
        q[d - db] = c
        if c != 0:
            for t in range(db + 1):
                r[d - db + t] = submod(r[d - db + t], mulmod(c, b[t]))
    return q


@numba.njit(cache=True)
def _next_rand(state):
    state = (state * 6364136223846793005 + 1442695040888963407) & 0x7FFFFFFFFFFFFFFF
    return state


@numba.njit(cache=True)
def find_roots(f, rng_state):
    """All roots of the monic polynomial f if it splits into distinct linear factors.

    Returns an array of roots, or an empty array when f does not split
    (fewer distinct roots than its degree).  Uses gcd with x^P - x followed by
    randomised equal-degree splitting.
    """
    df = poly_deg(f)
    empty = np.zeros(0, dtype=np.int64)
    if df <= 0:
        return empty
    if df == 1:
        out = np.zeros(1, dtype=np.int64)
        out[0] = submod(0, f[0])
        return out
    # x^P mod f
    xpoly = np.zeros(df, dtype=np.int64)
    xpoly[1] = 1
    xp = poly_powmod(xpoly, P, f, df)
    g = np.zeros(df, dtype=np.int64)
    for t in range(df):
        g[t] = xp[t]
    g[1] = submod(g[1], 1)
    h = poly_monic_gcd(f, g)
    if poly_deg(h) != df:
        return empty
    roots = np.zeros(df, dtype=np.int64)
    nroots = 0
    stack = [f.copy()]
    state = rng_state
    half = (P - 1) // 2
    while len(stack) > 0:
        cur = stack.pop()
        dc = poly_deg(cur)
        if dc == 1:
            roots[nroots] = submod(0, cur[0])
            nroots += 1
            continue
        if dc == 2:
            # x^2 + b x + c: roots (-b +- sqrt(b^2 - 4c)) / 2, sqrt via exponent (P+1)/4
            b = cur[1]
            c = cur[0]
            disc = submod(mulmod(b, b), mulmod(4, c))
            s = powmod(disc, (P + 1) // 4)
            if mulmod(s, s) != disc:
                return empty
            inv2 = (P + 1) // 2
            roots[nroots] = mulmod(submod(s, b), inv2)
            roots[nroots + 1] = mulmod(submod(P - s if s != 0 else 0, b), inv2)
            nroots += 2
            continue
        while True:
            state = _next_rand(state)
            delta = state % P
            base = np.zeros(dc, dtype=np.int64)
            base[0] = delta
            base[1] = 1
            w = poly_powmod(base, half, cur, dc)
            w[0] = submod(w[0], 1)
            h = poly_monic_gcd(cur, w)
            dh = poly_deg(h)
            if 0 < dh < dc:
                stack.append(h)
                stack.append(poly_divexact(cur, h))
                break
    return roots[:nroots]
