import random

import pytest
from hypothesis import given, strategies as st

from langdist.core import as_symbols, hamming
from langdist.hamsketch import SketchParams, encode, decode
from langdist.occstream import (
    BLANK,
    DelaySchedule,
    InvalidSchedule,
    NotReported,
    StreamClosed,
    new_matcher,
)
from langdist.oracle import oracle_occurrences


def params(k, n=1 << 12):
    return SketchParams(n=n, k=k, seed=11)


def collect(p, t, k, schedule, pad):
    m = new_matcher(p, k, schedule, params(k))
    out = []
    for step, c in enumerate(list(t) + [BLANK] * pad, 1):
        for end in m.push(c):
            tup = m.request_tuple(end)
            out.append((step, end, tup))
    return m, out


def test_none_mode_example():
    _, out = collect("ab", "abcacc", 1, DelaySchedule.none(), 0)
    assert [(s, e) for s, e, _ in out] == [(2, 2), (5, 5)]
    tup = out[1][2]
    assert tup.mi == ((2, ord("c"), ord("b")),)
    assert tup.mi_in_text(2) == ((5, ord("c"), ord("b")),)
    assert decode(tup.prefix_sketch, encode("abc", params(1))) == ()
    assert out[0][2].mi == ()


def test_fixed_mode_example():
    _, out = collect("ab", "abcacc", 1, DelaySchedule.fixed(2), 2)
    assert [(s, e) for s, e, _ in out] == [(4, 2), (7, 5)]


def test_variable_mode_example():
    sched = DelaySchedule.variable(lambda p: max(1, p - 1), 6)
    _, out = collect("abc", "abcxyz", 0, sched, 6)
    assert [(s, e) for s, e, _ in out] == [(5, 3)]


def test_no_occurrence():
    _, out = collect("zz", "abcacc", 0, DelaySchedule.none(), 0)
    assert out == []


def test_errors():
    with pytest.raises(InvalidSchedule):
        new_matcher("ab", 1, DelaySchedule.fixed(-1), params(1))
    with pytest.raises(InvalidSchedule):
        new_matcher("ab", 1, DelaySchedule.variable(lambda p: 10 - p, 5), params(1))
    m = new_matcher("ab", 1, DelaySchedule.none(), params(1))
    m.push("a")
    with pytest.raises(NotReported):
        m.request_tuple(1)
    m.close()
    with pytest.raises(StreamClosed):
        m.push("b")


def random_instance(rnd):
    sigma = rnd.choice([2, 3, 26])
    m = rnd.randint(1, 24)
    p = [rnd.randrange(sigma) for _ in range(m)]
    if rnd.random() < 0.5:
        p = [p[x % rnd.randint(1, 3)] for x in range(m)]
    n = rnd.randint(m, 160)
    t = [rnd.randrange(sigma) for _ in range(n)]
    for _ in range(rnd.randint(0, 4)):  # plant near-occurrences
        s = rnd.randint(0, n - m)
        t[s : s + m] = p
        if rnd.random() < 0.5:
            t[s + rnd.randrange(m)] = rnd.randrange(sigma)
    return p, t, rnd.randint(0, 3)


@given(st.integers(0, 10**6))
def test_fixed_delay_contract(seed):
    rnd = random.Random(seed)
    p, t, k = random_instance(rnd)
    delay = rnd.choice([0, 1, len(p), rnd.randint(0, 40)])
    _, out = collect(p, t, k, DelaySchedule.fixed(delay), delay)
    expect = oracle_occurrences(p, t, k)
    assert [e for _, e, _ in out] == [e for e, _ in expect]
    for step, end, tup in out:
        assert step == end + delay
        assert tup.mi == hamming(t[end - len(p) : end], p)
        assert tup.prefix_sketch == encode(t[: end - len(p)], params(k))


@given(st.integers(0, 10**6))
def test_variable_delay_contract(seed):
    rnd = random.Random(seed)
    p, t, k = random_instance(rnd)
    m = len(p)
    base = rnd.randint(1, 2 * m)
    slope = rnd.choice([0, 1])
    steps = sorted(rnd.randint(0, 2 * m) for _ in range(3))

    def delta(i):
        return base + slope * (i // 4) + sum(1 for s in steps if i > s)

    d = len(t)
    m_ = new_matcher(p, k, DelaySchedule.variable(delta, d), params(k))
    out = []
    for step, c in enumerate(list(t) + [BLANK] * delta(d), 1):
        for end in m_.push(c):
            out.append((step, end))
        assert m_.check_invariant()
    expect = [e for e, _ in oracle_occurrences(p, t, k)]
    assert [e for _, e in out] == expect
    assert all(step == end + delta(end) for step, end in out)
