import random

import pytest
from hypothesis import given, strategies as st

from langdist.core import as_symbols
from langdist.oracle import oracle_occurrence_mi, oracle_period
from langdist.rokmatch import (
    OnlineMatcher,
    base_lengths,
    build_ladder,
    hamming_period,
    pillar_ipm,
    ro_occurrences,
    two_way_occurrences,
)


def test_pillar_ipm_examples():
    assert list(pillar_ipm("ab", "abab")) == [1, 3]
    assert pillar_ipm("ab", "abab").step == 2
    assert list(pillar_ipm("aa", "aaa")) == [1, 2]
    assert list(pillar_ipm("abc", "xabcx")) == [2]
    with pytest.raises(ValueError):
        pillar_ipm("a", "aaa")


def test_ladder_lengths():
    # lengths are min(m, floor(1.5^j)); flooring only allows l_{j+1} <= 3 (l_j + 1) / 2
    lad = build_ladder("abcdefghij" * 10, 1)
    assert lad.lengths == [1, 2, 3, 5, 7, 11, 17, 25, 38, 57, 86, 100]
    assert base_lengths(100) == lad.lengths
    for a, b in zip(lad.lengths, lad.lengths[1:]):
        assert b <= 3 * (a + 1) / 2


def test_ladder_periodic_pattern():
    lad = build_ladder("ab" * 512, 1)
    periodic = [lad.lengths[j] for j in lad.periods]
    assert periodic and all(L >= 256 for L in periodic)
    admissible = [L for L in lad.lengths[:-1] if 2 * 128 <= L]
    assert periodic == admissible
    for j, res in lad.periods.items():
        assert res.q == 2
        assert len(lad.next_mi[j]) <= 2 * 1 + 1


def test_ladder_random_pattern_aperiodic():
    rnd = random.Random(3)
    p = [rnd.randrange(26) for _ in range(512)]
    assert oracle_period(p, 1) is None
    assert build_ladder(p, 1).periods == {}


def test_matcher_examples():
    assert ro_occurrences("ab", "abcacc", 1) == [(2, ()), (5, ((2, ord("c"), ord("b")),))]
    t = "abracadabra"
    assert ro_occurrences(t, t, 0) == [(len(t), ())]


@given(st.text(alphabet="ab", max_size=20), st.text(alphabet="ab", max_size=40))
def test_two_way_matches_naive(needle, hay):
    naive = [x for x in range(len(hay) - len(needle) + 1) if hay[x : x + len(needle)] == needle]
    assert two_way_occurrences(needle, hay) == naive


def _instance(rnd):
    sigma = rnd.choice([2, 4, 26])
    m = rnd.randint(1, 300)
    k = rnd.choice([0, 1, 2, 4, 8])
    q = [rnd.randrange(sigma) for _ in range(rnd.randint(1, 4))]
    if rnd.random() < 0.5:
        p = [q[x % len(q)] for x in range(m)]
    else:
        p = [rnd.randrange(sigma) for _ in range(m)]
    n = rnd.randint(m, 1200)
    if rnd.random() < 0.5:
        t = [q[x % len(q)] for x in range(n)]
    else:
        t = [rnd.randrange(sigma) for _ in range(n)]
    for _ in range(rnd.randint(0, 3)):
        s = rnd.randint(0, n - m)
        t[s : s + m] = p
    for _ in range(rnd.randint(0, 3 * k + 1)):
        t[rnd.randrange(n)] = rnd.randrange(sigma)
    return p, t, k


@given(st.integers(0, 10**6))
def test_matcher_matches_oracle(seed):
    rnd = random.Random(seed)
    p, t, k = _instance(rnd)
    mt = OnlineMatcher(p, k)
    got = []
    for c in t:
        for end, mi in mt.push(c):
            got.append((end, tuple(mi)))
    assert got == oracle_occurrence_mi(p, t, k)
    assert mt.peak_reconstructed <= 8 * k + 2


@given(st.integers(0, 10**6))
def test_hamming_period_matches_oracle(seed):
    rnd = random.Random(seed)
    d = rnd.randint(1, 3)
    q = [rnd.randrange(3) for _ in range(rnd.randint(1, 3))]
    n = rnd.randint(128 * d, 900)
    u = [q[x % len(q)] for x in range(n)]
    for _ in range(rnd.randint(0, 3 * d)):
        u[rnd.randrange(n)] = rnd.randrange(3)
    cert = hamming_period(u, d)
    assert (cert is None) == (oracle_period(u, d) is None)
    if cert is not None:
        assert cert.verify(u)
