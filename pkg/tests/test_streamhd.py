import random

from hypothesis import given, strategies as st

from langdist.core import as_symbols, hamming
from langdist.oracle import oracle_hd_pal, oracle_hd_sq
from langdist.streamhd import PalStream, SqStream, stream_table


def test_pal_examples():
    assert stream_table("aba", "pal", 1)[0] == [0, 1, 0]
    assert stream_table("aaaa", "pal", 1)[0] == [0, 0, 0, 0]
    assert stream_table("abca", "pal", 1)[0] == [0, 1, 1, 1]


def test_sq_examples():
    assert stream_table("abcacc", "sq", 1)[0] == [2, 1, 2, 2, 2, 1]
    assert stream_table("abab", "sq", 1)[0] == [2, 1, 2, 0]


def test_sq_witness():
    s = SqStream(1, 16)
    got = [s.push_with_request(c) for c in "abcacc"]
    assert got[5] == (1, ((2, ord("b"), ord("c")),))
    assert got[4] == (2, None)  # odd position
    s = SqStream(1, 16)
    assert [s.push_with_request(c) for c in "abab"][3] == (0, ())


def test_space_counts_are_small():
    p = PalStream(2, 1 << 12)
    for c in b"ab" * 1000:
        p.push(c)
    assert p.words() < 100


@given(st.integers(0, 10**6))
def test_tables_match_oracle(seed):
    rnd = random.Random(seed)
    sigma = rnd.choice([2, 4, 26])
    n = rnd.randint(0, 300)
    k = rnd.choice([1, 2, 4])
    half = [rnd.randrange(sigma) for _ in range(n // 2 + 1)]
    shape = rnd.random()
    if shape < 0.3:
        t = half + half[::-1]
    elif shape < 0.6:
        t = half + half
    else:
        t = [rnd.randrange(sigma) for _ in range(n)]
    t = t[:n]
    for x in range(rnd.randint(0, 3)):
        if t:
            t[rnd.randrange(len(t))] = rnd.randrange(sigma)
    pal, f1 = stream_table(t, "pal", k)
    sq, f2 = stream_table(t, "sq", k)
    assert pal == oracle_hd_pal(t, k)
    assert sq == oracle_hd_sq(t, k)
    assert f1 == f2 == 0


@given(st.integers(0, 10**6))
def test_sq_filter_completeness(seed):
    rnd = random.Random(seed)
    half = [rnd.randrange(2) for _ in range(rnd.randint(1, 100))]
    t = half + half
    t[rnd.randrange(len(t))] ^= 1
    s = SqStream(2, len(t))
    truth = oracle_hd_sq(t, 2)
    for i, c in enumerate(t, 1):
        v, mi = s.push_with_request(c)
        if truth[i - 1] <= 2:
            assert s.filter_hit
            h = i // 2
            assert mi == hamming(as_symbols(t[:h]), as_symbols(t[h:i]))
