import random

from hypothesis import given, strategies as st

from langdist.core import EXCEEDS, Ins, apply_script, as_symbols, lcp
from langdist.edtools import (
    Chain,
    IncrementalBanded,
    banded_ed,
    chains_of,
    ed_flat,
    ed_period,
    flat_of,
    lcp_periodic,
    lv_build,
    lv_flat,
    lv_query,
    offline_kerror_occs,
    periodic_script,
    periodic_script_flat,
)
from langdist.oracle import edit_distance, oracle_occurrences, oracle_period

from _strings import mutate, power

abc = st.text(alphabet="abc", max_size=25)


def test_banded_examples():
    d, s = banded_ed("ab", "ba", 2)
    assert d == 2 and apply_script("ab", s) == "ba"
    d, s = banded_ed("abc", "abdc", 1)
    assert d == 1 and tuple(s) == (Ins(3, "d"),)
    assert banded_ed("aaaa", "bbbb", 3) is EXCEEDS
    assert banded_ed("", "", 0)[0] == 0


def test_lv_example():
    table = lv_build("abcacc", "abcabc", 1)
    assert table.query(6, 6) == 1
    assert table.query(4, 4) == 0


def test_offline_examples():
    assert offline_kerror_occs("abc", "xabcx", 1) == [(3, 1), (4, 0), (5, 1)]
    occ, chains = offline_kerror_occs("ab" * 600, "ab" * 900, 1, with_chains=True)
    assert chains is not None
    ends = sorted(e for c in chains for e in c.ends())
    assert ends == [e for e, _ in occ]


def test_chain_membership():
    c = Chain(5, 3, 4, 1)
    assert c.ends() == [5, 8, 11, 14]
    assert 11 in c and 12 not in c and 17 not in c
    # interleaving chains with different residues are allowed
    chains = chains_of([(4, 0), (5, 1), (6, 0), (7, 1)], 2)
    assert [(c.start, c.dist, c.count) for c in chains] == [(4, 0, 2), (5, 1, 2)]


@given(abc, abc, st.integers(0, 6))
def test_banded_matches_full_dp(u, v, k):
    d = edit_distance(u, v)
    res = banded_ed(u, v, k)
    if d <= k:
        assert res[0] == d and res[1].cost == d
        assert apply_script(u, res[1]) == v
        positions = [op.pos for op in res[1]]
        assert positions == sorted(positions)
    else:
        assert res is EXCEEDS


@given(st.integers(0, 10**6))
def test_lv_matches_full_dp(seed):
    rnd = random.Random(seed)
    u = "".join(rnd.choice("abc") for _ in range(rnd.randint(0, 25)))
    v = mutate(rnd, u, "abc", rnd.randint(0, 5))
    k = rnd.randint(0, 5)
    table = lv_build(u, v, k)
    arr = lv_flat(flat_of(as_symbols(u)), flat_of(as_symbols(v)), k)
    for x in range(len(u) + 1):
        for y in range(len(v) + 1):
            want = min(k + 1, edit_distance(u[:x], v[:y]))
            assert table.query(x, y) == want
            assert lv_query(arr, k, x, y) == want
    assert ed_flat(flat_of(as_symbols(u)), flat_of(as_symbols(v)), k) == min(k + 1, edit_distance(u, v))


@given(st.integers(0, 10**6))
def test_incremental_banded(seed):
    rnd = random.Random(seed)
    a = "".join(rnd.choice("abc") for _ in range(rnd.randint(0, 16)))
    b = mutate(rnd, a, "abc", rnd.randint(0, 4))
    k = rnd.randint(0, 4)
    w = rnd.randint(0, 3)
    ib = IncrementalBanded(a, k, w)
    for y in range(len(b) + 1):
        if y:
            ib.append(b[y - 1])
        for L in range(len(a) + 1):
            want = min(edit_distance(a[s:L], b[:y]) for s in range(0, min(max(w, 1), L + 1)))
            assert min(ib.value(L), k + 1) == min(want, k + 1)


@given(st.integers(0, 10**6))
def test_periodic_scripts_and_lcp(seed):
    rnd = random.Random(seed)
    q = rnd.choice(["ab", "abc", "aab", "abcd", "a"])
    base = power(q, rnd.randint(5, 40))
    u = mutate(rnd, base[rnd.randint(0, len(q) - 1) :], "abcd", rnd.randint(0, 3))
    v = mutate(rnd, base[rnd.randint(0, len(q) - 1) :], "abcd", rnd.randint(0, 3))
    ru, rv = periodic_script(u, q, 8), periodic_script(v, q, 8)
    if ru is None or rv is None:
        return
    cu, pu, lu, su = ru
    assert apply_script(u, su) == power(q, lu, pu)
    flat = periodic_script_flat(flat_of(as_symbols(u)), q, 8)
    assert flat[:3] == (cu, pu, lu)
    assert apply_script(as_symbols(u), flat[3]) == as_symbols(power(q, lu, pu))
    for _ in range(5):
        i, j = rnd.randint(0, len(u)), rnd.randint(0, len(v))
        assert lcp_periodic(u, i, v, j, su, rv[3], q, pu, rv[1]) == lcp(u, v, i, j)


@given(st.integers(0, 10**6))
def test_ed_period_matches_oracle(seed):
    rnd = random.Random(seed)
    q = rnd.choice(["ab", "abc", "aab", "a"])
    d = rnd.randint(1, 2)
    n = rnd.randint(128 * d * len(q), 128 * d * len(q) + 200)
    if rnd.random() < 0.8:
        u = mutate(rnd, power(q, n), "abcd", rnd.randint(0, 2 * d + 2))
    else:
        u = "".join(rnd.choice("ab") for _ in range(n))
    cert = ed_period(u, d)
    assert (cert is None) == (oracle_period(u, d, "edit") is None)
    if cert is not None:
        assert cert.verify(u)


@given(st.integers(0, 10**6))
def test_offline_matches_oracle(seed):
    rnd = random.Random(seed)
    p = "".join(rnd.choice("abc") for _ in range(rnd.randint(1, 30)))
    t = "".join(rnd.choice([p, "a", "b", "c"]) for _ in range(rnd.randint(0, 20)))
    t = mutate(rnd, t, "abc", rnd.randint(0, 6))
    k = rnd.randint(0, 4)
    assert offline_kerror_occs(p, t, k) == oracle_occurrences(p, t, k, "edit")
