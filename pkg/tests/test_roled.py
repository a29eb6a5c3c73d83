import random

import pytest
from hypothesis import given, strategies as st

from langdist.core import apply_script, as_symbols
from langdist.oracle import oracle_ed_pal, oracle_ed_sq, oracle_occurrences
from langdist.roled import DelayedErrorMatcher, RoLedPal, RoLedSq, dem_occurrences, ro_led_table

from _strings import mutate, power


def test_dem_example():
    assert dem_occurrences("abc", "xabcx", 1, 2) == [(5, 3, 1), (6, 4, 0), (7, 5, 1)]


def test_dem_single_char_pattern():
    got = dem_occurrences("a", "bab", 1, 0)
    assert [(s, e) for s, e, _ in got] == [(1, 1), (2, 2), (3, 3)]


def test_dem_periodic_pattern():
    p = "ab" * 40
    t = mutate(random.Random(1), "ab" * 120, "abc", 6)
    got = dem_occurrences(p, t, 2, 7)
    assert [(e, v) for _, e, v in got] == oracle_occurrences(p, t, 2, "edit")


def test_led_examples():
    assert ro_led_table("racecar", "pal", 2)[-1] == 0
    assert ro_led_table("abcb", "pal", 2)[-1] == 1
    assert ro_led_table("abab", "sq", 1)[-1] == 0
    assert ro_led_table("aab", "sq", 1)[-1] == 1
    assert ro_led_table("abcab", "sq", 1)[-1] == 1
    rnd = random.Random(7)
    t = "".join(rnd.choice("abcd") for _ in range(512))
    assert ro_led_table(t, "pal", 3) == oracle_ed_pal(t, 3)


def test_rejects_k_zero():
    with pytest.raises(ValueError):
        RoLedPal(0)


@given(st.integers(0, 10**6))
def test_dem_matches_oracle_in_all_regimes(seed):
    rnd = random.Random(seed)
    alphabet = rnd.choice(["ab", "abcd", "abcdefghijklmnopqrstuvwxyz"])
    m = rnd.randint(1, 50)
    k = rnd.randint(0, 4)
    p = "".join(rnd.choice(alphabet) for _ in range(m))
    if rnd.random() < 0.3:
        p = (p[: rnd.randint(1, 4)] * 60)[:m]
    n = rnd.randint(1, 250)
    t = "".join(p if rnd.random() < 0.6 else rnd.choice(alphabet) for _ in range(n // m + 1))[:n]
    t = mutate(rnd, t, alphabet, rnd.randint(0, 5))
    d = rnd.choice([0, max(0, k - 1), k, max(0, m // 4 - 1), m // 4, m, rnd.randint(0, 2 * m)])
    got = dem_occurrences(p, t, k, d)
    assert all(step - end == d for step, end, _ in got)
    assert [(e, v) for _, e, v in got] == oracle_occurrences(p, t, k, "edit")


def test_dem_push_interface():
    dem = DelayedErrorMatcher("abc", 1, 1)
    out = []
    for c in "xabcxyz":
        out.extend(dem.push(c))
    assert [e for e, _ in out] == [3, 4, 5]
    assert dem.depth() >= 1 and dem.words() > 0


def _text(rnd, n):
    alphabet = rnd.choice(["ab", "abcd", "abcdefghijklmnopqrstuvwxyz"])
    kind = rnd.random()
    if kind < 0.25:
        h = "".join(rnd.choice(alphabet) for _ in range(n // 2 + 1))
        t = (h + h[::-1])[:n]
    elif kind < 0.5:
        h = "".join(rnd.choice(alphabet) for _ in range(n // 2 + 1))
        t = (h + h)[:n]
    elif kind < 0.7:
        t = power("".join(rnd.choice(alphabet) for _ in range(rnd.randint(1, 3))), n)
    else:
        t = "".join(rnd.choice(alphabet) for _ in range(n))
    return mutate(rnd, t, alphabet, rnd.randint(0, 4))


def _check_witness(t, i, lang, value, wit):
    t = as_symbols(t)
    if lang == "pal":
        (j, c), script = wit
        assert script.cost == value
        assert apply_script(t[:j], script) == t[j + c : i][::-1]
    else:
        j, script = wit
        assert script.cost == value
        assert apply_script(t[:j], script) == t[j:i]


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_led_tables_match_oracle(seed, k):
    rnd = random.Random(seed)
    t = _text(rnd, rnd.randint(1, 300))
    for lang, cls, ora in (("pal", RoLedPal, oracle_ed_pal), ("sq", RoLedSq, oracle_ed_sq)):
        state = cls(k, debug=True)
        want = ora(t, k)
        for i, c in enumerate(t, 1):
            v, wit = state.push_with_witness(c)
            assert v == want[i - 1]
            if v <= k:
                assert state.filter_hit
                _check_witness(t, i, lang, v, wit)


@pytest.mark.parametrize("lang,q,n,k", [("pal", "a", 700, 1), ("pal", "ab", 1100, 1), ("sq", "a", 1000, 1), ("sq", "ab", 2500, 1)])
def test_led_periodic_branch(lang, q, n, k):
    rnd = random.Random(n)
    t = mutate(rnd, power(q, n), "abc", 3)
    cls = RoLedPal if lang == "pal" else RoLedSq
    state = cls(k)
    got = [state.push(c) for c in t]
    want = (oracle_ed_pal if lang == "pal" else oracle_ed_sq)(t, k)
    assert got == want
    assert state.stats["periodic_levels"] > 0
    assert state.stats["periodic_evals"] > 0
