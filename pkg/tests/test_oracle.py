import numpy as np
import pytest
from hypothesis import given, strategies as st

from langdist.core import apply_script, as_symbols
from langdist.oracle import (
    OracleSizeExceeded,
    brute_ed_to_language,
    brute_hd_to_language,
    capped_edit_distance,
    edit_distance,
    edit_script,
    oracle_ed_pal,
    oracle_ed_sq,
    oracle_hd_pal,
    oracle_hd_sq,
    oracle_occurrence_mi,
    oracle_occurrences,
    oracle_period,
    wagner_fischer,
)

ab = st.text(alphabet="ab", max_size=14)
abc = st.text(alphabet="abc", max_size=24)


def test_hd_examples():
    assert oracle_hd_pal("aba", 1) == [0, 1, 0]
    assert oracle_hd_pal("abca", 1) == [0, 1, 1, 1]
    assert oracle_hd_sq("abcacc", 1) == [2, 1, 2, 2, 2, 1]
    assert oracle_hd_sq("abab", 1) == [2, 1, 2, 0]
    assert oracle_hd_pal("", 1) == []


def test_ed_examples():
    assert edit_distance("ab", "ba") == 2
    assert edit_distance("abc", "abdc") == 1
    assert oracle_ed_pal("racecar", 1)[-1] == 0
    assert oracle_ed_pal("abcb", 2)[-1] == 1
    assert oracle_ed_sq("abab", 1)[-1] == 0
    assert oracle_ed_sq("aab", 1)[-1] == 1


def test_occurrence_examples():
    assert oracle_occurrences("ab", "abcacc", 1) == [(2, 0), (5, 1)]
    assert oracle_occurrences("abc", "xabcx", 1, "edit") == [(3, 1), (4, 0), (5, 1)]
    assert oracle_occurrence_mi("ab", "abcacc", 1) == [(2, ()), (5, ((2, ord("c"), ord("b")),))]


def test_size_cap():
    with pytest.raises(OracleSizeExceeded):
        oracle_hd_pal("a" * 5000, 1)
    assert len(oracle_hd_pal("a" * 20, 1, size_cap=20)) == 20


def test_period_examples():
    cert = oracle_period("ab" * 128, 1)
    assert cert is not None and cert.q in (as_symbols("ab"), as_symbols("ba"))
    assert cert.verify("ab" * 128)
    assert oracle_period("ab" * 100, 1) is None  # |Q| = 2 > 200 / 128
    cert = oracle_period("ab" * 64 + "c" + "ab" * 64, 1, "edit")
    assert cert is not None and cert.verify("ab" * 64 + "c" + "ab" * 64)


@given(abc, abc)
def test_capped_kernel_matches_plain_dp(u, v):
    d = int(wagner_fischer(np.asarray(as_symbols(u)), np.asarray(as_symbols(v))))
    assert d == edit_distance(u, v)
    for cap in (0, 1, 3, 30):
        assert capped_edit_distance(u, v, cap) == min(d, cap)


@given(abc, abc)
def test_edit_script_is_optimal(u, v):
    s = edit_script(u, v)
    assert s.cost == edit_distance(u, v)
    assert apply_script(u, s) == v


@given(st.text(alphabet="ab", max_size=9))
def test_language_formulas_match_enumeration(u):
    n = len(u)
    if u:
        assert oracle_hd_pal(u, n)[-1] == min(n + 1, brute_hd_to_language(u, "pal", "ab"))
        assert oracle_hd_sq(u, n)[-1] == min(n + 1, brute_hd_to_language(u, "sq", "ab"))
    if n <= 7 and u:
        assert oracle_ed_pal(u, n)[-1] == brute_ed_to_language(u, "pal", "ab")
        assert oracle_ed_sq(u, n)[-1] == brute_ed_to_language(u, "sq", "ab")
