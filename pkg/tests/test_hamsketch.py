import random

import pytest
from hypothesis import given, strategies as st

from langdist.core import EXCEEDS, UnequalLength, as_symbols, hamming
from langdist.hamsketch import (
    HamSketch,
    SketchOverflow,
    SketchParams,
    append_char,
    concat,
    decode,
    empty_sketch,
    encode,
    prepend_char,
    split,
)

PARAMS = SketchParams(n=1 << 14, k=3, seed=7)
text = st.text(alphabet="abcd", max_size=80)


def sk(u):
    return encode(u, PARAMS)


def test_examples():
    assert decode(sk("abcabc"), sk("abcacc")) == ((5, ord("b"), ord("c")),)
    assert decode(sk("abc"), sk("abc")) == ()
    small = SketchParams(n=16, k=2)
    assert decode(encode("aaaa", small), encode("bbbb", small)) is EXCEEDS
    assert split(sk("abca"), sk("ab")) == sk("ca")
    assert split(sk("ab"), sk("ab")) == sk("")
    assert append_char(sk("ab"), "c") == sk("abc")
    assert prepend_char(sk("bc"), "a") == sk("abc")


def test_errors():
    with pytest.raises(UnequalLength):
        decode(sk("ab"), sk("abc"))
    with pytest.raises(ValueError):
        split(sk("a"), sk("ab"))
    tiny = SketchParams(n=2, k=1)
    with pytest.raises(SketchOverflow):
        encode("abc", tiny)
    with pytest.raises(SketchOverflow):
        append_char(encode("ab", tiny), "c")


def test_serialisation_roundtrip():
    s = sk("hello")
    assert HamSketch.from_bytes(s.to_bytes(), PARAMS) == s
    with pytest.raises(ValueError):
        HamSketch.from_bytes(b"xx" + s.to_bytes()[2:], PARAMS)


@given(text, text)
def test_homomorphism(u, v):
    assert concat(sk(u), sk(v)) == sk(u + v)
    assert split(sk(u + v), sk(u)) == sk(v)


@given(text)
def test_append_fold(u):
    s = empty_sketch(PARAMS)
    for c in u:
        s = append_char(s, c)
    assert s == sk(u)


@given(st.integers(0, 10**6))
def test_planted_decode(seed):
    rnd = random.Random(seed)
    n = rnd.randint(8, 300)
    u = [rnd.randrange(4) for _ in range(n)]
    hd = rnd.randint(0, 2 * PARAMS.k)
    v = list(u)
    for x in rnd.sample(range(n), min(hd, n)):
        v[x] = (v[x] + 1 + rnd.randrange(3)) % 4
    got = decode(encode(u, PARAMS), encode(v, PARAMS))
    truth = hamming(as_symbols(u), as_symbols(v))
    if len(truth) <= PARAMS.k:
        assert got == truth
    else:
        assert got is EXCEEDS
