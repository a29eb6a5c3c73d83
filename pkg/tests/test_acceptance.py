"""Acceptance criteria; each test records one PASS/FAIL line (printed in the terminal summary)."""

import functools
import itertools
import math
import random
import time

from langdist.cli import LinearControl
from langdist.core import EXCEEDS, as_symbols, hamming
from langdist.edtools import ed_period
from langdist.hamsketch import SketchParams, concat, decode, encode, split
from langdist.occstream import BLANK, DelaySchedule, new_matcher
from langdist.oracle import (
    brute_ed_to_language,
    brute_hd_to_language,
    oracle_ed_pal,
    oracle_ed_sq,
    oracle_hd_pal,
    oracle_hd_sq,
    oracle_occurrences,
    oracle_period,
)
from langdist.rohd import RoPal, RoSq
from langdist.rokmatch import hamming_period
from langdist.roled import RoLedPal, RoLedSq, dem_occurrences
from langdist.streamhd import PalStream, SqStream

from _strings import mutate, power


def _log_uniform(rnd, hi):
    return max(1, min(hi, int(math.exp(rnd.uniform(0, math.log(hi + 1))))))


def _structured(rnd, n, alphabet):
    """Random text, or a noisy palindrome, square or periodic string."""
    kind = rnd.random()
    draw = lambda length: [rnd.choice(alphabet) for _ in range(length)]  # noqa: E731
    if kind < 0.4:
        return draw(n)
    if kind < 0.6:
        h = draw(n // 2 + 1)
        t = (h + h[::-1])[:n]
    elif kind < 0.8:
        h = draw(n // 2 + 1)
        t = (h + h)[:n]
    else:
        q = draw(rnd.randint(1, 4))
        t = [q[x % len(q)] for x in range(n)]
    for _ in range(rnd.randint(0, 6)):
        t[rnd.randrange(n)] = rnd.choice(alphabet)
    return t


# ---------------------------------------------------------------------------
# shared corpora (criteria 2, 3 and 8)


@functools.cache
def hamming_corpus():
    rnd = random.Random(20260214)
    res = {"texts": 0, "chars": 0, "ro_bad": 0, "stream_bad": 0, "failures": 0, "filter_misses": 0}
    for _ in range(1000):
        alphabet = list(range(rnd.choice([2, 4, 26])))
        k = rnd.choice([1, 2, 4, 8])
        n = _log_uniform(rnd, 4096)
        t = _structured(rnd, n, alphabet)
        want_pal, want_sq = oracle_hd_pal(t, k), oracle_hd_sq(t, k)
        algos = {"ro_pal": RoPal(k), "ro_sq": RoSq(k), "st_pal": PalStream(k, n), "st_sq": SqStream(k, n)}
        for i, c in enumerate(t):
            for name, a in algos.items():
                want = (want_pal if name.endswith("pal") else want_sq)[i]
                got = a.push(c)
                if got != want:
                    res["ro_bad" if name.startswith("ro") else "stream_bad"] += 1
                if want <= k and name != "st_pal" and not a.filter_hit:
                    res["filter_misses"] += 1
        res["failures"] += algos["st_pal"].failures + algos["st_sq"].failures
        res["texts"] += 1
        res["chars"] += n
    return res


@functools.cache
def edit_corpus():
    rnd = random.Random(20260215)
    res = {"texts": 0, "chars": 0, "bad": 0, "filter_misses": 0, "periodic_evals": 0}
    for _ in range(300):
        alphabet = list(range(rnd.choice([2, 4, 26])))
        k = rnd.randint(1, 5)
        # half the texts are long so the periodic branches are reached
        n = _log_uniform(rnd, 1024) if rnd.random() < 0.5 else rnd.randint(256, 1024)
        if rnd.random() < 0.5:
            k = rnd.randint(1, 2)
        t = _structured(rnd, n, alphabet)
        t = mutate(rnd, t, alphabet, rnd.randint(0, 3))
        want_pal, want_sq = oracle_ed_pal(t, k), oracle_ed_sq(t, k)
        pal, sq = RoLedPal(k), RoLedSq(k, max_n=max(len(t), 1))
        for i, c in enumerate(t):
            for a, want in ((pal, want_pal[i]), (sq, want_sq[i])):
                if a.push(c) != want:
                    res["bad"] += 1
                if want <= k and not a.filter_hit:
                    res["filter_misses"] += 1
        res["periodic_evals"] += pal.stats["periodic_evals"] + sq.stats["periodic_evals"]
        res["texts"] += 1
        res["chars"] += len(t)
    return res


# ---------------------------------------------------------------------------


def test_criterion_1_paper_example(criterion):
    t0 = time.perf_counter()
    want = [2, 1, 2, 2, 2, 1]
    tables = {
        "oracle": oracle_hd_sq("abcacc", 1),
        "stream": [s for s in map(SqStream(1, 6).push, "abcacc")],
        "ro": [s for s in map(RoSq(1).push, "abcacc")],
    }
    elapsed = time.perf_counter() - t0
    ok = all(v == want for v in tables.values()) and elapsed < 1.0
    criterion(1, ok, f"tables {tables}, {elapsed:.3f}s")
    assert ok


def test_criterion_2_hamming_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    r = hamming_corpus()
    elapsed = time.perf_counter() - t0
    ok = r["ro_bad"] == 0 and r["stream_bad"] == 0 and r["failures"] == 0
    criterion(
        2, ok,
        f"{r['texts']} texts, {r['chars']} chars, ro mismatches {r['ro_bad']}, stream mismatches "
        f"{r['stream_bad']}, sketch failures {r['failures']}, {elapsed:.0f}s",
    )
    assert ok


def test_criterion_3_edit_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    r = edit_corpus()
    elapsed = time.perf_counter() - t0
    ok = r["bad"] == 0
    criterion(
        3, ok,
        f"{r['texts']} texts, {r['chars']} chars, mismatches {r['bad']}, periodic evaluations "
        f"{r['periodic_evals']}, {elapsed:.0f}s",
    )
    assert ok


def test_criterion_4_distance_identities(criterion):
    bad = checked = 0
    for n in range(1, 11):
        for chars in itertools.product("ab", repeat=n):
            u = "".join(chars)
            for lang, formula in (("pal", oracle_hd_pal), ("sq", oracle_hd_sq)):
                brute = brute_hd_to_language(u, lang, "ab")
                bad += formula(u, n)[-1] != min(n + 1, brute)
                checked += 1
            if n <= 8:
                for lang, formula in (("pal", oracle_ed_pal), ("sq", oracle_ed_sq)):
                    bad += formula(u, n)[-1] != brute_ed_to_language(u, lang, "ab")
                    checked += 1
    criterion(4, bad == 0, f"{checked} string/language pairs, {bad} mismatches")
    assert bad == 0


def test_criterion_5_sketch_algebra(criterion):
    rnd = random.Random(55)
    params = {k: SketchParams(n=1 << 14, k=k, seed=100 + k) for k in range(1, 9)}
    wrong = exceeded_ok = recovered = algebra_bad = 0
    for _ in range(10_000):
        k = rnd.randint(1, 8)
        P = params[k]
        sigma = rnd.choice([2, 4, 26])
        lu, lv = rnd.randint(0, 200), rnd.randint(0, 200)
        U = [rnd.randrange(sigma) for _ in range(lu)]
        V = [rnd.randrange(sigma) for _ in range(lv)]
        su, sv, suv = encode(U, P), encode(V, P), encode(U + V, P)
        algebra_bad += concat(su, sv) != suv or split(suv, su) != sv
        W = U + V
        if not W:
            continue
        hd = rnd.randint(0, 2 * k)
        X = list(W)
        for x in rnd.sample(range(len(W)), min(hd, len(W))):
            X[x] = (X[x] + 1 + rnd.randrange(sigma + 1)) % (sigma + 2)
        got = decode(suv, encode(X, P))
        truth = hamming(W, X)
        if len(truth) <= k:
            if got == truth:
                recovered += 1
            else:
                wrong += 1
        elif got is EXCEEDS:
            exceeded_ok += 1
        else:
            wrong += 1
    ok = wrong == 0 and algebra_bad == 0
    criterion(
        5, ok,
        f"10000 roundtrips, algebra errors {algebra_bad}, exact decodes {recovered}, "
        f"correct Exceeds {exceeded_ok}, wrong answers {wrong}",
    )
    assert ok


def _peak(algo, data):
    peak = 0
    for c in data:
        algo.push(c)
        peak = max(peak, algo.words())
    return peak


def test_criterion_6_space_scaling(criterion):
    rnd = random.Random(66)
    big = [rnd.randrange(4) for _ in range(1 << 16)]
    small = big[: 1 << 10]
    k = 4
    ratios = {}
    for name, make in (
        ("pal", lambda n: PalStream(k, n)),
        ("sq", lambda n: SqStream(k, n)),
        ("control", lambda n: LinearControl("sq", k)),
    ):
        ratios[name] = _peak(make(1 << 16), big) / _peak(make(1 << 10), small)
    ok = ratios["pal"] <= 3 and ratios["sq"] <= 3 and ratios["control"] >= 64
    criterion(6, ok, ", ".join(f"{n} ratio {r:.2f}" for n, r in ratios.items()))
    assert ok


def test_criterion_7_delay_contracts(criterion):
    rnd = random.Random(77)
    bad = total = 0
    for trial in range(100):
        sigma = rnd.choice([2, 4])
        m = rnd.randint(1, 20)
        k = rnd.randint(0, 3)
        p = [rnd.randrange(sigma) for _ in range(m)]
        n = rnd.randint(m, 200)
        t = [rnd.randrange(sigma) for _ in range(n)]
        for _ in range(3):
            s = rnd.randint(0, n - m)
            t[s : s + m] = p
        expect = [e for e, _ in oracle_occurrences(p, t, k)]
        if trial % 2 == 0:
            delay = [0, 1, m, 2 * m, rnd.randint(0, 50)][trial // 2 % 5]
            sched, delta, pad = DelaySchedule.fixed(delay), (lambda i, d=delay: d), delay
        else:
            base = [1, m, rnd.randint(1, 3 * m)][trial // 2 % 3]
            jumps = sorted(rnd.randint(1, n) for _ in range(rnd.randint(0, 4)))
            delta = lambda i, b=base, js=jumps: b + sum(i >= j for j in js)  # noqa: E731
            sched, pad = DelaySchedule.variable(delta, n), delta(n)
        mt = new_matcher(p, k, sched, SketchParams(n=n + pad + 1, k=k, seed=trial))
        got = []
        for step, c in enumerate(list(t) + [BLANK] * pad, 1):
            got.extend((step, e) for e in mt.push(c))
        total += 1
        bad += [e for _, e in got] != expect or any(s != e + delta(e) for s, e in got)
    dem_bad = dem_total = 0
    for trial in range(100):
        alphabet = "abcd"[: rnd.choice([2, 4])]
        m = rnd.randint(4, 48)
        k = rnd.randint(1, 4)
        p = "".join(rnd.choice(alphabet) for _ in range(m))
        t = "".join(p if rnd.random() < 0.5 else rnd.choice(alphabet) for _ in range(200 // m + 2))
        t = mutate(rnd, t, alphabet, rnd.randint(0, 5))
        expect = oracle_occurrences(p, t, k, "edit")
        for d in sorted({0, k - 1, k, m // 4 - 1, m // 4, m} - {-1}):
            got = dem_occurrences(p, t, k, d)
            dem_total += 1
            dem_bad += [(e, v) for _, e, v in got] != expect or any(s - e != d for s, e, _ in got)
    ok = bad == 0 and dem_bad == 0
    criterion(
        7, ok,
        f"occurrence streams {total - bad}/{total} exact, delayed matcher {dem_total - dem_bad}/{dem_total} exact",
    )
    assert ok


def test_criterion_8_structural_filters(criterion):
    h, e = hamming_corpus(), edit_corpus()
    misses = h["filter_misses"] + e["filter_misses"]
    criterion(8, misses == 0, f"hamming filter misses {h['filter_misses']}, edit filter misses {e['filter_misses']}")
    assert misses == 0


def test_criterion_9_periodicity_detectors(criterion):
    rnd = random.Random(99)
    bad = periodic = 0
    for trial in range(500):
        d = rnd.randint(1, 4)
        qmax = max(1, 2048 // (128 * d))
        q = "".join(rnd.choice("abc") for _ in range(rnd.randint(1, min(qmax, 6))))
        n = rnd.randint(max(64, 128 * d * len(q) - 64), 2048)
        if trial % 5 == 4:
            u = "".join(rnd.choice("ab") for _ in range(n))
        elif trial % 2:
            u = list(power(q, n))
            for _ in range(rnd.randint(0, 3 * d)):
                u[rnd.randrange(n)] = rnd.choice("abcd")
            u = "".join(u)
        else:
            u = mutate(rnd, power(q, n, rnd.randrange(len(q))), "abcd", rnd.randint(0, 3 * d))
        for metric, detect in (("hamming", hamming_period), ("edit", ed_period)):
            cert = detect(u, d)
            truth = oracle_period(u, d, metric)
            if (cert is None) != (truth is None):
                bad += 1
            elif cert is not None:
                periodic += 1
                ok = cert.verify(u) and len(cert.q) * 128 * d <= len(u) and cert.kind == metric
                bad += not ok
    criterion(9, bad == 0, f"500 instances x 2 metrics, {periodic} periodic with verified certificates, {bad} disagreements")
    assert bad == 0
