"""Amortised time per character of the read-only edit algorithms for k in {1, 2, 4}.

A sanity trend check: the growth from k=1 to k=4 should stay well below k^4.
"""

import argparse
import random
import time

from langdist.roled import RoLedPal, RoLedSq


def corpus(seed: int, n: int) -> list:
    rnd = random.Random(seed)
    texts = []
    for kind in range(4):
        if kind == 0:
            t = [rnd.randrange(4) for _ in range(n)]
        elif kind == 1:
            h = [rnd.randrange(2) for _ in range(n // 2)]
            t = h + h[::-1]
        elif kind == 2:
            h = [rnd.randrange(2) for _ in range(n // 2)]
            t = h + h
        else:
            t = [x % 3 for x in range(n)]
        for _ in range(8):
            t[rnd.randrange(n)] = rnd.randrange(4)
        texts.append(t)
    return texts


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("-n", type=int, default=4096)
    p.add_argument("--seed", type=int, default=5)
    a = p.parse_args()
    texts = corpus(a.seed, a.n)
    for cls in (RoLedPal, RoLedSq):  # compile the kernels before timing
        s = cls(1)
        for c in texts[1][:600]:
            s.push(c)
    print("k\tpal_us_per_char\tsq_us_per_char")
    for k in (1, 2, 4):
        row = []
        for cls in (RoLedPal, RoLedSq):
            t0 = time.perf_counter()
            for t in texts:
                s = cls(k)
                for c in t:
                    s.push(c)
            row.append((time.perf_counter() - t0) / (len(texts) * a.n) * 1e6)
        print(f"{k}\t{row[0]:.1f}\t{row[1]:.1f}")


if __name__ == "__main__":
    main()
