"""Peak live words of the streaming algorithms and the linear control at n = 2^10 .. 2^16."""

import argparse
import random

from langdist.cli import LinearControl
from langdist.streamhd import PalStream, SqStream


def peak(algo, data) -> int:
    best = 0
    for c in data:
        algo.push(c)
        best = max(best, algo.words())
    return best


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("-k", type=int, default=4)
    p.add_argument("--max-exp", type=int, default=16)
    p.add_argument("--seed", type=int, default=66)
    a = p.parse_args()
    rnd = random.Random(a.seed)
    text = [rnd.randrange(4) for _ in range(1 << a.max_exp)]
    makers = {
        "stream-pal": lambda n: PalStream(a.k, n),
        "stream-sq": lambda n: SqStream(a.k, n),
        "control": lambda n: LinearControl("sq", a.k),
    }
    print("n\t" + "\t".join(makers))
    base = {}
    for e in range(10, a.max_exp + 1):
        n = 1 << e
        row = {name: peak(make(n), text[:n]) for name, make in makers.items()}
        base = base or row
        print(f"{n}\t" + "\t".join(f"{row[x]} ({row[x] / base[x]:.2f}x)" for x in makers))


if __name__ == "__main__":
    main()
