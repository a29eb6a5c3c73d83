"""Space and time grid for every model, written as CSV (wraps ``langdist bench``)."""

import argparse
import sys

from langdist.cli import main


def parse() -> argparse.Namespace:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--max-exp", type=int, default=16, help="largest n is 2^max-exp")
    p.add_argument("--gen", default="random", choices=("random", "periodic", "nearpal"))
    return p.parse_args()


if __name__ == "__main__":
    a = parse()
    code = main([
        "bench", "--n", f"10:{a.max_exp}", "-k", "1,4", "--models", "stream,ro,control",
        "--metrics", "hd", "--langs", "pal,sq", "--gen", a.gen, "--out", a.out,
    ])
    sys.exit(code)
