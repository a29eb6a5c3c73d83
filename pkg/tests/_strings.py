"""Small random-string helpers shared by the edit-distance tests."""

import random


def mutate(rnd: random.Random, s, alphabet, count: int):
    v = list(s)
    for _ in range(count):
        op = rnd.randint(0, 2)
        p = rnd.randint(0, len(v))
        if op == 0:
            v.insert(p, rnd.choice(alphabet))
        elif v and p < len(v):
            if op == 1:
                del v[p]
            else:
                v[p] = rnd.choice(alphabet)
    return "".join(v) if isinstance(s, str) else v


def power(q, n: int, phase: int = 0):
    return "".join(q[(phase + x) % len(q)] for x in range(n))
