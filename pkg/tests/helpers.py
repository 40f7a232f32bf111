"""Independent oracles and generators shared by the tests.

Nothing here goes through the package's evaluators: values are recomputed
from the matrices with a plain dynamic program over n, and digit statistics
come from Python's own base conversion.
"""

from __future__ import annotations

import random
from fractions import Fraction

from kregular.linrep import LinearRepresentation


def popcount(n: int) -> int:
    return bin(n).count("1")


def base_digits(n: int, k: int) -> list[int]:
    """Most significant first; [] for 0."""
    out = []
    while n:
        n, d = divmod(n, k)
        out.append(d)
    return out[::-1]


def count_digit(n: int, k: int, d: int) -> int:
    return base_digits(n, k).count(d)


def brute_values(rep: LinearRepresentation, stop: int) -> list:
    """f(0..stop-1) via R(n) = M_{n mod k} R(n div k) on tuples of Fractions/ints."""
    if stop <= 0:
        return []
    k = rep.k
    mats = [[[_plain(x) for x in row] for row in m] for m in rep.matrices]
    v = [_plain(x) for x in rep.v]
    cols = [tuple(_plain(x) for x in rep.w)]
    out = [sum(a * b for a, b in zip(v, cols[0]))]
    for n in range(1, stop):
        q, d = divmod(n, k)
        prev = cols[q]
        m = mats[d]
        col = tuple(sum(a * b for a, b in zip(row, prev)) for row in m)
        cols.append(col)
        out.append(sum(a * b for a, b in zip(v, col)))
    return [Fraction(x) for x in out]


def _plain(x: Fraction):
    return x.numerator if x.denominator == 1 else x


def random_rep(rng: random.Random, k: int, rank: int, lo: int = -2, hi: int = 2,
               rational_w: bool = False) -> LinearRepresentation:
    def entry():
        return rng.randint(lo, hi)

    v = [entry() for _ in range(rank)]
    mats = [[[entry() for _ in range(rank)] for _ in range(rank)] for _ in range(k)]
    if rational_w:
        w = [Fraction(entry(), rng.randint(1, 3)) for _ in range(rank)]
    else:
        w = [entry() for _ in range(rank)]
    return LinearRepresentation(k, v, mats, w)


def convolution_oracle(a: list, b: list) -> list:
    """Exact integer Cauchy product of two integer lists via Kronecker substitution."""
    n = len(a)
    ai = [int(x) for x in a]
    bi = [int(x) for x in b]
    bound = max(map(abs, ai + [1])) * max(map(abs, bi + [1])) * n + 1
    width = (bound.bit_length() + 8) // 8  # bytes per slot

    def pack(xs):
        return int.from_bytes(b"".join(x.to_bytes(width, "little") for x in xs), "little")

    def split(xs):
        return [max(x, 0) for x in xs], [max(-x, 0) for x in xs]

    def unpack(z, count):
        raw = z.to_bytes(max(count * width, (z.bit_length() + 7) // 8), "little")
        return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(count)]

    ap, an = split(ai)
    bp, bn = split(bi)
    pos = pack(ap) * pack(bp) + pack(an) * pack(bn)
    neg = pack(ap) * pack(bn) + pack(an) * pack(bp)
    return [Fraction(x - y) for x, y in zip(unpack(pos, n), unpack(neg, n))]


def direct_convolution(a: list, b: list) -> list:
    return [sum((a[i] * b[n - i] for i in range(n + 1)), Fraction(0)) for n in range(len(a))]
