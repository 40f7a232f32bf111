"""Exact evaluation of a representation on a whole prefix 0 <= n < N.

The column vectors R(n) = M_{n_0} ... M_{n_{s-1}} w satisfy
R(n) = M_{n mod k} R(n div k), so the prefix is filled one digit-length
level at a time with a dense matrix product per digit.

Entries are scaled to integers by a common denominator.  Values are then
computed modulo several primes below 2**20 with float64 BLAS (every partial
sum stays below 2**53, so float arithmetic is exact) and recombined by the
Chinese remainder theorem.  The number of primes comes from an upper bound
obtained by running the same recursion on absolute values in floating
point.  If that bound is unusable the evaluation falls back to numpy object
arrays of Python integers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

_PRIME_BITS = 20
_MAX_FLOAT_RANK = 4096


@lru_cache(maxsize=1)
def _primes() -> tuple[int, ...]:
    hi = 1 << _PRIME_BITS
    lo = hi - 400_000
    sieve = np.ones(hi - lo, dtype=bool)
    for p in range(2, math.isqrt(hi) + 1):
        start = max(p * p, ((lo + p - 1) // p) * p)
        sieve[start - lo::p] = False
    return tuple(int(lo + i) for i in np.nonzero(sieve)[0][::-1])


def _integer_data(rep):
    den = 1
    for m in rep.matrices:
        for row in m:
            for x in row:
                den = lcm(den, x.denominator)
    dv = lcm(1, *(x.denominator for x in rep.v))
    dw = lcm(1, *(x.denominator for x in rep.w))
    mats = [[[int(x * den) for x in row] for row in m] for m in rep.matrices]
    v = [int(x * dv) for x in rep.v]
    w = [int(x * dw) for x in rep.w]
    return mats, v, w, den, dv * dw


def _levels(k: int, stop: int):
    """Yield (lo, hi) index ranges of numbers with 1, 2, ... digits, clipped to stop."""
    lo = 1
    while lo < stop:
        hi = min(lo * k, stop)
        yield lo, hi
        lo *= k


def _run(k, mats_t, w, v, stop, reduce=None):
    """Generic level recursion; returns values v . R(n) for n < stop.

    mats_t[d] is M_d transposed (rows of R are row vectors R(n)^T).
    """
    out = np.empty(stop, dtype=w.dtype)
    prev = w[None, :]
    prev_lo = 0
    out[0] = reduce(prev @ v)[0] if reduce else (prev @ v)[0]
    for lo, hi in _levels(k, stop):
        cur = np.empty((hi - lo, w.shape[0]), dtype=w.dtype)
        for d in range(k):
            first = lo + ((d - lo) % k)
            if first >= hi:
                continue
            idx = np.arange(first, hi, k)
            parents = idx // k - prev_lo
            block = prev[parents] @ mats_t[d]
            cur[idx - lo] = reduce(block) if reduce else block
        vals = cur @ v
        out[lo:hi] = reduce(vals) if reduce else vals
        prev, prev_lo = cur, lo
    return out


def _abs_bound(k, mats, w, v, stop) -> float:
    a = [np.abs(np.array(m, dtype=float)).T for m in mats]
    with np.errstate(over="ignore", invalid="ignore"):
        vals = _run(k, a, np.abs(np.array(w, dtype=float)), np.abs(np.array(v, dtype=float)), stop)
    return float(np.max(vals)) if vals.size else 0.0


def _modular(k, mats, w, v, stop, p):
    pf = float(p)
    red = lambda x: np.fmod(x, pf)
    a = [np.array([[x % p for x in row] for row in m], dtype=float).T.copy() for m in mats]
    wf = np.array([x % p for x in w], dtype=float)
    vf = np.array([x % p for x in v], dtype=float)
    return _run(k, a, wf, vf, stop, red).astype(np.int64)


def _crt(residues: list[np.ndarray], primes: list[int]) -> np.ndarray:
    """Garner recombination to symmetric representatives (object array)."""
    digits = []
    for i, (a, p) in enumerate(zip(residues, primes)):
        acc = np.zeros_like(a)
        prod = 1
        for c, q in zip(digits, primes):
            acc = (acc + c * prod) % p
            prod = (prod * q) % p
        inv = pow(prod, -1, p)
        digits.append(((a - acc) % p) * inv % p)
    out = np.zeros(len(residues[0]), dtype=object)
    for c, p in zip(reversed(digits), reversed(primes)):
        out = out * p + c.astype(object)
    modulus = math.prod(primes)
    half = modulus // 2
    return np.where(out > half, out - modulus, out)


def _object_path(k, mats, w, v, stop):
    a = [np.array(m, dtype=object).T.copy() for m in mats]
    return _run(k, a, np.array(w, dtype=object), np.array(v, dtype=object), stop)


def integer_values(rep, stop: int):
    """Scaled integer values and their scale: f(n) = ints[n] / (scale0 * den**len(n))."""
    mats, v, w, den, scale0 = _integer_data(rep)
    r = rep.rank
    if stop <= 0:
        return np.zeros(0, dtype=object), den, scale0
    if r == 0:
        return np.zeros(stop, dtype=object), den, scale0
    bound = _abs_bound(rep.k, mats, w, v, stop) if r <= _MAX_FLOAT_RANK else math.inf
    if math.isfinite(bound) and bound < 1e290:
        need = 2 * (bound * (1 + 1e-6) + 1) + 1
        primes, prod = [], 1
        for p in _primes():
            primes.append(p)
            prod *= p
            if prod > need:
                break
        res = [_modular(rep.k, mats, w, v, stop, p) for p in primes]
        ints = _crt(res, primes)
    else:
        ints = _object_path(rep.k, mats, w, v, stop)
    return ints, den, scale0


def batch_values(rep, stop: int) -> list[Fraction]:
    ints, den, scale0 = integer_values(rep, stop)
    if den == 1 and scale0 == 1:
        return [Fraction(int(x)) for x in ints]
    out = []
    scale = scale0
    for lo, hi in [(0, 1), *_levels(rep.k, stop)]:
        if lo > 0:
            scale *= den
        out.extend(Fraction(int(x), scale) for x in ints[lo:hi])
    return out[:stop]
