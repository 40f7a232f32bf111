"""Bounded scans over prefixes of a sequence: zeros, preimages, images,
alpha-powers and palindromes.

Every question answered here is undecidable over all n; these functions only
look at a finite prefix and say so.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linrep import LinearRepresentation, digits_lsd, evaluate_range

Rep = LinearRepresentation

BANNER = "bounded evidence only: this scan covers a finite prefix and decides nothing about all n"
DEFAULT_LIMIT = 10 ** 4
# rough cap on (prefix length) x (rank), which bounds the evaluator's working memory
MEMORY_BUDGET = 5 * 10 ** 7
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class ScanTooLargeError(ValueError):
    pass


def check_budget(rep: Rep, n: int) -> None:
    if n * max(rep.rank, 1) > MEMORY_BUDGET:
        raise ScanTooLargeError(
            f"scanning {n} terms of a rank-{rep.rank} representation exceeds the memory "
            f"guard ({MEMORY_BUDGET} entries); lower --limit or minimize first")


def scan(rep: Rep, n: int, start: int = 0) -> list[Fraction]:
    check_budget(rep, n)
    return evaluate_range(rep, n, start)


def format_word(digits_msd: Sequence[int], k: int) -> str:
    if k <= len(_DIGITS):
        return "".join(_DIGITS[d] for d in digits_msd)
    return ",".join(str(d) for d in digits_msd)


def word_of(n: int, k: int) -> str:
    """(n)_k written most significant digit first; '' for 0."""
    return format_word(digits_lsd(n, k)[::-1], k)


def find_zeros(values: Sequence) -> list[int]:
    return [n for n, x in enumerate(values) if x == 0]


def preimage_words(rep: Rep, target, max_len: int) -> list[str]:
    """All canonical words u with |u| <= max_len and f(value(u)) = target, in radix order.

    For canonical words radix order (length, then lexicographic) is numeric order.
    """
    target = Fraction(target)
    n = rep.k ** max_len
    vals = scan(rep, n)
    return [word_of(i, rep.k) for i, x in enumerate(vals) if x == target]


@dataclass
class ImageReport:
    bound: int
    present: list
    missing: list
    only_first: list | None = None
    only_second: list | None = None


def image_report(values: Sequence, bound: int, other: Sequence | None = None) -> ImageReport:
    """Which integers in [-bound, bound] occur among the values (and, for two
    prefixes, the symmetric difference of their images inside that window)."""
    window = range(-bound, bound + 1)
    seen = {x for x in values if x.denominator == 1 and -bound <= x <= bound}
    present = [m for m in window if m in seen]
    missing = [m for m in window if m not in seen]
    rep = ImageReport(bound, present, missing)
    if other is not None:
        seen2 = {x for x in other if x.denominator == 1 and -bound <= x <= bound}
        rep.only_first = sorted(int(x) for x in seen - seen2)
        rep.only_second = sorted(int(x) for x in seen2 - seen)
    return rep


@dataclass(frozen=True)
class FactorHit:
    start: int
    length: int
    period: int | None = None


def _ids(values: Sequence) -> np.ndarray:
    table: dict = {}
    return np.array([table.setdefault(x, len(table)) for x in values], dtype=np.int64)


def find_powers(values: Sequence, alpha: int, max_hits: int | None = None):
    """All (start i, period m) with i + alpha*m <= N and
    f(i + t) = f(i + s*m + t) for 0 <= s < alpha, 0 <= t < m.

    Returns (hits, total) where hits is ordered by period then start and
    truncated to ``max_hits``; total counts every hit.
    """
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    ids = _ids(values)
    n = len(ids)
    hits, total = [], 0
    for m in range(1, n // alpha + 1):
        span = (alpha - 1) * m
        eq = ids[:-m] == ids[m:]
        csum = np.concatenate(([0], np.cumsum(eq, dtype=np.int64)))
        starts = np.arange(0, n - alpha * m + 1)
        good = np.nonzero(csum[starts + span] - csum[starts] == span)[0]
        total += len(good)
        room = len(good) if max_hits is None else max(0, max_hits - len(hits))
        hits.extend(FactorHit(int(i), alpha * m, m) for i in good[:room])
    return hits, total


def is_power(values: Sequence, start: int, period: int, alpha: int) -> bool:
    """Direct check of the alpha-power equalities (used to re-verify scan hits)."""
    if start + alpha * period > len(values):
        return False
    block = values[start:start + period]
    return all(values[start + s * period + t] == block[t]
               for s in range(alpha) for t in range(period))


def _maximal_palindromes(ids: np.ndarray) -> tuple[list[int], list[int]]:
    """Manacher: odd[i] = radius of the longest odd palindrome centred at i
    (length 2*odd[i]+1); even[i] = half-length of the longest even palindrome
    whose right half starts at i."""
    n = len(ids)
    odd = [0] * n
    lo, hi = 0, -1
    for i in range(n):
        r = 0 if i > hi else min(odd[lo + hi - i], hi - i)
        while i - r - 1 >= 0 and i + r + 1 < n and ids[i - r - 1] == ids[i + r + 1]:
            r += 1
        odd[i] = r
        if i + r > hi:
            lo, hi = i - r, i + r
    even = [0] * n
    lo, hi = 0, -1
    for i in range(n):
        r = 0 if i > hi else min(even[lo + hi - i + 1], hi - i + 1)
        while i - r - 1 >= 0 and i + r < n and ids[i - r - 1] == ids[i + r]:
            r += 1
        even[i] = r
        if i + r - 1 > hi:
            lo, hi = i - r, i + r - 1
    return odd, even


def find_palindromes(values: Sequence, min_len: int = 2, max_hits: int | None = None):
    """All palindromic factors of length >= min_len, as (hits, total).

    Hits are listed centre by centre (longest first at each centre) and
    truncated to ``max_hits``; total counts all of them.
    """
    ids = _ids(values)
    odd, even = _maximal_palindromes(ids)
    hits, total = [], 0
    for i in range(len(ids)):
        for kind, radius in (("odd", odd[i]), ("even", even[i])):
            if kind == "odd":
                lengths = range(2 * radius + 1, max(min_len, 1) - 1, -2)
            else:
                lengths = range(2 * radius, max(min_len, 2) - 1, -2)
            total += len(lengths)
            for length in lengths:
                if max_hits is not None and len(hits) >= max_hits:
                    break
                half = length // 2
                hits.append(FactorHit(i - half, length))
    return hits, total


def is_palindrome(values: Sequence, start: int, length: int) -> bool:
    block = list(values[start:start + length])
    return len(block) == length and block == block[::-1]


def nontrivial_palindrome_witness(values: Sequence) -> int | None:
    """First i with f(i) = f(i+1) or f(i) = f(i+2); such an i exists iff the
    prefix has a palindromic factor of length >= 2."""
    for i in range(len(values) - 1):
        if values[i] == values[i + 1] or (i + 2 < len(values) and values[i] == values[i + 2]):
            return i
    return None
