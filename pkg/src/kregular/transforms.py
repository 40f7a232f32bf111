"""Closure constructions on linear representations.

Every construction returns a new, unminimized representation; call
``minimize.minimize`` explicitly if a small rank matters.

Index maps n -> u(n) (affine maps, shifts, the routing inside shuffles and
base change) all go through ``transduce``: a deterministic digit transducer
realising u is multiplied with the representation of f, giving a
representation of f(u(n)) whose rank is rank(f) times the number of
transducer states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from ._linalg import ONE, ZERO
from .linrep import (
    LinearRepresentation,
    check_same_base,
    digits_lsd,
    normalize_leading_zeros,
    zero_rep,
)

Rep = LinearRepresentation


# --- sums and products -----------------------------------------------------

def add(a: Rep, b: Rep) -> Rep:
    """Pointwise sum, as a block-diagonal direct sum (rank r_a + r_b)."""
    k = check_same_base(a, b)
    mats = [la.block_diag(x, y) for x, y in zip(a.matrices, b.matrices)]
    return Rep._raw(k, a.v + b.v, mats, a.w + b.w)


def scalar_mul(c, a: Rep) -> Rep:
    c = la.frac(c)
    return Rep._raw(a.k, tuple(c * x for x in a.v), a.matrices, a.w)


def sub(a: Rep, b: Rep) -> Rep:
    return add(a, scalar_mul(-1, b))


def pointwise_mul(a: Rep, b: Rep) -> Rep:
    """Pointwise (Hadamard) product via Kronecker products (rank r_a * r_b)."""
    k = check_same_base(a, b)
    mats = [la.kron(x, y) for x, y in zip(a.matrices, b.matrices)]
    return Rep._raw(k, la.kron_vec(a.v, b.v), mats, la.kron_vec(a.w, b.w))


def _put(big, bi: int, bj: int, r: int, block) -> None:
    for i, row in enumerate(block):
        target = big[bi * r + i]
        for j, x in enumerate(row):
            if x:
                target[bj * r + j] += x


def convolve(a: Rep, b: Rep) -> Rep:
    """Cauchy product c(n) = sum_{i+j=n} a(i) b(j).

    Reads the digits of n together with guessed digits of i and j and the
    carry of i + j; a path survives iff the final carry is zero.  Both inputs
    are made zero-robust first, since i and j are read padded to the length
    of n.
    """
    k = check_same_base(a, b)
    a = normalize_leading_zeros(a)
    b = normalize_leading_zeros(b)
    r = a.rank * b.rank
    kr = {(y, z): la.kron(a.matrices[y], b.matrices[z]) for y in range(k) for z in range(k)}
    mats = []
    for x in range(k):
        big = la.zeros(2 * r)
        for (y, z), m in kr.items():
            for c in (0, 1):
                total = y + z + c
                if total % k == x:
                    _put(big, c, total // k, r, m)
        mats.append(big)
    v = la.kron_vec(a.v, b.v) + (ZERO,) * r
    w = la.kron_vec(a.w, b.w) + (ZERO,) * r
    return Rep._raw(k, v, mats, w)


def partial_sums(g: Rep) -> Rep:
    """f(n) = sum_{m < n} g(m), f(0) = 0.

    Two blocks of size rank(g): the first follows m while its low digits are
    >= those of n, the second once they are strictly smaller; the most
    significant differing digit decides, and only the second block is read
    out at the end.
    """
    g = normalize_leading_zeros(g)
    k, r = g.k, g.rank
    mats = []
    for x in range(k):
        big = la.zeros(2 * r)
        for y, m in enumerate(g.matrices):
            if y < x:
                _put(big, 0, 1, r, m)
                _put(big, 1, 1, r, m)
            elif y > x:
                _put(big, 0, 0, r, m)
                _put(big, 1, 0, r, m)
            else:
                _put(big, 0, 0, r, m)
                _put(big, 1, 1, r, m)
        mats.append(big)
    v = g.v + (ZERO,) * r
    w = (ZERO,) * r + g.w
    return Rep._raw(k, v, mats, w)


# --- transducers -----------------------------------------------------------

@dataclass(frozen=True)
class DigitTransducer:
    """Deterministic sequential machine mapping base-k_in digits to base-k_out digits.

    ``delta[(state, digit)] = (next_state, output_digits)`` and
    ``final[state]`` is the word appended when the input ends, or None when
    the map is undefined for inputs ending in that state (the composed
    sequence is then 0 there).  With ``msd_first`` the input is read and the
    output emitted most significant digit first; otherwise both are least
    significant first.  ``canonical`` promises that outputs never carry
    leading zeros, which lets ``transduce`` skip normalization.
    """

    k_in: int
    k_out: int
    start: object
    delta: dict
    final: dict
    msd_first: bool = False
    canonical: bool = False

    def states(self) -> list:
        seen = {self.start: None}
        queue = [self.start]
        while queue:
            q = queue.pop(0)
            for x in range(self.k_in):
                try:
                    nq, out = self.delta[(q, x)]
                except KeyError:
                    raise ValueError(f"transducer has no transition from {q!r} on {x}") from None
                if any(not 0 <= d < self.k_out for d in out):
                    raise ValueError(f"transducer emits a digit outside base {self.k_out}")
                if nq not in seen:
                    seen[nq] = None
                    queue.append(nq)
        return list(seen)

    def apply(self, n: int) -> int | None:
        """The index map itself, computed directly on integers (for checking)."""
        digits = digits_lsd(n, self.k_in)
        if self.msd_first:
            digits = digits[::-1]
        q, out = self.start, []
        for x in digits:
            q, o = self.delta[(q, x)]
            out.extend(o)
        tail = self.final.get(q)
        if tail is None:
            return None
        out.extend(tail)
        if self.msd_first:
            out = out[::-1]
        value = 0
        for d in reversed(out):
            value = value * self.k_out + d
        return value


def _word_matrix(rep: Rep, word: Sequence[int], reverse: bool) -> tuple:
    m = la.identity(rep.rank)
    for d in (reversed(word) if reverse else word):
        m = la.mat_mul(m, rep.matrices[d])
    return m


def transduce(f: Rep, t: DigitTransducer) -> Rep:
    """Representation of n -> f(u(n)) where u is the map realised by ``t``."""
    if f.k != t.k_out:
        raise ValueError(f"transducer outputs base {t.k_out} digits but f has base {f.k}")
    if not t.canonical:
        f = normalize_leading_zeros(f)
    states = t.states()
    index = {q: i for i, q in enumerate(states)}
    r = f.rank
    size = r * len(states)
    cache: dict[tuple, tuple] = {}

    def word_mat(word):
        key = tuple(word)
        if key not in cache:
            cache[key] = _word_matrix(f, key, t.msd_first)
        return cache[key]

    mats = []
    for x in range(t.k_in):
        big = la.zeros(size)
        for q in states:
            nq, out = t.delta[(q, x)]
            if t.msd_first:
                _put(big, index[nq], index[q], r, word_mat(out))
            else:
                _put(big, index[q], index[nq], r, word_mat(out))
        mats.append(big)

    v = [ZERO] * size
    w = [ZERO] * size
    s0 = index[t.start] * r
    if t.msd_first:
        w[s0:s0 + r] = f.w
        for q in states:
            tail = t.final.get(q)
            if tail is not None:
                i = index[q] * r
                v[i:i + r] = la.vec_mat(f.v, word_mat(tail))
    else:
        v[s0:s0 + r] = f.v
        for q in states:
            tail = t.final.get(q)
            if tail is not None:
                i = index[q] * r
                w[i:i + r] = la.mat_vec(word_mat(tail), f.w)
    return Rep._raw(t.k_in, v, mats, w)


def identity_transducer(k: int) -> DigitTransducer:
    return DigitTransducer(k, k, 0, {(0, x): (0, (x,)) for x in range(k)}, {0: ()},
                           canonical=True)


def affine_transducer(k: int, a: int, b: int) -> DigitTransducer:
    """n -> a*n + b, least significant digit first, the state being the carry."""
    if a < 1 or b < 0:
        raise ValueError(f"need a >= 1 and b >= 0, got a={a}, b={b}")
    delta, final = {}, {}
    queue, seen = [b], {b}
    while queue:
        c = queue.pop()
        final[c] = tuple(digits_lsd(c, k))
        for x in range(k):
            nc, d = divmod(a * x + c, k)
            delta[(c, x)] = (nc, (d,))
            if nc not in seen:
                seen.add(nc)
                queue.append(nc)
    return DigitTransducer(k, k, b, delta, final, canonical=True)


def subtract_transducer(k: int, c: int) -> DigitTransducer:
    """n -> n - c, undefined (final None) when n < c; the state is the borrow."""
    if c < 0:
        raise ValueError("c must be nonnegative")
    delta = {}
    for b in range(c + 1):
        for x in range(k):
            val = x - b
            nb = 0 if val >= 0 else (-val + k - 1) // k
            delta[(b, x)] = (nb, (val % k,))
    final = {b: (() if b == 0 else None) for b in range(c + 1)}
    return DigitTransducer(k, k, c, delta, final)


def divide_transducer(k: int, t: int, remainder: int) -> DigitTransducer:
    """n -> n div t on inputs with n mod t == remainder, most significant digit first."""
    if t < 1 or not 0 <= remainder < t:
        raise ValueError(f"bad divisor/remainder {t}/{remainder}")
    delta = {}
    for rem in range(t):
        for x in range(k):
            q, nr = divmod(rem * k + x, t)
            delta[(rem, x)] = (nr, (q,))
    final = {rem: (() if rem == remainder else None) for rem in range(t)}
    return DigitTransducer(k, k, 0, delta, final, msd_first=True)


def block_transducer(k: int, r: int) -> DigitTransducer:
    """Group r base-k digits into one base-k**r digit (least significant first)."""
    if r < 1:
        raise ValueError("block length must be >= 1")
    delta, final = {}, {}
    for c in range(r):
        for p in range(k ** c):
            final[(p, c)] = () if c == 0 else (p,)
            for x in range(k):
                np_ = p + x * k ** c
                if c + 1 == r:
                    delta[((p, c), x)] = ((0, 0), (np_,))
                else:
                    delta[((p, c), x)] = ((np_, c + 1), ())
    return DigitTransducer(k, k ** r, (0, 0), delta, final, canonical=True)


# --- index maps ------------------------------------------------------------

def affine_index(f: Rep, a: int, b: int) -> Rep:
    """g(n) = f(a*n + b) for integers a >= 1, b >= 0."""
    return transduce(f, affine_transducer(f.k, a, b))


def finite_rep(k: int, values: dict) -> Rep:
    """Sequence equal to ``values[n]`` on the given n and 0 elsewhere.

    States are the prefixes (least significant first) of the canonical
    expansions of the support, i.e. a trie.
    """
    words = {n: tuple(digits_lsd(n, k)) for n, x in values.items() if x}
    prefixes = {(): 0}
    for word in words.values():
        for j in range(1, len(word) + 1):
            prefixes.setdefault(word[:j], len(prefixes))
    size = len(prefixes)
    mats = [la.zeros(size) for _ in range(k)]
    for p, i in prefixes.items():
        for d in range(k):
            j = prefixes.get(p + (d,))
            if j is not None:
                mats[d][i][j] = ONE
    v = [ZERO] * size
    w = [ZERO] * size
    if size and words:
        v[0] = ONE
    for n, word in words.items():
        w[prefixes[word]] = la.frac(values[n])
    if not words:
        return zero_rep(k)
    return Rep._raw(k, v, mats, w)


def shift(f: Rep, c: int, fill=0) -> Rep:
    """c >= 0: g(n) = f(n - c) for n >= c and ``fill`` below; c < 0: g(n) = f(n + |c|)."""
    if c == 0:
        return f
    if c < 0:
        return affine_index(f, 1, -c)
    g = transduce(f, subtract_transducer(f.k, c))
    fill = la.frac(fill)
    if fill:
        g = add(g, finite_rep(f.k, {n: fill for n in range(c)}))
    return g


def shuffle(parts: Sequence[Rep]) -> Rep:
    """t-way perfect shuffle: c(t*i + j) = parts[j](i)."""
    t = len(parts)
    if t < 2:
        raise ValueError("a shuffle needs at least two sequences")
    k = check_same_base(*parts)
    out = None
    for j, p in enumerate(parts):
        piece = transduce(p, divide_transducer(k, t, j))
        out = piece if out is None else add(out, piece)
    return out


def base_change_power(f: Rep, k: int) -> Rep:
    """Re-express a base-K representation in base k, where K = k**r."""
    big = f.k
    r, power = 0, 1
    while power < big:
        power *= k
        r += 1
    if k < 2 or power != big or r == 0:
        raise ValueError(f"base {big} is not a positive power of {k}")
    if r == 1:
        return f
    return transduce(f, block_transducer(k, r))
