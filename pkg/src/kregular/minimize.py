"""Minimization, zeroness and equality of linear representations.

Minimality here is about the *sequence* n -> f(n), which only ever feeds
canonical digit words (no trailing most-significant zeros) to the
representation.  That is a weaker requirement than equality of the formal
series over all words, so the reduction treats the last digit specially.

Write every positive n as a word u d with d the nonzero leading digit, so
f(n) = v M_u beta_d with beta_d = M_d w.  The reduction

1. restricts to the right space W spanned by the vectors M_u beta_d,
2. restricts to the left space spanned by the row vectors v M_u inside W,
3. looks for one terminal vector w'' with M''_d w'' = beta''_d for every
   nonzero d and v'' w'' = f(0).

After steps 1 and 2 the Hankel matrix (prefix x, suffix y ending in a
nonzero digit) factors through a space of dimension sigma with both factors
of full rank, so every representation has rank >= sigma.  If step 3 has a
solution the result has rank sigma; otherwise no rank-sigma representation
exists (any one would be similar to the reduced one and supply a solution)
and one adjoined coordinate carrying f(0) gives rank sigma + 1.

Bases are grown breadth first by word length, lexicographically within a
length, with exact Gaussian elimination.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import _linalg as la
from ._linalg import ONE, ZERO
from .linrep import LinearRepresentation, check_same_base
from .transforms import sub

Rep = LinearRepresentation


@dataclass(frozen=True)
class MinimizationResult:
    minimized: LinearRepresentation
    original_rank: int
    left_basis_words: list
    right_basis_words: list

    @property
    def rank(self) -> int:
        return self.minimized.rank


def _right_space(rep: Rep):
    """Basis of span{M_u M_d w : d != 0} with the words (u + (d,)) producing it."""
    span = la.Span(rep.rank)
    words = []
    queue = deque()
    for d in range(1, rep.k):
        b = la.mat_vec(rep.matrices[d], rep.w)
        if span.add(b):
            words.append((d,))
            queue.append((b, (d,)))
    while queue:
        b, word = queue.popleft()
        for e in range(rep.k):
            nb = la.mat_vec(rep.matrices[e], b)
            if span.add(nb):
                words.append((e,) + word)
                queue.append((nb, (e,) + word))
    return span, words


def _left_space(v, mats, k):
    span = la.Span(len(v))
    words = []
    queue = deque()
    if span.add(v):
        words.append(())
        queue.append((v, ()))
    while queue:
        a, word = queue.popleft()
        for e in range(k):
            na = la.vec_mat(a, mats[e])
            if span.add(na):
                words.append(word + (e,))
                queue.append((na, word + (e,)))
    return span, words


def minimize(rep: Rep) -> MinimizationResult:
    k = rep.k
    f0 = la.dot(rep.v, rep.w)

    # step 1: coordinates in the right space W
    right, right_words = _right_space(rep)
    rho = len(right)
    basis = right.basis
    # C_e has column j = coordinates of M_e b_j
    c_mats = []
    for e in range(k):
        cols = [right.coordinates(la.mat_vec(rep.matrices[e], b)) for b in basis]
        c_mats.append(la.transpose(cols) if rho else ())
    v1 = tuple(la.dot(rep.v, b) for b in basis)
    finals = {d: right.coordinates(la.mat_vec(rep.matrices[d], rep.w)) for d in range(1, k)}

    # step 2: coordinates in the left space U, rows a_i with a_i C_e = sum_j D_e[i][j] a_j
    left, left_words = _left_space(v1, c_mats, k)
    sigma = len(left)
    rows = left.basis
    d_mats = [[left.coordinates(la.vec_mat(a, c_mats[e])) for a in rows] for e in range(k)]
    gammas = {d: tuple(la.dot(a, finals[d]) for a in rows) for d in range(1, k)}
    v2 = tuple(ONE if i == 0 else ZERO for i in range(sigma))

    # step 3: a single terminal vector, if one exists
    eqs, rhs = [], []
    for d in range(1, k):
        eqs.extend(d_mats[d])
        rhs.extend(gammas[d])
    eqs.append(v2)
    rhs.append(f0)
    w2 = la.solve(eqs, rhs) if sigma else (() if f0 == 0 else None)

    if w2 is not None:
        out = Rep._raw(k, v2, d_mats if sigma else [()] * k, w2)
    else:
        mats = []
        for e in range(k):
            col = [ZERO] * sigma + [ONE] if e == 0 else list(gammas[e]) + [ZERO]
            m = [list(row) + [col[i]] for i, row in enumerate(d_mats[e])]
            m.append([ZERO] * sigma + [col[sigma]])
            mats.append(m)
        out = Rep._raw(k, v2 + (f0,), mats, (ZERO,) * sigma + (ONE,))
    return MinimizationResult(out, rep.rank, [list(w) for w in left_words],
                              [list(w) for w in right_words])


def minimized(rep: Rep) -> Rep:
    return minimize(rep).minimized


def rank(rep: Rep) -> int:
    return rep.rank


def minimal_rank(rep: Rep) -> int:
    return minimize(rep).rank


def is_zero(rep: Rep) -> bool:
    """Exact decision whether f(n) = 0 for every n >= 0."""
    return minimal_rank(rep) == 0


def equal(a: Rep, b: Rep) -> bool:
    """Exact decision whether two sequences agree at every n."""
    check_same_base(a, b)
    return is_zero(sub(a, b))


def find_difference(a: Rep, b: Rep, limit: int = 1 << 16) -> int | None:
    """Smallest n < limit with a(n) != b(n), or None."""
    from .linrep import evaluate_range

    check_same_base(a, b)
    for n, x in enumerate(evaluate_range(sub(a, b), limit)):
        if x:
            return n
    return None
