"""Exact dense linear algebra over the rationals.

Matrices are tuples of row tuples, vectors are tuples; all entries are
``Fraction``.  Nothing here is clever: these routines back the
constructions and the minimization, where exactness matters more than speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple
Matrix = tuple


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def zeros(n: int, m: int | None = None) -> list[list[Fraction]]:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def freeze(rows: Iterable[Sequence]) -> Matrix:
    return tuple(tuple(row) for row in rows)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return ()
    cols = transpose(b)
    if not cols:
        return tuple(() for _ in a)
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col) if x and y), ZERO) for col in cols)
        for row in a
    )


def vec_mat(v: Sequence, a: Matrix) -> Vector:
    """Row vector times matrix."""
    n = len(a[0]) if a else 0
    out = [ZERO] * n
    for x, row in zip(v, a):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return tuple(out)


def mat_vec(a: Matrix, w: Sequence) -> Vector:
    """Matrix times column vector."""
    return tuple(sum((x * y for x, y in zip(row, w) if x and y), ZERO) for row in a)


def dot(u: Sequence, w: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(u, w) if x and y), ZERO)


def kron(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(x * y for x in ra for y in rb) for ra in a for rb in b
    )


def kron_vec(u: Sequence, w: Sequence) -> Vector:
    return tuple(x * y for x in u for y in w)


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[off + i][off:off + len(row)] = row
        off += len(b)
    return freeze(out)


def is_zero_vec(v: Sequence) -> bool:
    return not any(v)


def inf_norm(a: Matrix) -> Fraction:
    """Maximum absolute row sum."""
    return max((sum(abs(x) for x in row) for row in a), default=ZERO)


class Span:
    """Incrementally grown subspace of Q^n with coordinates in a chosen basis.

    ``basis`` keeps the vectors in the order they were accepted; an internal
    reduced row-echelon copy (pivot = first nonzero column) answers
    membership and coordinate queries.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.basis: list[Vector] = []
        self._rows: list[list[Fraction]] = []
        self._pivots: list[int] = []
        # each echelon row as a combination of basis vectors
        self._expr: list[list[Fraction]] = []

    def __len__(self) -> int:
        return len(self.basis)

    def _reduce(self, x: Sequence) -> tuple[list[Fraction], list[Fraction]]:
        r = list(x)
        c = [ZERO] * len(self._rows)
        for idx, (row, p) in enumerate(zip(self._rows, self._pivots)):
            f = r[p]
            if f:
                c[idx] = f
                for j in range(p, self.dim):
                    if row[j]:
                        r[j] -= f * row[j]
        return r, c

    def coordinates(self, x: Sequence) -> list[Fraction] | None:
        """Coordinates of ``x`` in ``basis``, or None when x is outside the span."""
        r, c = self._reduce(x)
        if any(r):
            return None
        out = [ZERO] * len(self.basis)
        for ci, expr in zip(c, self._expr):
            if ci:
                for j, e in enumerate(expr):
                    if e:
                        out[j] += ci * e
        return out

    def add(self, x: Sequence) -> bool:
        """Insert ``x``; return True if it enlarged the span."""
        r, c = self._reduce(x)
        p = next((j for j, y in enumerate(r) if y), None)
        if p is None:
            return False
        m = len(self.basis)
        expr = [ZERO] * (m + 1)
        expr[m] = ONE
        for ci, e in zip(c, self._expr):
            if ci:
                for j, y in enumerate(e):
                    if y:
                        expr[j] -= ci * y
        inv = ONE / r[p]
        r = [y * inv for y in r]
        expr = [y * inv for y in expr]
        for e in self._expr:
            e.append(ZERO)
        for row, e in zip(self._rows, self._expr):
            f = row[p]
            if f:
                for j in range(self.dim):
                    if r[j]:
                        row[j] -= f * r[j]
                for j in range(m + 1):
                    if expr[j]:
                        e[j] -= f * expr[j]
        self._rows.append(r)
        self._pivots.append(p)
        self._expr.append(expr)
        self.basis.append(tuple(x))
        return True


def solve(a: Matrix, b: Sequence) -> Vector | None:
    """One solution x of a x = b (a is m-by-n), or None if inconsistent."""
    m = len(a)
    n = len(a[0]) if a else 0
    aug = [list(row) + [frac(bi)] for row, bi in zip(a, b)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = ONE / aug[r][c]
        aug[r] = [y * inv for y in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [y - f * z for y, z in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    if any(aug[i][n] for i in range(r, m)):
        return None
    x = [ZERO] * n
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][n]
    return tuple(x)
