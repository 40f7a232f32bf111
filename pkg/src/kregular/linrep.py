"""Linear representations of k-regular sequences.

A representation ``(v, M_0, ..., M_{k-1}, w)`` of rank r defines

    f(n) = v . M_{n_0} . M_{n_1} ... M_{n_{s-1}} . w

where ``n_0`` is the least significant base-k digit of n and the product
runs over the canonical expansion (no leading zeros; n = 0 is the empty
word).  All scalars are exact ``Fraction`` values.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _linalg as la
from ._linalg import ONE, ZERO


class RepresentationError(ValueError):
    """Malformed or inconsistent representation data."""


class BaseMismatchError(ValueError):
    pass


def digits_lsd(n: int, k: int) -> list[int]:
    """Canonical base-k digits of n, least significant first; [] for 0."""
    if k < 2:
        raise ValueError(f"base must be at least 2, got {k}")
    if n < 0:
        raise ValueError(f"expected a nonnegative integer, got {n}")
    out = []
    while n:
        n, d = divmod(n, k)
        out.append(d)
    return out


def from_digits(digits: Sequence[int], k: int) -> int:
    n = 0
    for d in reversed(digits):
        n = n * k + d
    return n


def digit_length(n: int, k: int) -> int:
    """|(n)_k|, with 0 for n = 0."""
    s = 0
    while n:
        n //= k
        s += 1
    return s


@dataclass(frozen=True)
class LinearRepresentation:
    k: int
    v: tuple
    matrices: tuple
    w: tuple

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 2:
            raise RepresentationError(f"base must be an integer >= 2, got {self.k!r}")
        v = tuple(la.frac(x) for x in self.v)
        w = tuple(la.frac(x) for x in self.w)
        r = len(v)
        if len(w) != r:
            raise RepresentationError(f"v has {r} entries but w has {len(w)}")
        if len(self.matrices) != self.k:
            raise RepresentationError(
                f"base {self.k} needs {self.k} matrices, got {len(self.matrices)}")
        mats = []
        for d, m in enumerate(self.matrices):
            if len(m) != r or any(len(row) != r for row in m):
                raise RepresentationError(f"matrix M_{d} is not {r}x{r}")
            mats.append(tuple(tuple(la.frac(x) for x in row) for row in m))
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "matrices", tuple(mats))

    @classmethod
    def _raw(cls, k, v, matrices, w) -> "LinearRepresentation":
        # trusted constructor for internal builders: entries are Fractions already
        self = object.__new__(cls)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "v", tuple(v))
        object.__setattr__(self, "matrices", tuple(la.freeze(m) for m in matrices))
        object.__setattr__(self, "w", tuple(w))
        return self

    @property
    def rank(self) -> int:
        return len(self.v)

    def __call__(self, n: int) -> Fraction:
        return evaluate(self, n)

    def __repr__(self) -> str:
        return f"<LinearRepresentation k={self.k} rank={self.rank}>"


Rep = LinearRepresentation


def zero_rep(k: int) -> LinearRepresentation:
    return LinearRepresentation._raw(k, (), [()] * k, ())


def check_same_base(*reps: LinearRepresentation) -> int:
    ks = {r.k for r in reps}
    if len(ks) != 1:
        raise BaseMismatchError(f"representations have different bases {sorted(ks)}")
    return ks.pop()


def evaluate_word(rep: LinearRepresentation, word: Sequence[int]) -> Fraction:
    """v . M_{word[0]} ... M_{word[-1]} . w, taking the word verbatim."""
    x = rep.v
    for d in word:
        if not 0 <= d < rep.k:
            raise ValueError(f"digit {d} out of range for base {rep.k}")
        x = la.vec_mat(x, rep.matrices[d])
    return la.dot(x, rep.w)


def evaluate(rep: LinearRepresentation, n: int) -> Fraction:
    return evaluate_word(rep, digits_lsd(n, rep.k))


def evaluate_range(rep: LinearRepresentation, stop: int, start: int = 0) -> list[Fraction]:
    """Exact values f(start), ..., f(stop - 1)."""
    from ._fast import batch_values

    if start < 0 or stop < start:
        raise ValueError(f"bad range [{start}, {stop})")
    return batch_values(rep, stop)[start:]


def matrix_seq(matrices: Sequence, n: int) -> tuple:
    """F(n) = F_{n_0} ... F_{n_{s-1}} over the canonical base-len(matrices) digits."""
    k = len(matrices)
    if k < 2:
        raise ValueError("need at least two matrices (base k >= 2)")
    mats = [la.freeze([la.frac(x) for x in row] for row in m) for m in matrices]
    dim = len(mats[0])
    if any(len(m) != dim or any(len(row) != dim for row in m) for m in mats):
        raise ValueError("matrices must be square and of equal dimension")
    out = la.identity(dim)
    for d in digits_lsd(n, k):
        out = la.mat_mul(out, mats[d])
    return out


def is_zero_robust(rep: LinearRepresentation) -> bool:
    """True when M_0 w = w, i.e. padding zeros on the most significant side is harmless."""
    return la.mat_vec(rep.matrices[0], rep.w) == rep.w


def override_zero(rep: LinearRepresentation, value) -> LinearRepresentation:
    """Rank r+1 representation equal to rep for n > 0 and to ``value`` at n = 0.

    The adjoined coordinate is where w lives; nonzero digits move it into the
    old space (carrying M_d w) and the digit 0 fixes it, so the result is
    zero-robust as well.
    """
    r = rep.rank
    mats = []
    for d, m in enumerate(rep.matrices):
        # column r of M'_d is the image of the adjoined coordinate
        col = [ZERO] * r + [ONE] if d == 0 else list(la.mat_vec(m, rep.w)) + [ZERO]
        rows = [list(row) + [col[i]] for i, row in enumerate(m)]
        rows.append([ZERO] * r + [col[r]])
        mats.append(rows)
    w = tuple([ZERO] * r + [ONE])
    v = tuple(rep.v) + (la.frac(value),)
    return LinearRepresentation._raw(rep.k, v, mats, w)


def normalize_leading_zeros(rep: LinearRepresentation) -> LinearRepresentation:
    """Equivalent representation with M_0 w = w (returned unchanged if it already holds)."""
    if is_zero_robust(rep):
        return rep
    return override_zero(rep, la.dot(rep.v, rep.w))


def reverse(rep: LinearRepresentation) -> LinearRepresentation:
    """Representation reading the word backwards: swap v and w, transpose matrices."""
    return LinearRepresentation._raw(
        rep.k, rep.w, [la.transpose(m) for m in rep.matrices], rep.v)


# --- serialization ---------------------------------------------------------

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def parse_rational(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise RepresentationError(f"expected a rational string, got {text!r}")
    text = str(text).strip()
    if not _RATIONAL.fullmatch(text):
        raise RepresentationError(f"not a rational number: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise RepresentationError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def to_dict(rep: LinearRepresentation) -> dict:
    return {
        "k": rep.k,
        "rank": rep.rank,
        "v": [format_rational(x) for x in rep.v],
        "matrices": [[[format_rational(x) for x in row] for row in m] for m in rep.matrices],
        "w": [format_rational(x) for x in rep.w],
    }


def serialize(rep: LinearRepresentation, provenance: dict | None = None) -> str:
    d = to_dict(rep)
    if provenance:
        d["provenance"] = provenance
    return json.dumps(d)


def from_dict(d: dict) -> LinearRepresentation:
    if not isinstance(d, dict):
        raise RepresentationError("representation must be a JSON object")
    missing = {"k", "rank", "v", "matrices", "w"} - d.keys()
    if missing:
        raise RepresentationError(f"missing fields: {sorted(missing)}")
    extra = set(d) - {"k", "rank", "v", "matrices", "w", "provenance"}
    if extra:
        raise RepresentationError(f"unknown fields: {sorted(extra)}")
    k, rank = d["k"], d["rank"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise RepresentationError(f"k must be an integer >= 2, got {k!r}")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
        raise RepresentationError(f"rank must be a nonnegative integer, got {rank!r}")
    try:
        v = [parse_rational(x) for x in d["v"]]
        w = [parse_rational(x) for x in d["w"]]
        mats = [[[parse_rational(x) for x in row] for row in m] for m in d["matrices"]]
    except TypeError as exc:
        raise RepresentationError(f"malformed arrays: {exc}") from None
    if len(v) != rank or len(w) != rank:
        raise RepresentationError(f"declared rank {rank} but |v|={len(v)}, |w|={len(w)}")
    return LinearRepresentation(k, v, mats, w)


def deserialize(text: str) -> LinearRepresentation:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RepresentationError(f"not valid JSON: {exc}") from None
    return from_dict(d)


def load(path) -> LinearRepresentation:
    with open(path) as fh:
        return deserialize(fh.read())


def save(rep: LinearRepresentation, path, provenance: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(serialize(rep, provenance))
        fh.write("\n")


def s2_rep() -> LinearRepresentation:
    """The rank-2 binary digit-sum representation from the classical example."""
    return LinearRepresentation(2, [0, 1], [[[1, 0], [0, 1]], [[0, -1], [1, 2]]], [1, 0])
