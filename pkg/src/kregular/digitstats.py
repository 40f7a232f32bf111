"""Primitive k-regular sequences: digit counts, polynomials in digit counts,
constants and affine functions of n."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from ._linalg import ONE, ZERO, frac
from .linrep import LinearRepresentation, digits_lsd, zero_rep
from .transforms import add, pointwise_mul

Rep = LinearRepresentation


def _unipotent(k: int, digit_weights) -> list:
    # row vector (value, unit) -> (value + weight(d) * unit * scale(d), ...)
    return [[[ONE, ZERO], [frac(a), frac(b)]] for a, b in digit_weights]


def digit_count_rep(k: int, d: int) -> Rep:
    """n -> number of occurrences of digit d in the canonical base-k expansion of n."""
    if not 0 <= d < k:
        raise ValueError(f"digit {d} out of range for base {k}")
    mats = _unipotent(k, [(1 if e == d else 0, 1) for e in range(k)])
    return Rep._raw(k, (ZERO, ONE), mats, (ONE, ZERO))


def digit_length_rep(k: int) -> Rep:
    """n -> |(n)_k|, the number of digits (0 for n = 0)."""
    mats = _unipotent(k, [(1, 1)] * k)
    return Rep._raw(k, (ZERO, ONE), mats, (ONE, ZERO))


def constant_rep(k: int, c) -> Rep:
    c = frac(c)
    return Rep._raw(k, (c,), [((ONE,),)] * k, (ONE,))


def affine_n_rep(k: int, a, b) -> Rep:
    """n -> a*n + b, carrying (value, k**s) through the digits."""
    mats = _unipotent(k, [(e, k) for e in range(k)])
    return Rep._raw(k, (frac(b), frac(a)), mats, (ONE, ZERO))


def identity_rep(k: int) -> Rep:
    return affine_n_rep(k, 1, 0)


def digit_counts(n: int, k: int, digits: Sequence[int]) -> tuple[int, ...]:
    """Direct (non-matrix) count of each listed digit in (n)_k."""
    z = digits_lsd(n, k)
    return tuple(z.count(d) for d in digits)


# --- polynomials -----------------------------------------------------------

class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in x1..xt; ``terms`` maps exponent tuples to nonzero coefficients."""

    nvars: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exps, c in self.terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {self.nvars} variables")
            if int(c) != c:
                raise ValueError("coefficients must be integers")
            clean[exps] = clean.get(exps, 0) + int(c)
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        return cls(nvars, {tuple(int(j == i) for j in range(nvars)): 1})

    def __call__(self, *xs) -> int:
        if len(xs) == 1 and isinstance(xs[0], (tuple, list)):
            xs = tuple(xs[0])
        if len(xs) != self.nvars:
            raise ValueError(f"expected {self.nvars} arguments, got {len(xs)}")
        total = 0
        for exps, c in self.terms.items():
            term = c
            for x, e in zip(xs, exps):
                term *= x ** e
            total += term
        return total

    def __add__(self, other: "Polynomial") -> "Polynomial":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.nvars, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, terms)

    def __pow__(self, n: int) -> "Polynomial":
        out = Polynomial.constant(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def monomials(self) -> list[tuple[int, tuple[int, ...]]]:
        order = sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e)))
        return [(self.terms[e], e) for e in order]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, exps in self.monomials():
            factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e]
            mag = abs(c)
            body = "*".join(([str(mag)] if mag != 1 or not factors else []) + factors)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x(?P<idx>\d+))|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character {text[start]!r}", start)
        start = m.start(m.lastgroup)
        if m.group("num") is not None:
            out.append(("num", int(m.group("num")), start))
        elif m.group("var") is not None:
            out.append(("var", int(m.group("idx")), start))
        else:
            out.append((m.group("op"), None, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    # expr := term (('+'|'-') term)* ; term := unary ('*' unary)*
    # unary := '-' unary | '+' unary | power ; power := atom ('^' num)?
    # atom := num | var | '(' expr ')'

    def __init__(self, tokens, nvars):
        self.toks = tokens
        self.i = 0
        self.nvars = nvars

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[0] if tok[1] is None else tok[1])
            raise PolynomialSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        out = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.peek()[0] == "*":
            self.take()
            out = out * self.unary()
        return out

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            exp = self.take("num")[1]
            return base ** exp
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return Polynomial.constant(self.nvars, val)
        if kind == "var":
            self.take()
            return Polynomial.variable(self.nvars, val - 1)
        if kind == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        what = "end of input" if kind == "end" else repr(kind if val is None else val)
        raise PolynomialSyntaxError(f"unexpected {what}", pos)


def parse_poly(text: str) -> Polynomial:
    """Parse e.g. ``"x1^2*x2 - 7*x3 + 5"``; variables must be x1..xt without gaps."""
    tokens = _tokenize(text)
    indices = sorted({val for kind, val, _ in tokens if kind == "var"})
    for kind, val, pos in tokens:
        if kind == "var" and val == 0:
            raise PolynomialSyntaxError("variables are numbered from x1", pos)
    if indices and indices != list(range(1, indices[-1] + 1)):
        missing = sorted(set(range(1, indices[-1] + 1)) - set(indices))
        raise ValueError(f"variable indices must be contiguous; missing x{missing[0]}")
    if len(tokens) == 1:
        raise PolynomialSyntaxError("empty polynomial", 0)
    parser = _Parser(tokens, len(indices))
    out = parser.expr()
    parser.take("end")
    return out


def poly_of_counts(p: Polynomial, digits: Sequence[int], K: int) -> Rep:
    """n -> p(|z|_{d_1}, ..., |z|_{d_t}) for z the canonical base-K expansion of n."""
    if len(digits) != p.nvars:
        raise ValueError(f"polynomial has {p.nvars} variables but {len(digits)} digits were given")
    counts = [digit_count_rep(K, d) for d in digits]
    out = zero_rep(K)
    for c, exps in p.monomials():
        term = constant_rep(K, c)
        for rep, e in zip(counts, exps):
            for _ in range(e):
                term = pointwise_mul(term, rep)
        out = add(out, term)
    return out
