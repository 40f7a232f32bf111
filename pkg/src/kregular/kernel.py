"""Conversion between linear representations and systems of k-kernel identities.

A kernel coordinate (e, i) with 0 <= i < k**e names the subsequence
n -> f(k**e n + i).  A system gives linear identities for some coordinates
in terms of others (plus a constant) and a few initial values.  Coordinates
without an identity are generators; the vector V(n) of generator values
satisfies V(k m + d) = A_d V(m), which is a linear representation with
M_d = A_d, w = V(0), and v the expansion of the root coordinate (0, 0).
"""

from __future__ import annotations

import re
import sys
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import _linalg as la
from ._linalg import ONE, ZERO, frac
from .linrep import LinearRepresentation, digits_lsd, normalize_leading_zeros

Coord = tuple  # (e, i)


class IncompleteSystemError(ValueError):
    """Some f(n) cannot be derived from the identities and initial values."""

    def __init__(self, message: str, witness: int | None = None):
        super().__init__(message if witness is None else f"{message} (witness n = {witness})")
        self.witness = witness


class InconsistentSystemError(ValueError):
    pass


@dataclass(frozen=True)
class KernelIdentity:
    """f(k^e n + i) = sum of coeff * f(k^e' n + i') + constant."""

    terms: dict
    constant: Fraction = ZERO


@dataclass
class KernelRelationSystem:
    k: int
    identities: dict = field(default_factory=dict)
    initial: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("base must be >= 2")
        for coord, ident in list(self.identities.items()):
            self._check(coord)
            if not isinstance(ident, KernelIdentity):
                terms, const = ident if isinstance(ident, tuple) else (ident, 0)
                ident = KernelIdentity(dict(terms), frac(const))
                self.identities[coord] = ident
            for c in ident.terms:
                self._check(c)
        self.initial = {int(n): frac(x) for n, x in self.initial.items()}

    def _check(self, coord):
        e, i = coord
        if e < 0 or not 0 <= i < self.k ** e:
            raise ValueError(f"bad kernel coordinate {coord} for base {self.k}")

    def generators(self) -> list:
        return sorted(_closure(self, default_depth(self))[0], key=lambda c: (c[0], c[1]))

    def __str__(self) -> str:
        lines = []
        for coord in sorted(self.identities):
            ident = self.identities[coord]
            lines.append(f"{_coord_text(self.k, coord)} = {_rhs_text(self.k, ident)}")
        for n in sorted(self.initial):
            lines.append(f"f({n}) = {self.initial[n]}")
        return "\n".join(lines)


def _coord_text(k: int, coord) -> str:
    e, i = coord
    arg = "n" if e == 0 else f"{k ** e}n"
    if i:
        arg += f"+{i}"
    return f"f({arg})"


def _rhs_text(k: int, ident: KernelIdentity) -> str:
    parts = []
    for coord in sorted(ident.terms):
        c = ident.terms[coord]
        if not c:
            continue
        mag = abs(c)
        body = ("" if mag == 1 else f"{mag}*") + _coord_text(k, coord)
        parts.append((("-" if c < 0 else "") if not parts else ("- " if c < 0 else "+ ")) + body)
    if ident.constant or not parts:
        c = ident.constant
        parts.append(str(c) if not parts else (f"- {-c}" if c < 0 else f"+ {c}"))
    return " ".join(parts)


def default_depth(system: KernelRelationSystem) -> int:
    coords = set(system.identities)
    for ident in system.identities.values():
        coords.update(ident.terms)
    return 2 * len(coords) + 2


def _resolver(system: KernelRelationSystem):
    memo: dict = {}
    active: set = set()

    def resolve(coord):
        """Coordinate as {generator: coeff} plus constant, substituting identities."""
        if coord in memo:
            return memo[coord]
        ident = system.identities.get(coord)
        if ident is None:
            return {coord: ONE}, ZERO
        if coord in active:
            raise IncompleteSystemError(f"identities for {coord} refer to each other in a cycle")
        active.add(coord)
        out: dict = {}
        const = ident.constant
        for c, a in ident.terms.items():
            terms, k0 = resolve(c)
            const += a * k0
            for g, b in terms.items():
                out[g] = out.get(g, ZERO) + a * b
        active.discard(coord)
        memo[coord] = ({g: x for g, x in out.items() if x}, const)
        return memo[coord]

    return resolve


def _closure(system: KernelRelationSystem, depth: int):
    k = system.k
    resolve = _resolver(system)
    root = resolve((0, 0))
    gens: list = []
    seen: set = set()
    queue: deque = deque()

    def visit(terms):
        for g in sorted(terms):
            if g not in seen:
                if g[0] > depth:
                    raise IncompleteSystemError(
                        f"kernel closure exceeds depth {depth} at coordinate {g}", g[1])
                seen.add(g)
                gens.append(g)
                queue.append(g)

    visit(root[0])
    children = {}
    while queue:
        e, i = queue.popleft()
        for d in range(k):
            child = resolve((e + 1, i + d * k ** e))
            children[((e, i), d)] = child
            visit(child[0])
    return gens, root, children


class _Evaluator:
    """Direct evaluation of f(n) by rewriting with the identities."""

    def __init__(self, system: KernelRelationSystem):
        self.system = system
        self.memo: dict = {}
        self.active: set = set()

    def __call__(self, n: int) -> Fraction:
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 20000))
        try:
            return self.coord((0, 0), n)
        finally:
            sys.setrecursionlimit(limit)

    def coord(self, coord, n: int) -> Fraction:
        k = self.system.k
        e, i = coord
        target = k ** e * n + i
        if target in self.system.initial:
            return self.system.initial[target]
        key = (coord, n)
        if key in self.memo:
            return self.memo[key]
        if key in self.active:
            raise IncompleteSystemError("value is not determined by the system", target)
        self.active.add(key)
        try:
            ident = self.system.identities.get(coord)
            if ident is not None:
                val = ident.constant + sum(
                    (a * self.coord(c, n) for c, a in ident.terms.items() if a), ZERO)
            elif n > 0:
                m, d = divmod(n, k)
                val = self.coord((e + 1, i + d * k ** e), m)
            elif coord != (0, 0):
                val = self.coord((0, 0), target)
            else:
                raise IncompleteSystemError("f(0) is not determined by the system", 0)
        finally:
            self.active.discard(key)
        self.memo[key] = val
        return val


def evaluate_system(system: KernelRelationSystem, n: int) -> Fraction:
    return _Evaluator(system)(n)


def from_kernel_relations(system: KernelRelationSystem, depth: int | None = None,
                          check_upto: int = 64) -> LinearRepresentation:
    """Linear representation of the sequence determined by a complete system."""
    k = system.k
    gens, root, children = _closure(system, default_depth(system) if depth is None else depth)
    use_const = bool(root[1]) or any(c[1] for c in children.values())
    index = {g: j for j, g in enumerate(gens)}
    r = len(gens) + (1 if use_const else 0)

    def row(terms, const):
        out = [ZERO] * r
        for g, a in terms.items():
            out[index[g]] += a
        if use_const:
            out[r - 1] += const
        return out

    mats = []
    for d in range(k):
        m = [row(*children[(g, d)]) for g in gens]
        if use_const:
            m.append([ZERO] * (r - 1) + [ONE])
        mats.append(m)
    ev = _Evaluator(system)
    w = [ev.coord(g, 0) for g in gens] + ([ONE] if use_const else [])
    rep = LinearRepresentation._raw(k, row(*root), mats, w)

    # identities must hold at n = 0 as well, and the initial values must agree
    for n in sorted(set(system.initial) | set(range(check_upto))):
        if rep(n) != ev(n):
            raise InconsistentSystemError(
                f"system is inconsistent: rewriting gives f({n}) = {ev(n)}, "
                f"the kernel recursion gives {rep(n)}")
    return rep


def to_kernel_relations(rep: LinearRepresentation) -> KernelRelationSystem:
    """Kernel identities read off a minimized, zero-robust representation."""
    from .minimize import minimized

    k = rep.k
    base = normalize_leading_zeros(minimized(rep))
    span = la.Span(base.rank)
    gens: list = []
    identities: dict = {}
    queue: deque = deque()

    def consider(coord, vec):
        coords = span.coordinates(vec)
        if coords is not None:
            identities[coord] = KernelIdentity(
                {g: c for g, c in zip(gens, coords) if c}, ZERO)
        else:
            span.add(vec)
            gens.append(coord)
            queue.append((coord, vec))

    consider((0, 0), base.v)
    while queue:
        (e, i), vec = queue.popleft()
        for d in range(k):
            consider((e + 1, i + d * k ** e), la.vec_mat(vec, base.matrices[d]))
    top = max((i for _, i in gens), default=0)
    initial = {n: base(n) for n in range(top + 1)}
    return KernelRelationSystem(k, identities, initial)


# --- text form ---------------------------------------------------------------

_ARG = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?n\s*(?:\+\s*(\d+))?\s*$")
_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*(?:f\(([^)]*)\))?")


def _parse_arg(text: str, k: int):
    m = _ARG.match(text)
    if m:
        a = int(m.group(1) or 1)
        i = int(m.group(2) or 0)
        e = 0
        while k ** e < a:
            e += 1
        if k ** e != a or i >= a:
            raise ValueError(f"f({text}) is not a {k}-kernel coordinate")
        return ("coord", (e, i))
    if text.strip().isdigit():
        return ("value", int(text))
    raise ValueError(f"cannot parse argument {text!r}")


def parse_kernel_relations(text: str, k: int) -> KernelRelationSystem:
    """Parse lines such as ``f(4n+3) = -f(n) + 2f(2n+1)`` and ``f(0) = 0``."""
    identities, initial = {}, {}
    for lineno, line in enumerate(text.replace(";", "\n").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("=") != 1:
            raise ValueError(f"line {lineno}: expected one '='")
        lhs, rhs = (s.strip() for s in line.split("="))
        m = re.fullmatch(r"f\(([^)]*)\)", lhs)
        if not m:
            raise ValueError(f"line {lineno}: left side must be f(...)")
        kind, what = _parse_arg(m.group(1), k)
        terms: dict = {}
        const = ZERO
        pos = 0
        rhs = rhs.strip()
        while pos < len(rhs):
            t = _TERM.match(rhs, pos)
            if not t or t.end() == pos or (t.group(2) is None and t.group(3) is None):
                raise ValueError(f"line {lineno}: cannot parse {rhs[pos:]!r}")
            if pos > 0 and t.group(1) is None:
                raise ValueError(f"line {lineno}: missing operator before {rhs[pos:]!r}")
            sign = -1 if t.group(1) == "-" else 1
            coef = Fraction(t.group(2)) if t.group(2) else ONE
            if t.group(3) is None:
                const += sign * coef
            else:
                k2, c = _parse_arg(t.group(3), k)
                if k2 != "coord" or kind != "coord":
                    raise ValueError(f"line {lineno}: right side must use kernel coordinates")
                terms[c] = terms.get(c, ZERO) + sign * coef
            pos = t.end()
            while pos < len(rhs) and rhs[pos].isspace():
                pos += 1
        if kind == "value":
            if terms:
                raise ValueError(f"line {lineno}: an initial value must be a constant")
            initial[what] = const
        else:
            identities[what] = KernelIdentity(terms, const)
    return KernelRelationSystem(k, identities, initial)


def s2_system() -> KernelRelationSystem:
    """The binary digit-sum identities f(2n)=f(n), f(4n+1)=f(2n+1), f(4n+3)=-f(n)+2f(2n+1),
    with initial values f(0)=0 and f(1)=1."""
    return parse_kernel_relations(
        "f(2n) = f(n); f(4n+1) = f(2n+1); f(4n+3) = -f(n) + 2f(2n+1); f(0) = 0; f(1) = 1", 2)
