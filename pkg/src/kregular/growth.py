"""Growth machinery: Theta(n^sigma log^ell n) witness sequences, joint spectral
radius bounds, power boundedness of a single matrix, and empirical growth
reports.

Nothing here decides whether a general sequence is bounded or grows like a
given function (those questions are undecidable); the reports are evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np
import sympy as sp

from . import _linalg as la
from ._linalg import ONE, ZERO, frac
from .linrep import LinearRepresentation, digit_length, evaluate_range

Rep = LinearRepresentation

DEPTH_GUARD = 10 ** 7
ADVISORY = "evidence only: growth questions for k-regular sequences are undecidable in general"


class DepthGuardError(ValueError):
    pass


# --- Theta(n^sigma log^ell n) sequences ------------------------------------

@dataclass(frozen=True)
class ThetaSpec:
    """k, rho = k**sigma and ell; rho is an exact Fraction unless given as a float."""

    k: int
    rho: object
    ell: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("base must be >= 2")
        if self.ell < 0:
            raise ValueError("ell must be nonnegative")
        rho = self.rho
        if not isinstance(rho, float):
            rho = frac(rho)
        if rho <= 0:
            raise ValueError(f"rho must be positive, got {rho}")
        object.__setattr__(self, "rho", rho)

    @property
    def exact(self) -> bool:
        return not isinstance(self.rho, float)

    @property
    def sigma(self) -> float:
        return math.log(float(self.rho), self.k)


def jordan_block(size: int, lam) -> tuple:
    lam = frac(lam)
    return la.freeze([[lam if i == j else ONE if j == i + 1 else ZERO for j in range(size)]
                      for i in range(size)])


def theta_rep(spec: ThetaSpec) -> Rep:
    """All digit matrices equal the Jordan block J_{ell+1}(rho); v = e_1, w = e_{ell+1}."""
    if not spec.exact:
        raise ValueError("theta_rep needs an exact rational rho; use theta_closed_form for floats")
    size = spec.ell + 1
    j = jordan_block(size, spec.rho)
    v = [ONE] + [ZERO] * spec.ell
    w = [ZERO] * spec.ell + [ONE]
    return Rep._raw(spec.k, v, [j] * spec.k, w)


def theta_closed_form(spec: ThetaSpec, n: int):
    """C(s, ell) * rho**(s - ell) with s the number of base-k digits of n (0 for n = 0)."""
    s = digit_length(n, spec.k)
    c = comb(s, spec.ell)
    if c == 0:
        return ZERO if spec.exact else 0.0
    return c * spec.rho ** (s - spec.ell)


# --- joint spectral radius ---------------------------------------------------

def _as_matrices(matrices) -> list[tuple]:
    mats = [la.freeze([frac(x) for x in row] for row in m) for m in matrices]
    if not mats:
        raise ValueError("need at least one matrix")
    dim = len(mats[0])
    if any(len(m) != dim or any(len(row) != dim for row in m) for m in mats):
        raise ValueError("matrices must be square and of equal dimension")
    return mats


def _root_up(x: Fraction, s: int) -> float:
    """Smallest float y found with y**s >= x (x >= 0)."""
    if x == 0:
        return 0.0
    y = float(x) ** (1.0 / s) if x < 10 ** 300 else math.exp(math.log(x) / s)
    while Fraction(y) ** s < x:
        y = math.nextafter(y, math.inf)
    while y > 0 and Fraction(math.nextafter(y, 0.0)) ** s >= x:
        y = math.nextafter(y, 0.0)
    return y


def _root_down(x: Fraction, s: int) -> float:
    """Largest float y found with y**s <= x (x >= 0)."""
    if x <= 0:
        return 0.0
    y = float(x) ** (1.0 / s) if x < 10 ** 300 else math.exp(math.log(x) / s)
    while y > 0 and Fraction(y) ** s > x:
        y = math.nextafter(y, 0.0)
    while Fraction(math.nextafter(y, math.inf)) ** s <= x:
        y = math.nextafter(y, math.inf)
    return y


def _integer_matrices(mats):
    den = 1
    for m in mats:
        for row in m:
            for x in row:
                den = math.lcm(den, x.denominator)
    ints = [np.array([[int(x * den) for x in row] for row in m], dtype=object) for m in mats]
    return ints, den


def _products(mats, s: int):
    """All (word, integer product) pairs of length s, products scaled by den**s."""
    k = len(mats)
    if k ** s > DEPTH_GUARD:
        raise DepthGuardError(f"{k}^{s} products exceed the enumeration guard {DEPTH_GUARD}")
    ints, den = _integer_matrices(mats)
    dim = len(mats[0])
    level = [((), np.identity(dim, dtype=int).astype(object))]
    for _ in range(s):
        level = [(word + (d,), p.dot(ints[d])) for word, p in level for d in range(k)]
    return level, den


def _inf_norm_int(p) -> int:
    if p.size == 0:
        return 0
    return int(max(sum(abs(x) for x in row) for row in p))


def rho_s(matrices, s: int) -> tuple[Fraction, float]:
    """(max over length-s products of the infinity norm, its s-th root rounded up)."""
    if s < 1:
        raise ValueError("depth must be >= 1")
    mats = _as_matrices(matrices)
    level, den = _products(mats, s)
    norm = Fraction(max(_inf_norm_int(p) for _, p in level), den ** s)
    return norm, _root_up(norm, s)


def _rect_distance(lo: complex, hi: complex) -> tuple[Fraction, Fraction]:
    """Squared min and max distance from 0 over the rectangle with corners lo, hi."""
    a, b = sp.re(lo), sp.re(hi)
    c, d = sp.im(lo), sp.im(hi)
    xs = [Fraction(str(t)) for t in (a, b)]
    ys = [Fraction(str(t)) for t in (c, d)]

    def near(lo_, hi_):
        return ZERO if lo_ <= 0 <= hi_ else min(abs(lo_), abs(hi_))

    dmin = near(*xs) ** 2 + near(*ys) ** 2
    dmax = max(abs(x) for x in xs) ** 2 + max(abs(y) for y in ys) ** 2
    return dmin, dmax


def _root_regions(poly: sp.Poly, eps: Fraction):
    """Squared (min, max) modulus bounds for each root of poly, by interval isolation."""
    reals, cplx = poly.intervals(all=True, eps=sp.Rational(eps.numerator, eps.denominator))
    out = []
    for (a, b), _mult in reals:
        lo, hi = Fraction(str(a)), Fraction(str(b))
        near = ZERO if lo <= 0 <= hi else min(abs(lo), abs(hi))
        out.append((near ** 2, max(abs(lo), abs(hi)) ** 2))
    for (lo, hi), _mult in cplx:
        out.append(_rect_distance(lo, hi))
    return out


def _charpoly(m) -> sp.Poly:
    x = sp.Symbol("x")
    mat = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in row] for row in m])
    return sp.Poly(mat.charpoly(x).as_expr(), x, domain="QQ")


def certified_spectral_radius_lower(m, eps: Fraction = Fraction(1, 10 ** 12)) -> Fraction:
    """A rational lower bound on the squared spectral radius of m, from root isolation."""
    if not m:
        return ZERO
    poly = _charpoly(m)
    if poly.degree() < 1:
        return ZERO
    regions = _root_regions(poly, eps)
    return max((lo for lo, _ in regions), default=ZERO)


@dataclass
class JsrReport:
    matrices: list
    rows: list = field(default_factory=list)  # (s, rho_s norm, rho_s float, lower, upper)
    lower: float = 0.0
    upper: float = math.inf
    norm: str = "infinity (max absolute row sum)"

    def csv(self) -> str:
        lines = ["s,rho_s_float,lower,upper"]
        for s, _, root, lower, upper in self.rows:
            lines.append(f"{s},{root!r},{lower!r},{upper!r}")
        return "\n".join(lines)

    def text(self) -> str:
        out = [f"norm: {self.norm}"]
        for s, _, root, lower, upper in self.rows:
            out.append(f"s={s:3d}  rho_s={root:.10g}  interval=[{lower:.10g}, {upper:.10g}]")
        out.append(f"joint spectral radius in [{self.lower!r}, {self.upper!r}]")
        return "\n".join(out)


def jsr_bounds(matrices, s_max: int, candidates: int = 3) -> JsrReport:
    """Certified bounds lower <= JSR <= upper from all products of length 1..s_max.

    The upper bound is min over s of rho_s.  For the lower bound, the
    products of each length are ranked by floating-point spectral radius and
    the best ``candidates`` are certified exactly (characteristic polynomial
    plus complex root isolation); rho(P)**(1/s) <= JSR for any product P of
    length s.
    """
    mats = _as_matrices(matrices)
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    k = len(mats)
    if sum(k ** s for s in range(1, s_max + 1)) > 2 * DEPTH_GUARD:
        raise DepthGuardError(f"{k}^{s_max} products exceed the enumeration guard {DEPTH_GUARD}")
    report = JsrReport([list(map(list, m)) for m in mats])
    lower, upper = 0.0, math.inf
    dim = len(mats[0])
    for s in range(1, s_max + 1):
        level, den = _products(mats, s)
        norm = Fraction(max(_inf_norm_int(p) for _, p in level), den ** s)
        root = _root_up(norm, s)
        upper = min(upper, root)
        if dim:
            scored, seen = [], set()
            for word, p in level:
                # cyclic rotations of a word have the same spectrum
                key = min(word[i:] + word[:i] for i in range(len(word)))
                if key in seen:
                    continue
                seen.add(key)
                try:
                    radius = float(np.max(np.abs(np.linalg.eigvals(p.astype(float)))))
                except (np.linalg.LinAlgError, OverflowError, ValueError):
                    radius = 0.0
                scored.append((radius, word, p))
            scored.sort(key=lambda t: -t[0])
            for radius, word, p in scored[:candidates]:
                if radius <= 0 or not math.isfinite(radius):
                    continue
                exact = tuple(tuple(Fraction(int(x), den ** s) for x in row) for row in p)
                sq = certified_spectral_radius_lower(exact)
                lower = max(lower, _root_down(sq, 2 * s))
        report.rows.append((s, norm, root, lower, upper))
    report.lower, report.upper = lower, upper
    return report


def load_matrix_set(path) -> list:
    """Read ``{"dim": d, "matrices": [...]}`` with rational strings."""
    import json

    from .linrep import RepresentationError, parse_rational

    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "matrices" not in data:
        raise RepresentationError("matrix-set file needs a 'matrices' field")
    mats = [[[parse_rational(x) for x in row] for row in m] for m in data["matrices"]]
    dim = data.get("dim", len(mats[0]) if mats else 0)
    if any(len(m) != dim or any(len(row) != dim for row in m) for m in mats):
        raise RepresentationError(f"matrices are not all {dim}x{dim}")
    return mats


# --- powers of a single matrix ---------------------------------------------

def minimal_polynomial(m) -> sp.Poly:
    """Minimal polynomial over Q, from the first linear dependency among I, M, M^2, ..."""
    m = _as_matrices([m])[0]
    n = len(m)
    x = sp.Symbol("x")
    span = la.Span(n * n)
    power = la.identity(n)
    for deg in range(n + 1):
        flat = [y for row in power for y in row]
        coords = span.coordinates(flat)
        if coords is not None:
            coeffs = [-c for c in coords] + [ONE]
            expr = sum(sp.Rational(c.numerator, c.denominator) * x ** i
                       for i, c in enumerate(coeffs))
            return sp.Poly(expr, x, domain="QQ")
        span.add(flat)
        power = la.mat_mul(power, m)
    raise AssertionError("Cayley-Hamilton guarantees a dependency by degree n")


def _chebyshev_reduction(q: sp.Poly) -> sp.Poly | None:
    """For palindromic q of degree 2m return h with q(x) = x^m h(x + 1/x)."""
    x = q.gen
    y = sp.Symbol("y")
    coeffs = q.all_coeffs()[::-1]  # ascending
    deg = len(coeffs) - 1
    if deg % 2 or coeffs != coeffs[::-1]:
        return None
    m = deg // 2
    # x^j + x^-j = D_j(y), D_0 = 2, D_1 = y, D_{j+1} = y D_j - D_{j-1}
    d = [sp.Integer(2), y]
    for _ in range(2, m + 1):
        d.append(sp.expand(y * d[-1] - d[-2]))
    h = coeffs[m] + sum(coeffs[m + j] * d[j] for j in range(1, m + 1))
    return sp.Poly(sp.expand(h), y, domain="QQ")


def _classify_factor(q: sp.Poly) -> str:
    """'inside', 'circle' or 'outside' for the roots of an irreducible q.

    'outside' when some root has modulus > 1; 'circle' when every root has
    modulus exactly 1; 'inside' when every root has modulus < 1.
    """
    if q.degree() == 1:
        a, b = q.all_coeffs()
        root = abs(Fraction(str(-b / a)))
        return "inside" if root < 1 else "circle" if root == 1 else "outside"
    monic = q.monic()
    h = _chebyshev_reduction(monic)
    if h is not None:
        # roots come in pairs lam, 1/lam: either all on the circle or one outside
        on = h.count_roots(-2, 2)
        return "circle" if on == h.degree() else "outside"
    # no root of an irreducible non-palindromic polynomial lies on the circle
    eps = Fraction(1, 16)
    while True:
        regions = _root_regions(q, eps)
        if any(lo > 1 for lo, _ in regions):
            return "outside"
        if all(hi < 1 for _, hi in regions):
            return "inside"
        eps /= 16


def power_bounded(m) -> bool:
    """Exact decision whether {M^s : s >= 0} is bounded (Jordan criterion)."""
    mats = _as_matrices([m])
    if not mats[0]:
        return True
    poly = minimal_polynomial(mats[0])
    _, factors = poly.factor_list()
    for q, mult in factors:
        kind = _classify_factor(q)
        if kind == "outside":
            return False
        if kind == "circle" and mult > 1:
            return False
    return True


def power_scan(m, s_max: int) -> list[Fraction]:
    """max |entry| of M^s for s = 0..s_max (exact)."""
    m = _as_matrices([m])[0]
    out = []
    power = la.identity(len(m))
    for _ in range(s_max + 1):
        out.append(max((abs(x) for row in power for x in row), default=ZERO))
        power = la.mat_mul(power, m)
    return out


# --- empirical growth ----------------------------------------------------------

@dataclass
class GrowthReport:
    sigma: float
    ell: int
    n_max: int
    windows: list  # (lo, hi, min ratio, max ratio, max |f|)
    slope: float
    jsr_exponent: float | None
    jsr_interval: tuple | None
    note: str = ADVISORY

    def text(self) -> str:
        lines = [f"[{self.note}]",
                 f"comparison function n^{self.sigma} * log(n)^{self.ell}, n < {self.n_max}"]
        for lo, hi, rmin, rmax, _ in self.windows:
            lines.append(f"  n in [{lo}, {hi}): ratio min {rmin:.6g}  max {rmax:.6g}")
        lines.append(f"log-log slope of window maxima: {self.slope:.4f}")
        if self.jsr_exponent is not None:
            lo, hi = self.jsr_interval
            lines.append(f"JSR of minimized matrices in [{lo:.6g}, {hi:.6g}]; "
                         f"exponent bound log_k(upper) = {self.jsr_exponent:.4f}")
        return "\n".join(lines)


def _jsr_depth(k: int, budget: int = 20000) -> int:
    s, total = 0, 0
    while total + k ** (s + 1) <= budget:
        s += 1
        total += k ** s
    return max(s, 1)


def growth_report(rep: Rep, sigma: float, ell: int, n_max: int,
                  values: Sequence | None = None) -> GrowthReport:
    """Windowed ratios |f(n)| / (n^sigma log^ell n), slope of window maxima, JSR exponent."""
    from .minimize import minimized

    k = rep.k
    if n_max < k * k:
        raise ValueError(f"need n_max >= k^2 = {k * k}")
    vals = list(values) if values is not None else evaluate_range(rep, n_max)
    absvals = np.array([abs(float(x)) for x in vals[:n_max]])
    windows = []
    xs, ys = [], []
    lo = 1
    while lo < n_max:
        hi = min(lo * k, n_max)
        ns = np.arange(max(lo, 2), hi, dtype=float)
        if len(ns):
            comp = ns ** sigma * np.log(ns) ** ell
            ratio = absvals[max(lo, 2):hi] / comp
            wmax = float(np.max(absvals[lo:hi]))
            windows.append((lo, hi, float(np.min(ratio)), float(np.max(ratio)), wmax))
            if wmax > 0 and hi == lo * k:
                xs.append(math.log(lo))
                ys.append(math.log(wmax))
        lo *= k
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) >= 2 else float("nan")
    small = minimized(rep)
    jsr_exp, interval = None, None
    if small.rank:
        rep_jsr = jsr_bounds(small.matrices, _jsr_depth(k), candidates=1)
        interval = (rep_jsr.lower, rep_jsr.upper)
        jsr_exp = math.log(rep_jsr.upper, k) if rep_jsr.upper > 0 else -math.inf
    return GrowthReport(sigma, ell, n_max, windows, slope, jsr_exp, interval)


def matrix_growth_exponent(matrices, n_max: int) -> float:
    """Slope of log max_{window} max-entry |F(n)| against log n over base-k windows."""
    k = len(matrices)
    mats = _as_matrices(matrices)
    r = len(mats[0])
    # entries of F(n) are sequences e_i F(n) e_j; evaluate each one
    best = None
    for i in range(r):
        for j in range(r):
            e_i = [ONE if t == i else ZERO for t in range(r)]
            e_j = [ONE if t == j else ZERO for t in range(r)]
            rep = Rep._raw(k, e_i, mats, e_j)
            vals = np.array([abs(float(x)) for x in evaluate_range(rep, n_max)])
            best = vals if best is None else np.maximum(best, vals)
    return _window_slope(best, k)


def _window_slope(absvals, k: int) -> float:
    xs, ys = [], []
    lo = 1
    n = len(absvals)
    while lo * k <= n:
        wmax = float(np.max(absvals[lo:lo * k]))
        if wmax > 0:
            xs.append(math.log(lo))
            ys.append(math.log(wmax))
        lo *= k
    return float(np.polyfit(xs, ys, 1)[0]) if len(xs) >= 2 else float("nan")


def sequence_growth_exponent(rep: Rep, n_max: int) -> float:
    vals = np.array([abs(float(x)) for x in evaluate_range(rep, n_max)])
    return _window_slope(vals, rep.k)
