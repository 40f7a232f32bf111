"""Sequences built from an integer polynomial p whose zeros (or repeated
values, or plateaus) appear exactly when p has a nonnegative integer root.

Each builder works over K = k**r, r minimal with K above the number of
digits the formula inspects, and re-expresses the result in base k with
``base_change_power`` unless ``native=True``.  Digit counts are taken on
z = (n)_K; variable x_i of p reads |z|_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .digitstats import (
    Polynomial,
    affine_n_rep,
    constant_rep,
    digit_count_rep,
    parse_poly,
    poly_of_counts,
)
from .growth import ThetaSpec, theta_rep
from .linrep import LinearRepresentation, check_same_base
from .transforms import (
    add,
    base_change_power,
    partial_sums,
    pointwise_mul,
    scalar_mul,
    shift,
    shuffle,
    sub,
)

Rep = LinearRepresentation

KINDS = ("omega-n", "omega-sigma", "oh-product", "preimage", "image-nat", "image-int",
         "value-twice", "alpha-power", "palindrome")

# strict lower bound on K, as an offset from the number of variables t
_K_OFFSET = {"omega-n": 1, "omega-sigma": 1, "preimage": 2, "image-nat": 0,
             "image-int": 0, "value-twice": 0}


def choose_base(k: int, bound: int) -> tuple[int, int]:
    """(K, r) with K = k**r, r >= 1 minimal such that K > bound."""
    if k < 2:
        raise ValueError("base must be >= 2")
    r, K = 1, k
    while K <= bound:
        r += 1
        K *= k
    return K, r


def _poly(p) -> Polynomial:
    return parse_poly(p) if isinstance(p, str) else p


def _p_counts(p: Polynomial, K: int) -> Rep:
    return poly_of_counts(p, list(range(1, p.nvars + 1)), K)


def _square(a: Rep) -> Rep:
    return pointwise_mul(a, a)


def _count_plus_one(K: int, d: int) -> Rep:
    return add(digit_count_rep(K, d), constant_rep(K, 1))


def _finish(rep: Rep, k: int, native: bool) -> Rep:
    return rep if native else base_change_power(rep, k)


def gadget_omega_n(p, k: int, native: bool = False) -> Rep:
    """(n + 1) * p(|z|_1..|z|_t)^2 * (|z|_{t+1} + 1)."""
    p = _poly(p)
    t = p.nvars
    K, _ = choose_base(k, t + 1)
    core = pointwise_mul(_square(_p_counts(p, K)), _count_plus_one(K, t + 1))
    return _finish(pointwise_mul(affine_n_rep(K, 1, 1), core), k, native)


def gadget_omega_sigma(p, k: int, theta: ThetaSpec) -> Rep:
    """(h(n) + 1) * p(|z|_1..|z|_t)^2 * (|z|_{t+1} + 1) with h the Theta-sequence of ``theta``."""
    p = _poly(p)
    if theta.k != k:
        raise ValueError(f"theta sequence has base {theta.k}, expected {k}")
    t = p.nvars
    K, _ = choose_base(k, t + 1)
    core = base_change_power(
        pointwise_mul(_square(_p_counts(p, K)), _count_plus_one(K, t + 1)), k)
    h1 = add(theta_rep(theta), constant_rep(k, 1))
    return pointwise_mul(h1, core)


def gadget_oh_product(g: Rep, theta: ThetaSpec) -> Rep:
    """g(n) * h(n)."""
    h = theta_rep(theta)
    check_same_base(g, h)
    return pointwise_mul(g, h)


def gadget_preimage(p, k: int, native: bool = False) -> Rep:
    """p(|z|_1..|z|_t)^2 + (|z|_{t+1} - |z|_{t+2})^2."""
    p = _poly(p)
    t = p.nvars
    K, _ = choose_base(k, t + 2)
    diff = sub(digit_count_rep(K, t + 1), digit_count_rep(K, t + 2))
    return _finish(add(_square(_p_counts(p, K)), _square(diff)), k, native)


def gadget_image_nat(p, k: int, native: bool = False) -> Rep:
    """f(2i) = i + 1 and f(2i + 1) = p(counts of (i)_K)^2."""
    p = _poly(p)
    K, _ = choose_base(k, p.nvars)
    return _finish(shuffle([affine_n_rep(K, 1, 1), _square(_p_counts(p, K))]), k, native)


def gadget_image_int(p, k: int, native: bool = False) -> Rep:
    """f(3i) = i + 1, f(3i + 1) = -i - 1, f(3i + 2) = p(counts of (i)_K)."""
    p = _poly(p)
    K, _ = choose_base(k, p.nvars)
    parts = [affine_n_rep(K, 1, 1), affine_n_rep(K, -1, -1), _p_counts(p, K)]
    return _finish(shuffle(parts), k, native)


def gadget_value_twice(p, k: int, native: bool = False) -> Rep:
    """f(n) = sum over m < n of p(counts of (m)_K)^2."""
    p = _poly(p)
    K, _ = choose_base(k, p.nvars)
    return _finish(partial_sums(_square(_p_counts(p, K))), k, native)


def gadget_alpha_power(f: Rep, alpha: int) -> Rep:
    """g(0) = 1, g(n) = g(n-1) + f(n-alpha+1)^2 ... f(n-1)^2, reading f(-i) = 1.

    Equivalently g(n) = 1 + sum over m < n of prod_{i < alpha-1} f(m - i)^2.
    """
    if alpha < 2:
        raise ValueError(f"alpha must be >= 2, got {alpha}")
    q = None
    for i in range(alpha - 1):
        term = _square(shift(f, i, fill=1))
        q = term if q is None else pointwise_mul(q, term)
    return add(constant_rep(f.k, 1), partial_sums(q))


def gadget_palindrome(f: Rep) -> Rep:
    """The alpha = 2 construction, which serves for palindromes as well."""
    return gadget_alpha_power(f, 2)


@dataclass(frozen=True)
class GadgetSpec:
    kind: str
    k: int
    poly: object = None
    rep: Rep | None = None
    theta: ThetaSpec | None = None
    alpha: int | None = None
    native: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gadget kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if isinstance(self.poly, str):
            object.__setattr__(self, "poly", parse_poly(self.poly))

    @property
    def t(self) -> int | None:
        return None if self.poly is None else self.poly.nvars

    def base(self) -> tuple[int, int]:
        """(K, r) used for the digit counts, or (k, 1) for kinds without a polynomial."""
        if self.kind in _K_OFFSET:
            return choose_base(self.k, self.t + _K_OFFSET[self.kind])
        return self.k, 1


@dataclass(frozen=True)
class GadgetResult:
    rep: Rep
    provenance: dict = field(default_factory=dict)


def build_gadget(spec: GadgetSpec) -> GadgetResult:
    kind, k = spec.kind, spec.k
    needs_poly = kind in _K_OFFSET
    if needs_poly and spec.poly is None:
        raise ValueError(f"gadget {kind!r} needs a polynomial")
    if kind in ("oh-product", "alpha-power", "palindrome") and spec.rep is None:
        raise ValueError(f"gadget {kind!r} needs an input representation")
    if kind in ("omega-sigma", "oh-product") and spec.theta is None:
        raise ValueError(f"gadget {kind!r} needs rho and ell")
    if spec.native and kind not in ("omega-n", "preimage", "image-nat", "image-int",
                                    "value-twice"):
        raise ValueError(f"gadget {kind!r} has no native-base variant")

    if kind == "omega-n":
        rep = gadget_omega_n(spec.poly, k, spec.native)
    elif kind == "omega-sigma":
        rep = gadget_omega_sigma(spec.poly, k, spec.theta)
    elif kind == "oh-product":
        rep = gadget_oh_product(spec.rep, spec.theta)
    elif kind == "preimage":
        rep = gadget_preimage(spec.poly, k, spec.native)
    elif kind == "image-nat":
        rep = gadget_image_nat(spec.poly, k, spec.native)
    elif kind == "image-int":
        rep = gadget_image_int(spec.poly, k, spec.native)
    elif kind == "value-twice":
        rep = gadget_value_twice(spec.poly, k, spec.native)
    elif kind == "alpha-power":
        if spec.alpha is None:
            raise ValueError("alpha-power gadget needs alpha")
        rep = gadget_alpha_power(spec.rep, spec.alpha)
    else:
        rep = gadget_palindrome(spec.rep)

    K, r = spec.base()
    prov = {"kind": kind, "k": k, "K": K, "r": r, "rep_base": rep.k}
    if spec.poly is not None:
        prov["p"] = str(spec.poly)
        prov["t"] = spec.t
    if spec.theta is not None:
        prov["rho"] = str(spec.theta.rho)
        prov["ell"] = spec.theta.ell
    if kind == "alpha-power":
        prov["alpha"] = spec.alpha
    return GadgetResult(rep, prov)
