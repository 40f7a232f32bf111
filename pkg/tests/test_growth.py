from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_rep
from kregular.digitstats import constant_rep, identity_rep
from kregular.growth import (
    DepthGuardError,
    ThetaSpec,
    certified_spectral_radius_lower,
    growth_report,
    jsr_bounds,
    load_matrix_set,
    matrix_growth_exponent,
    minimal_polynomial,
    power_bounded,
    power_scan,
    rho_s,
    sequence_growth_exponent,
    theta_closed_form,
    theta_rep,
)
from kregular.linrep import evaluate_range, s2_rep
from kregular.minimize import minimized

A = [[1, 1], [0, 1]]
B = [[1, 0], [1, 1]]


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("rho", [Fraction(1, 2), 1, 3])
@pytest.mark.parametrize("ell", [0, 2])
def test_theta_matches_binomial_formula(k, rho, ell):
    spec = ThetaSpec(k, rho, ell)
    vals = evaluate_range(theta_rep(spec), 5000)
    # independent: s = number of digits from Python's integer length in base k
    for n in range(5000):
        s = 0 if n == 0 else len(np.base_repr(n, k))
        assert vals[n] == math.comb(s, ell) * Fraction(rho) ** (s - ell)
    assert theta_closed_form(spec, 4999) == vals[4999]


def test_theta_spec_validation():
    with pytest.raises(ValueError):
        ThetaSpec(2, 0)
    with pytest.raises(ValueError):
        ThetaSpec(2, 2, -1)
    with pytest.raises(ValueError):
        theta_rep(ThetaSpec(2, 1.7))
    assert ThetaSpec(2, 4).sigma == pytest.approx(2)
    assert theta_closed_form(ThetaSpec(2, 2.0, 1), 8) == pytest.approx(4 * 2.0 ** 3)


def test_jsr_classic_pair():
    report = jsr_bounds([A, B], 8)
    assert 1.61 <= report.lower <= (1 + 5 ** 0.5) / 2 + 1e-12
    assert report.upper <= 1.80
    roots = [row[2] for row in report.rows]
    for s, row in enumerate(report.rows, start=1):
        assert row[3] <= row[4]
        if 2 * s <= len(roots):
            assert roots[2 * s - 1] <= roots[s - 1] + 1e-12
    assert report.csv().splitlines()[0] == "s,rho_s_float,lower,upper"
    assert "interval" in report.text()


def test_certified_lower_bound_for_ab():
    ab = sp.Matrix(A) * sp.Matrix(B)
    # independent oracle: largest eigenvalue of AB from sympy's closed form
    top = max(ab.eigenvals(), key=lambda z: float(z))
    sq = certified_spectral_radius_lower(tuple(tuple(Fraction(int(x)) for x in row)
                                               for row in ab.tolist()))
    assert float(sq) <= float(top) ** 2
    assert float(top) ** 2 - float(sq) < 1e-9


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_single_matrix_interval_contains_spectral_radius(entries):
    m = [entries[:2], entries[2:]]
    radius = float(np.max(np.abs(np.linalg.eigvals(np.array(m, dtype=float)))))
    report = jsr_bounds([m], 10)
    assert report.lower <= radius + 1e-9
    assert radius <= report.upper + 1e-9
    assert report.lower <= report.upper


def test_rho_s_is_exact_norm():
    norm, root = rho_s([A, B], 2)
    assert norm == 3
    assert root >= 3 ** 0.5 and root ** 2 >= 3


def test_one_by_one_gap_closes():
    report = jsr_bounds([[[Fraction(1, 3)]]], 40)
    assert report.upper - report.lower < 1e-6
    assert report.lower <= 1 / 3 <= report.upper


def test_depth_guard():
    with pytest.raises(DepthGuardError):
        jsr_bounds([A, B], 30)


def test_load_matrix_set(tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"dim": 2, "matrices": [[["1","1"],["0","1"]], [["1","0"],["1/2","1"]]]}')
    mats = load_matrix_set(path)
    assert mats[1][1][0] == Fraction(1, 2)


@pytest.mark.parametrize("m,bounded", [
    (A, False),
    ([[0, 1], [-1, 0]], True),
    ([[Fraction(1, 2), 3], [0, Fraction(-2, 3)]], True),
    ([[1, 0], [0, 1]], True),
    ([[2]], False),
    ([[0, 0], [0, 0]], True),
    ([[-1, 1], [0, -1]], False),
    ([[0, -1], [1, 1]], True),  # order 6
])
def test_power_bounded_examples(m, bounded):
    assert power_bounded(m) is bounded
    scan = power_scan(m, 200)
    if bounded:
        assert max(scan) < 100
    else:
        assert scan[200] > 100


def test_minimal_polynomial():
    x = sp.Symbol("x")
    assert minimal_polynomial([[1, 0], [0, 1]]).as_expr() == x - 1
    assert minimal_polynomial(A).as_expr() == sp.expand((x - 1) ** 2)


_BLOCKS = [
    ([[Fraction(1, 2)]], True), ([[-1]], True), ([[2]], False),
    ([[0, -1], [1, 0]], True),   # rotation by pi/2
    ([[0, -1], [1, 1]], True),   # rotation by pi/3
    ([[1, 1], [0, 1]], False),   # Jordan block at 1
    ([[Fraction(1, 2), 1], [0, Fraction(1, 2)]], True),
    ([[0, -1], [1, Fraction(6, 5)]], True),  # unit-modulus pair, infinite order
    ([[1, -2], [1, 1]], False),  # modulus sqrt 3
]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_power_bounded_under_similarity(seed):
    rng = random.Random(seed)
    picks = [rng.choice(_BLOCKS) for _ in range(rng.randint(1, 2))]
    blocks = [sp.Matrix(b) for b, _ in picks]
    j = sp.diag(*blocks)
    n = j.shape[0]
    while True:
        p = sp.Matrix(n, n, lambda i, t: rng.randint(-2, 2))
        if p.det() != 0:
            break
    m = p * j * p.inv()
    entries = [[Fraction(int(sp.fraction(x)[0]), int(sp.fraction(x)[1])) for x in row]
               for row in m.tolist()]
    assert power_bounded(entries) is all(b for _, b in picks)


def test_growth_reports():
    ident = growth_report(identity_rep(2), 1, 0, 1 << 14)
    assert abs(ident.slope - 1) < 0.05
    const = growth_report(constant_rep(3, 5), 0, 0, 3 ** 8)
    assert abs(const.slope) < 1e-9
    theta = growth_report(theta_rep(ThetaSpec(2, 2, 0)), 1, 0, 1 << 14)
    for lo, hi, rmin, rmax, _ in theta.windows[1:]:
        assert 1 <= rmin and rmax <= 2
    assert "evidence" in ident.text()


def test_growth_exponents():
    # logarithmic growth: a small positive slope on a log-log scale
    assert 0 < sequence_growth_exponent(s2_rep(), 1 << 14) < 0.4
    assert abs(matrix_growth_exponent([[[1]], [[2]]], 1 << 12) - 1) < 0.1


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("ell", [1, 2, 3])
def test_theta_zero_exactly_below_k_pow_ell_minus_one(k, ell):
    vals = evaluate_range(theta_rep(ThetaSpec(k, 2, ell)), k ** (ell + 2))
    # n has fewer than ell digits exactly when n < k^(ell - 1)
    assert [n for n, x in enumerate(vals) if x == 0] == list(range(k ** (ell - 1)))


def test_norms_are_submultiplicative_exactly():
    report = jsr_bounds([A, B, [[Fraction(1, 2), -1], [2, 0]]], 6)
    norms = {row[0]: row[1] for row in report.rows}
    for s in range(1, 4):
        assert norms[2 * s] <= norms[s] ** 2


@pytest.mark.parametrize("m", [[[2, 1], [1, 2]], [[0, 1], [-1, 0]], [[Fraction(1, 2), 3], [0, -2]],
                               [[3]]])
def test_diagonalizable_lower_bound_is_spectral_radius_at_depth_one(m):
    radius = float(np.max(np.abs(np.linalg.eigvals(np.array(m, dtype=float)))))
    report = jsr_bounds([m], 1)
    assert report.lower == pytest.approx(radius, abs=1e-9)


@pytest.mark.parametrize("m", [[[2]], [[1, -2], [1, 1]], [[Fraction(3, 2), 0], [5, Fraction(1, 3)]]])
def test_unbounded_with_large_eigenvalue_exceeds_a_million(m):
    assert power_bounded(m) is False
    scan = power_scan(m, 200)
    assert max(scan) > 10 ** 6


def test_growth_transfer_between_matrices_and_sequence():
    for seed in range(12):
        rng = random.Random(seed)
        rep = minimized(random_rep(rng, 2, rng.randint(1, 3)))
        if rep.rank == 0:
            continue
        a = matrix_growth_exponent(rep.matrices, 1 << 16)
        b = sequence_growth_exponent(rep, 1 << 16)
        # both are undefined for sequences that vanish on all but one window
        assert math.isnan(a) == math.isnan(b)
        if not math.isnan(a):
            assert abs(a - b) < 0.1


def test_identity_slope_at_2_16():
    assert abs(growth_report(identity_rep(2), 1, 0, 1 << 16).slope - 1) < 0.05
