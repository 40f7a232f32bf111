from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_values, popcount, random_rep
from kregular import linrep
from kregular.linrep import (
    LinearRepresentation,
    RepresentationError,
    deserialize,
    digits_lsd,
    evaluate,
    evaluate_range,
    evaluate_word,
    from_digits,
    is_zero_robust,
    matrix_seq,
    normalize_leading_zeros,
    override_zero,
    reverse,
    s2_rep,
    serialize,
    zero_rep,
)

S2_TEXT = ('{"k":2,"rank":2,"v":["0","1"],"matrices":[[["1","0"],["0","1"]],'
           '[["0","-1"],["1","2"]]],"w":["1","0"]}')


@st.composite
def reps(draw, max_rank=3, max_k=4):
    k = draw(st.integers(2, max_k))
    r = draw(st.integers(0, max_rank))
    ent = st.integers(-2, 2)
    v = draw(st.lists(ent, min_size=r, max_size=r))
    w = draw(st.lists(st.fractions(-2, 2, max_denominator=3), min_size=r, max_size=r))
    mats = draw(st.lists(st.lists(st.lists(ent, min_size=r, max_size=r), min_size=r, max_size=r),
                         min_size=k, max_size=k))
    return LinearRepresentation(k, v, mats, w)


def test_digits_examples():
    assert digits_lsd(0, 2) == []
    assert digits_lsd(6, 2) == [0, 1, 1]
    assert digits_lsd(9, 4) == [1, 2]
    with pytest.raises(ValueError):
        digits_lsd(3, 1)


@given(st.integers(0, 10 ** 12), st.integers(2, 17))
def test_digits_roundtrip_and_length(n, k):
    d = digits_lsd(n, k)
    assert from_digits(d, k) == n
    assert not d or d[-1] != 0
    if n:
        # |(n)_k| = floor(log_k n) + 1, computed without floating point
        assert k ** (len(d) - 1) <= n < k ** len(d)


def test_s2_examples():
    s2 = s2_rep()
    assert evaluate(s2, 0) == 0
    assert evaluate(s2, 3) == 2
    assert evaluate(s2, 6) == 2
    assert evaluate_word(s2, []) == 0
    assert evaluate_word(s2, [1, 1]) == 2
    assert evaluate_word(s2, [1, 0]) == 1


def test_s2_counts_ones_up_to_2_16():
    vals = evaluate_range(s2_rep(), 1 << 16)
    assert vals == [popcount(n) for n in range(1 << 16)]


def test_evaluate_word_rejects_bad_digit():
    with pytest.raises(ValueError):
        evaluate_word(s2_rep(), [2])


def test_matrix_seq():
    s2 = s2_rep()
    assert matrix_seq([[[1]], [[2]]], 0) == ((1,),)
    assert matrix_seq(s2.matrices, 2) == ((0, -1), (1, 2))
    assert matrix_seq([[[1]], [[2]]], 6) == ((4,),)
    with pytest.raises(ValueError):
        matrix_seq([[[0]]], 1)
    with pytest.raises(ValueError):
        matrix_seq([[[1]], [[1, 0], [0, 1]]], 1)


def test_normalize_examples():
    s2 = s2_rep()
    assert normalize_leading_zeros(s2) is s2
    rep = LinearRepresentation(2, [1], [[[2]], [[1]]], [1])
    norm = normalize_leading_zeros(rep)
    assert norm.rank == 2
    assert is_zero_robust(norm)
    assert evaluate_range(norm, 10 ** 4) == evaluate_range(rep, 10 ** 4)
    z = zero_rep(3)
    assert normalize_leading_zeros(z) is z


@settings(max_examples=60, deadline=None)
@given(reps())
def test_normalize_preserves_values(rep):
    norm = normalize_leading_zeros(rep)
    assert norm.rank <= rep.rank + 1
    assert linrep.la.mat_vec(norm.matrices[0], norm.w) == norm.w
    assert evaluate_range(norm, 500) == evaluate_range(rep, 500)
    # padding with zeros no longer matters
    for n in range(1, 40):
        d = digits_lsd(n, rep.k)
        assert evaluate_word(norm, d + [0, 0]) == evaluate(rep, n)


@settings(max_examples=40, deadline=None)
@given(reps(), st.fractions(-3, 3, max_denominator=4))
def test_override_zero(rep, value):
    out = override_zero(rep, value)
    assert out(0) == value
    vals = evaluate_range(rep, 200)
    assert evaluate_range(out, 200)[1:] == vals[1:]


@settings(max_examples=60, deadline=None)
@given(reps())
def test_evaluate_equals_word_evaluation(rep):
    vals = evaluate_range(rep, 300)
    assert vals == brute_values(rep, 300)
    for n in (0, 1, 7, 123, 299):
        assert vals[n] == evaluate_word(rep, digits_lsd(n, rep.k))


def test_evaluate_range_start_and_large_values():
    rep = LinearRepresentation(2, [1], [[[3]], [[Fraction(5, 7)]]], [Fraction(1, 3)])
    vals = evaluate_range(rep, 5000)
    assert vals == brute_values(rep, 5000)
    assert evaluate_range(rep, 5000, 4000) == vals[4000:]
    with pytest.raises(ValueError):
        evaluate_range(rep, 3, 5)


def test_evaluate_range_huge_entries_uses_exact_path():
    rep = LinearRepresentation(2, [1], [[[10 ** 40]], [[-(10 ** 41)]]], [1])
    vals = evaluate_range(rep, 300)
    assert vals == brute_values(rep, 300)


def test_reverse_reads_backwards():
    rng = random.Random(3)
    rep = random_rep(rng, 3, 3)
    rev = reverse(rep)
    for word in ([1, 2], [0, 1, 1], [2, 2, 0, 1]):
        assert evaluate_word(rev, word[::-1]) == evaluate_word(rep, word)


def test_serialize_roundtrip():
    s2 = s2_rep()
    assert deserialize(serialize(s2)) == s2
    assert deserialize(S2_TEXT) == s2
    with_prov = serialize(s2, {"kind": "demo"})
    assert json.loads(with_prov)["provenance"] == {"kind": "demo"}
    assert deserialize(with_prov) == s2


@settings(max_examples=50, deadline=None)
@given(reps())
def test_serialize_roundtrip_random(rep):
    back = deserialize(serialize(rep))
    assert back == rep
    assert back.k == rep.k and back.v == rep.v and back.matrices == rep.matrices


@pytest.mark.parametrize("text", [
    # three matrices for k = 2
    '{"k":2,"rank":1,"v":["1"],"matrices":[[["1"]],[["1"]],[["1"]]],"w":["1"]}',
    '{"k":2,"rank":1,"v":["1"],"matrices":[[["1/0"]],[["1"]]],"w":["1"]}',
    '{"k":2,"rank":1,"v":["1"],"matrices":[[["0.5"]],[["1"]]],"w":["1"]}',
    '{"k":2,"rank":2,"v":["1"],"matrices":[[["1"]],[["1"]]],"w":["1"]}',
    '{"k":2,"rank":1,"v":["1"],"matrices":[[["1","2"]],[["1"]]],"w":["1"]}',
    '{"k":1,"rank":0,"v":[],"matrices":[[]],"w":[]}',
    '{"k":2,"rank":1,"v":["1"],"matrices":[[["1"]],[["1"]]]}',
    '{"k":2,"rank":1,"v":["1"],"matrices":[[["1"]],[["1"]]],"w":["1"],"extra":1}',
    '{"k":2,"rank":1,"v":[1.5],"matrices":[[["1"]],[["1"]]],"w":["1"]}',
    'not json',
])
def test_deserialize_rejects(text):
    with pytest.raises(RepresentationError):
        deserialize(text)


def test_constructor_validation():
    with pytest.raises(RepresentationError):
        LinearRepresentation(2, [1, 2], [[[1]], [[1]]], [1])
    with pytest.raises(RepresentationError):
        LinearRepresentation(3, [1], [[[1]], [[1]]], [1])


def test_save_and_load(tmp_path):
    path = tmp_path / "s2.json"
    linrep.save(s2_rep(), path)
    assert linrep.load(path) == s2_rep()
