from __future__ import annotations

import json
from fractions import Fraction

import pytest

from helpers import popcount
from kregular import linrep
from kregular.cli import main
from kregular.linrep import LinearRepresentation, evaluate_range, s2_rep
from kregular.transforms import add, scalar_mul


@pytest.fixture
def files(tmp_path):
    s2 = s2_rep()
    paths = {
        "s2": tmp_path / "s2.json",
        # rank 4, same sequence: s2/2 + s2/2
        "s2b": tmp_path / "s2b.json",
        "bad": tmp_path / "bad.json",
        "ident": tmp_path / "ident.json",
    }
    linrep.save(s2, paths["s2"])
    half = scalar_mul(Fraction(1, 2), s2)
    linrep.save(add(half, half), paths["s2b"])
    paths["bad"].write_text('{"k": 2, "rank": 1, "v": ["1"], "matrices": [[["1"]]], "w": ["1"]}')
    linrep.save(LinearRepresentation(2, [0, 1], [[[1, 0], [0, 2]], [[1, 0], [1, 2]]], [1, 0]),
                paths["ident"])
    return {k: str(v) for k, v in paths.items()}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval(files, capsys):
    code, out, _ = run(capsys, "eval", "--rep", files["s2"], "--limit", "8")
    assert code == 0
    assert out.splitlines() == [f"{n}\t{popcount(n)}" for n in range(8)]
    code, out, _ = run(capsys, "eval", files["s2"], "--start", "5", "--limit", "7", "--csv")
    assert out.splitlines() == ["n,value", "5,2", "6,2"]


def test_minimize_reports_ranks(files, capsys, tmp_path):
    out_path = tmp_path / "min.json"
    code, out, _ = run(capsys, "minimize", "--rep", files["s2b"], "--out", str(out_path))
    assert code == 0 and out.strip() == "rank 4 -> 2"
    assert evaluate_range(linrep.load(out_path), 256) == [popcount(n) for n in range(256)]


def test_equal_and_not_equal(files, capsys):
    code, out, _ = run(capsys, "equal", files["s2"], files["s2b"])
    assert code == 0 and out.strip() == "equal"
    code, out, _ = run(capsys, "equal", "--rep", files["s2"], "--rep2", files["ident"])
    assert code == 1 and "first difference at n = 2" in out


def test_zeros(files, capsys):
    code, out, _ = run(capsys, "zeros", files["s2"], "--limit", "100")
    assert code == 0 and "1 zero(s)" in out and "bounded evidence" in out
    # --start belongs to eval only
    code, _, _ = run(capsys, "zeros", files["s2"], "--start", "1")
    assert code == 2


def test_zeros_none_found_exits_one(files, capsys, tmp_path):
    path = tmp_path / "plus1.json"
    code, _, _ = run(capsys, "op", "affine", files["ident"], "--a", "1", "--b", "1",
                     "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "zeros", "--rep", str(path), "--limit", "50")
    assert code == 1 and "0 zero(s)" in out


def test_preimage(files, capsys, tmp_path):
    code, out, _ = run(capsys, "preimage", files["s2"], "--target", "2", "--maxlen", "3")
    assert code == 0
    assert out.splitlines()[1:] == ["3 word(s) of length <= 3 map to 2", "11", "101", "110"]
    gadget = tmp_path / "g.json"
    run(capsys, "gadget", "--kind", "preimage", "--poly", "x1", "--base", "2", "--native",
        "--out", str(gadget))
    code, out, _ = run(capsys, "preimage", str(gadget), "--maxlen", "2", "--csv")
    assert out.splitlines() == ["word", "", "23", "32"]


def test_image(files, capsys):
    code, out, _ = run(capsys, "image", files["s2"], "--limit", "64", "--bound", "3")
    assert code == 0 and "missing: -3 -2 -1" in out
    code, out, _ = run(capsys, "image", files["s2"], files["ident"], "--limit", "16", "--bound", "5")
    assert "only in second image: 5" in out


def test_powers_and_palindromes(files, capsys):
    code, out, _ = run(capsys, "powers", files["s2"], "--limit", "32", "--csv", "--max-hits", "3")
    assert code == 0 and out.splitlines()[0] == "start,period" and len(out.splitlines()) == 4
    code, out, _ = run(capsys, "palindromes", files["s2"], "--limit", "16")
    assert code == 0 and "fast path: nontrivial palindrome at i = 1" in out


def test_op_chain(files, capsys, tmp_path):
    out = tmp_path / "sq.json"
    code, _, _ = run(capsys, "op", "mul", files["s2"], files["s2"], "--out", str(out), "--minimize")
    assert code == 0
    assert evaluate_range(linrep.load(out), 100) == [popcount(n) ** 2 for n in range(100)]
    code, text, _ = run(capsys, "op", "shuffle", files["s2"], files["ident"])
    rep = linrep.deserialize(text)
    assert [rep(n) for n in range(6)] == [0, 0, 1, 1, 1, 2]
    code, text, _ = run(capsys, "op", "shift", files["s2"], "--by", "2", "--fill", "7")
    assert evaluate_range(linrep.deserialize(text), 5) == [7, 7, 0, 1, 1]
    code, text, _ = run(capsys, "op", "psum", files["s2"])
    assert evaluate_range(linrep.deserialize(text), 5) == [0, 0, 1, 2, 4]
    code, _, err = run(capsys, "op", "basechange", files["s2"])
    assert code == 2 and "--base" in err


def test_gadget_provenance(capsys):
    code, text, err = run(capsys, "gadget", "--kind", "omega-n", "--poly", "x1 - 2", "--base", "2")
    assert code == 0
    data = json.loads(text)
    assert data["provenance"]["K"] == 4 and data["k"] == 2
    assert "rank" in err


def test_growth_and_jsr(capsys, tmp_path):
    code, out, _ = run(capsys, "growth", "--base", "2", "--rho", "2", "--ell", "1",
                       "--limit", "4096")
    assert code == 0 and "evidence only" in out
    mats = tmp_path / "m.json"
    mats.write_text('{"dim": 2, "matrices": [[["1","1"],["0","1"]], [["1","0"],["1","1"]]]}')
    code, out, _ = run(capsys, "jsr", "--matrices", str(mats), "--depth", "8", "--csv")
    rows = out.splitlines()
    assert rows[0] == "s,rho_s_float,lower,upper" and len(rows) == 9
    _, _, lower, upper = rows[-1].split(",")
    assert float(lower) >= 1.61 and float(upper) <= 1.80


@pytest.mark.parametrize("argv", [
    ["eval", "--rep", "BAD"],
    ["eval", "--rep", "MISSING"],
    ["eval"],
    ["gadget", "--kind", "omega-n", "--poly", "x1 +", "--base", "2"],
    ["gadget", "--kind", "alpha-power", "--base", "2", "--alpha", "2"],
    ["jsr"],
    ["nonsense"],
])
def test_errors_exit_two(files, capsys, argv):
    argv = [files["bad"] if a == "BAD" else a for a in argv]
    argv = ["/nonexistent/x.json" if a == "MISSING" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


@pytest.mark.parametrize("argv", [
    ["palindromes", "S2", "--limit", "200"],
    ["powers", "S2", "--limit", "200", "--alpha", "3"],
    ["op", "conv", "S2", "S2"],
    ["gadget", "--kind", "value-twice", "--poly", "x1 - 1", "--base", "2"],
])
def test_reruns_are_identical(files, capsys, argv):
    argv = [files["s2"] if a == "S2" else a for a in argv]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0
