"""Command line interface: ``kregular <command> ...``.

Exit codes: 0 success, 1 for a negative answer (``equal`` on different
sequences, ``zeros`` finding none in range), 2 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import explore, growth, linrep, transforms
from .digitstats import PolynomialSyntaxError
from .gadgets import KINDS, GadgetSpec, build_gadget
from .growth import ThetaSpec
from .minimize import equal, find_difference, minimize, minimized

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _load(path, what="--rep"):
    if path is None:
        raise CliError(f"missing {what} FILE")
    try:
        return linrep.load(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _rep_args(args, count=1):
    """Representation files from --rep/--rep2 or positional arguments."""
    paths = [p for p in (args.rep, getattr(args, "rep2", None)) if p] + list(
        getattr(args, "files", []) or [])
    if len(paths) < count:
        raise CliError(f"need {count} representation file(s), got {len(paths)}")
    return [_load(p) for p in paths]


def _emit(rep, args, provenance=None):
    text = linrep.serialize(rep, provenance)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _banner(args):
    print(f"# {explore.BANNER}", file=sys.stderr if args.csv else sys.stdout)


def _limit(args):
    if args.limit < 0:
        raise CliError("--limit must be nonnegative")
    return args.limit


def cmd_eval(args):
    rep = _rep_args(args)[0]
    start, stop = args.start, _limit(args)
    if stop < start:
        raise CliError(f"empty range: start {start} > limit {stop}")
    vals = explore.scan(rep, stop, start)
    if args.csv:
        print("n,value")
    for n, x in enumerate(vals, start):
        print(f"{n},{x}" if args.csv else f"{n}\t{x}")
    return EXIT_OK


def cmd_zeros(args):
    rep = _rep_args(args)[0]
    _banner(args)
    zeros = explore.find_zeros(explore.scan(rep, _limit(args)))
    if args.csv:
        print("n")
        for n in zeros:
            print(n)
    else:
        print(f"{len(zeros)} zero(s) below {args.limit}")
        if zeros:
            print(" ".join(map(str, zeros)))
    return EXIT_OK if zeros else EXIT_NO


def cmd_preimage(args):
    rep = _rep_args(args)[0]
    target = linrep.parse_rational(args.target)
    _banner(args)
    if rep.k ** args.maxlen * max(rep.rank, 1) > explore.MEMORY_BUDGET:
        raise CliError(f"{rep.k}^{args.maxlen} words exceed the memory guard")
    words = explore.preimage_words(rep, target, args.maxlen)
    if args.csv:
        print("word")
    else:
        print(f"{len(words)} word(s) of length <= {args.maxlen} map to {target}")
    for w in words:
        print(w if w else ('""' if not args.csv else ""))
    return EXIT_OK


def _show_ints(xs):
    return " ".join(map(str, xs)) if xs else "(none)"


def cmd_image(args):
    reps = _rep_args(args)
    n = _limit(args)
    _banner(args)
    vals = explore.scan(reps[0], n)
    other = explore.scan(reps[1], n) if len(reps) > 1 else None
    report = explore.image_report(vals, args.bound, other)
    window = f"[-{args.bound}, {args.bound}]"
    if args.csv:
        print("value,present")
        for m in range(-args.bound, args.bound + 1):
            print(f"{m},{int(m in set(report.present))}")
    else:
        print(f"values f(n), n < {n}, inside {window}: {len(report.present)} present, "
              f"{len(report.missing)} missing")
        print(f"missing: {_show_ints(report.missing)}")
        if other is not None:
            print(f"only in first image: {_show_ints(report.only_first)}")
            print(f"only in second image: {_show_ints(report.only_second)}")
    return EXIT_OK


def cmd_powers(args):
    rep = _rep_args(args)[0]
    _banner(args)
    vals = explore.scan(rep, _limit(args))
    hits, total = explore.find_powers(vals, args.alpha, args.max_hits)
    bad = [h for h in hits if not explore.is_power(vals, h.start, h.period, args.alpha)]
    if bad:
        raise CliError(f"internal error: re-check rejected hit {bad[0]}")
    if args.csv:
        print("start,period")
    else:
        print(f"{total} {args.alpha}-power(s) in f(0..{args.limit - 1}); "
              f"showing {len(hits)} (re-checked)")
    for h in hits:
        print(f"{h.start},{h.period}" if args.csv else f"start {h.start} period {h.period}")
    return EXIT_OK


def cmd_palindromes(args):
    rep = _rep_args(args)[0]
    _banner(args)
    vals = explore.scan(rep, _limit(args))
    witness = explore.nontrivial_palindrome_witness(vals)
    hits, total = explore.find_palindromes(vals, args.minlen, args.max_hits)
    if args.csv:
        print("start,length")
    else:
        if witness is None:
            print("fast path: no i with f(i) = f(i+1) or f(i) = f(i+2)")
        else:
            print(f"fast path: nontrivial palindrome at i = {witness}")
        print(f"{total} palindrome(s) of length >= {args.minlen}; showing {len(hits)}")
    for h in hits:
        print(f"{h.start},{h.length}" if args.csv else f"start {h.start} length {h.length}")
    return EXIT_OK


def cmd_minimize(args):
    rep = _rep_args(args)[0]
    res = minimize(rep)
    print(f"rank {rep.rank} -> {res.rank}")
    if args.out:
        linrep.save(res.minimized, args.out)
    return EXIT_OK


def cmd_equal(args):
    a, b = _rep_args(args, 2)[:2]
    if equal(a, b):
        print("equal")
        return EXIT_OK
    n = find_difference(a, b, limit=min(args.limit, 1 << 16))
    suffix = f" (first difference at n = {n})" if n is not None else ""
    print(f"not equal{suffix}")
    return EXIT_NO


def cmd_op(args):
    name = args.operation
    if name in ("add", "mul", "conv"):
        a, b = _rep_args(args, 2)[:2]
        fn = {"add": transforms.add, "mul": transforms.pointwise_mul,
              "conv": transforms.convolve}[name]
        out = fn(a, b)
    elif name == "shuffle":
        out = transforms.shuffle(_rep_args(args, 2))
    elif name == "shift":
        out = transforms.shift(_rep_args(args)[0], args.by, linrep.parse_rational(args.fill))
    elif name == "affine":
        out = transforms.affine_index(_rep_args(args)[0], args.a, args.b)
    elif name == "psum":
        out = transforms.partial_sums(_rep_args(args)[0])
    else:
        if args.base is None:
            raise CliError("basechange needs --base k")
        out = transforms.base_change_power(_rep_args(args)[0], args.base)
    if args.minimize:
        out = minimized(out)
    _emit(out, args)
    return EXIT_OK


def _theta(args, k):
    if args.rho is None:
        return None
    return ThetaSpec(k, linrep.parse_rational(args.rho), args.ell)


def cmd_gadget(args):
    if args.base is None:
        raise CliError("gadget needs --base k")
    rep = _load(args.rep) if args.rep else None
    spec = GadgetSpec(args.kind, args.base, poly=args.poly, rep=rep,
                      theta=_theta(args, args.base), alpha=args.alpha, native=args.native)
    result = build_gadget(spec)
    out = minimized(result.rep) if args.minimize else result.rep
    prov = dict(result.provenance)
    info = ", ".join(f"{k}={v}" for k, v in prov.items())
    print(f"# gadget {info}; rank {out.rank}", file=sys.stderr)
    _emit(out, args, prov)
    return EXIT_OK


def cmd_growth(args):
    sigma = float(Fraction(args.sigma)) if args.sigma is not None else 0.0
    if args.rep:
        rep = _load(args.rep)
    elif args.rho is not None and args.base is not None:
        theta = _theta(args, args.base)
        rep = growth.theta_rep(theta)
        if args.sigma is None:
            sigma = theta.sigma
    else:
        raise CliError("growth needs --rep FILE, or --base k --rho p/q [--ell L]")
    explore.check_budget(rep, args.limit)
    report = growth.growth_report(rep, sigma, args.ell, _limit(args))
    if args.csv:
        print("lo,hi,min_ratio_float,max_ratio_float")
        for lo, hi, rmin, rmax, _ in report.windows:
            print(f"{lo},{hi},{rmin!r},{rmax!r}")
    else:
        print(report.text())
    return EXIT_OK


def cmd_jsr(args):
    if args.matrices:
        mats = growth.load_matrix_set(args.matrices)
    elif args.rep:
        mats = [list(map(list, m)) for m in _load(args.rep).matrices]
    else:
        raise CliError("jsr needs --matrices FILE or --rep FILE")
    report = growth.jsr_bounds(mats, args.depth)
    print(report.csv() if args.csv else report.text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kregular", description="Compute with k-regular sequences given by linear representations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, files=True):
        p.add_argument("--rep", metavar="FILE", help="representation file")
        p.add_argument("--out", metavar="FILE", help="write the resulting representation here")
        p.add_argument("--csv", action="store_true", help="machine-readable output")
        p.add_argument("--limit", type=int, default=explore.DEFAULT_LIMIT,
                       help="scan n < LIMIT (default %(default)s)")
        if files:
            p.add_argument("files", nargs="*", metavar="FILE", help="representation files")
        return p

    p = common(sub.add_parser("eval", help="print f(n) for start <= n < limit"))
    p.add_argument("--start", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    common(sub.add_parser("zeros", help="list n < limit with f(n) = 0")).set_defaults(func=cmd_zeros)

    p = common(sub.add_parser("preimage", help="words of length <= maxlen mapping to target"))
    p.add_argument("--target", default="0")
    p.add_argument("--maxlen", type=int, default=8)
    p.set_defaults(func=cmd_preimage)

    p = common(sub.add_parser("image", help="coverage of [-bound, bound] by f(n), n < limit"))
    p.add_argument("--rep2", metavar="FILE")
    p.add_argument("--bound", type=int, default=100)
    p.set_defaults(func=cmd_image)

    p = common(sub.add_parser("powers", help="alpha-powers in the prefix f(0..limit-1)"))
    p.add_argument("--alpha", type=int, default=2)
    p.add_argument("--max-hits", type=int, default=1000)
    p.set_defaults(func=cmd_powers)

    p = common(sub.add_parser("palindromes", help="palindromic factors in the prefix"))
    p.add_argument("--minlen", type=int, default=2)
    p.add_argument("--max-hits", type=int, default=1000)
    p.set_defaults(func=cmd_palindromes)

    common(sub.add_parser("minimize", help="minimal-rank equivalent representation")
           ).set_defaults(func=cmd_minimize)

    p = common(sub.add_parser("equal", help="decide whether two representations define the same sequence"))
    p.add_argument("--rep2", metavar="FILE")
    p.set_defaults(func=cmd_equal)

    p = common(sub.add_parser("op", help="closure operations"), files=False)
    p.add_argument("operation", choices=["add", "mul", "conv", "shuffle", "shift", "affine",
                                         "psum", "basechange"])
    p.add_argument("files", nargs="*", metavar="FILE", help="representation files")
    p.add_argument("--rep2", metavar="FILE")
    p.add_argument("--by", type=int, default=1, help="shift amount c (f(n - c))")
    p.add_argument("--fill", default="0", help="value used below the shift")
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--base", type=int, help="target base for basechange")
    p.add_argument("--minimize", action="store_true")
    p.set_defaults(func=cmd_op)

    p = common(sub.add_parser("gadget", help="build a polynomial gadget sequence"), files=False)
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--poly")
    p.add_argument("--base", type=int)
    p.add_argument("--alpha", type=int)
    p.add_argument("--rho")
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--native", action="store_true", help="keep the digit-count base K")
    p.add_argument("--minimize", action="store_true")
    p.set_defaults(func=cmd_gadget)

    p = common(sub.add_parser("growth", help="empirical growth report (evidence only)"), files=False)
    p.add_argument("--sigma", help="exponent of n in the comparison function "
                   "(default log_k rho with --rho, else 0)")
    p.add_argument("--base", type=int)
    p.add_argument("--rho")
    p.add_argument("--ell", type=int, default=0)
    p.set_defaults(func=cmd_growth)

    p = common(sub.add_parser("jsr", help="joint spectral radius bounds"), files=False)
    p.add_argument("--matrices", metavar="FILE")
    p.add_argument("--depth", type=int, default=8)
    p.set_defaults(func=cmd_jsr)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (CliError, linrep.RepresentationError, PolynomialSyntaxError,
            explore.ScanTooLargeError, growth.DepthGuardError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
