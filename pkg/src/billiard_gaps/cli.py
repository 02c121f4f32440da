"""Command-line entry point: ``billiard-gaps <subcommand> [options]``.

Every run prints ``{"data": ..., "manifest": ...}`` as JSON (or the data as
CSV with the manifest on stderr). Exact integers are emitted as decimal
strings. The manifest checksum is the SHA-256 of the canonical JSON encoding
of the data payload, so identical commands give identical checksums.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import sys
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from . import __version__
from .bigint import int_str
from .chebyshev import cheb_T2, cheb_U, pell_fundamental, pell_growth_slope, pell_sequence, pool_from_name, prime_select
from .construct import (
    GeneralQuadraticSpec,
    construct_from_approximant,
    construct_general,
    construct_sqrtD,
    construct_strong_exact,
    general_upper_bound,
    named_spec,
)
from .counting import QuadrupleWindow, ford_exponent_report, quadruple_count
from .diophantine import best_divisor, continued_fraction, convergents, dirichlet_approx
from .errors import BilliardError
from .exact import DEFAULT_PRECISION_CAP, REPORT_DIGITS, parse_alpha
from .poisson import PoissonExperiment, billiard_vs_poisson_report, devroye_frequencies, exact_median, poisson_min_gap
from .selftest import run_all
from .spectrum import count_below, enumerate_spectrum, min_gap, scaled_gap_sweep, scaled_ratio, weyl_main_term

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_USAGE = 64

EPILOG = """exit codes:
  0   success
  1   selftest failure or unexpected internal error
  2   validation error (bad alpha, spec, pool, bound, ...)
  3   precision exhausted (a decimal alpha cannot decide a comparison)
  4   factorization timeout
  5   divisibility violation (an identity that must hold exactly failed)
  64  usage error (unknown subcommand or malformed flags)

alpha grammar: sqrt:p/q | surd:a,b,c,d (=(a+b*sqrt d)/c) | dec:<digits> | golden | golden2
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": {"type": "UsageError", "message": message,
                                               "exit_code": EXIT_USAGE}}) + "\n")
        raise SystemExit(EXIT_USAGE)


# --------------------------------------------------------------------------
# argument types


def _int(text: str) -> int:
    """Integer, also accepting exact scientific forms like ``1e5``."""
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def _int_list(text: str) -> list[int]:
    return [_int(t) for t in text.split(",") if t.strip()]


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


# --------------------------------------------------------------------------
# subcommands; each returns (data, csv_rows or None)


def _alpha(args):
    return parse_alpha(args.alpha, args.precision_cap)


def cmd_spectrum(args):
    alpha = _alpha(args)
    rows = [{"index": i + 1, "m": ev.m, "n": ev.n, "level": ev.decimal(args.digits)}
            for i, ev in enumerate(enumerate_spectrum(alpha, args.N))]
    data = {"alpha": alpha.label, "levels": rows}
    if args.X is not None:
        data.update(X=args.X, count_below_X=count_below(alpha, 0, args.X),
                    weyl_main_term=weyl_main_term(alpha, args.X))
    return data, rows


def cmd_mingap(args):
    g = min_gap(_alpha(args), args.N, args.k)
    row = {"k": args.k, "index": g.index, **g.row(args.digits)}
    return row, [row]


def cmd_sweep(args):
    recs = scaled_gap_sweep(_alpha(args), args.N)
    rows = [r.row(args.digits) for r in recs]
    return {"rows": rows, "max_over_min": f"{scaled_ratio(recs):.10f}"}, rows


def cmd_cf(args):
    cf = continued_fraction(_alpha(args), args.depth)
    return {"a0": cf.a0, "partial_quotients": list(cf.partial_quotients),
            "period": list(cf.period) if cf.period else None, "finite": cf.finite}, None


def cmd_convergents(args):
    rows = [c.to_dict() for c in convergents(_alpha(args), args.count)]
    return {"convergents": rows}, rows


def cmd_dirichlet(args):
    d = dirichlet_approx(_alpha(args), args.Q).to_dict()
    d["Q"] = args.Q
    return d, [d]


def cmd_divisor(args):
    w = best_divisor(args.n, args.seconds)
    d = {**w.to_dict(), "complement": int_str(w.complement)}
    return d, [d]


def cmd_cheb(args):
    rows = [{"n": n, "x": args.x, "T2": int_str(cheb_T2(n, args.x)), "U": int_str(cheb_U(n, args.x))}
            for n in args.n]
    return {"values": rows}, rows


def cmd_pell(args):
    f = pell_fundamental(args.D)
    data = {"fundamental": f.to_dict(), "digits_per_step": f"{pell_growth_slope(f):.10f}"}
    rows = [f.to_dict()]
    if args.n:
        seq = [{"n": n, **pell_sequence(args.D, n, f).to_dict()} for n in args.n]
        data["sequence"] = seq
        rows = seq
    return data, rows


def cmd_primeselect(args):
    pool = pool_from_name(args.pool, args.coprime_to, args.bound)
    sel = prime_select(args.eps, pool)
    d = {**sel.to_dict(), "pool": args.pool, "product": int_str(sel.product)}
    return d, [d]


class UsageError(Exception):
    pass


def _spec_from_args(args) -> GeneralQuadraticSpec:
    if args.spec:
        return named_spec(args.spec)
    missing = [f for f in ("x", "a", "b", "sign") if getattr(args, f) is None]
    if missing:
        raise UsageError(f"missing --{', --'.join(missing)} (or pass --spec)")
    return GeneralQuadraticSpec(args.x, args.a, args.b, args.sign, args.r)


def cmd_construct(args):
    kind = args.kind
    if kind == "dirichlet":
        certs = [general_upper_bound(_alpha(args), args.N)]
    elif kind == "approximant":
        certs = [construct_from_approximant(_alpha(args), args.p, args.q, seconds=args.seconds)]
    elif kind == "sqrtD":
        certs = construct_sqrtD(args.D, args.primes, args.P, args.prefactor)
    elif kind == "general":
        certs = construct_general(_spec_from_args(args), args.eps, args.count,
                                  args.primes_L, args.primes_L_prime)
    else:
        certs = construct_strong_exact(_spec_from_args(args), args.count)
    rows = [c.to_dict(args.digits) for c in certs]
    return {"certificates": rows}, rows


def cmd_poisson(args):
    exp = PoissonExperiment(args.N, args.trials, args.seed, args.k)
    res = poisson_min_gap(exp)
    data = res.to_dict()
    data["ks_exponential"] = res.ks_exponential()
    if args.oracle:
        data["oracle_median"] = exact_median(args.N, args.k)
    if args.devroye:
        j0, j1 = args.devroye
        data["devroye"] = devroye_frequencies(j0, j1, args.trials, args.seed)
    return data, data.get("devroye") or [{k: v for k, v in data.items() if k != "quantiles"}]


def cmd_multtable(args):
    rows = ford_exponent_report(args.X, max_X=args.max_X)
    return {"rows": rows}, rows


def cmd_quadruples(args):
    w = QuadrupleWindow(args.M, args.T_exp, args.T)
    d = quadruple_count(w, _alpha(args)).to_dict()
    d["alpha"] = args.alpha
    return d, [{"M": d["M"], "T": d["T"], "count": d["count"]}]


def cmd_report(args):
    rep = billiard_vs_poisson_report(_alpha(args), args.N, args.trials, args.seed, args.digits)
    rows = [{k: v for k, v in r.items() if not isinstance(v, dict)} for r in rep["rows"]]
    return rep, rows


def cmd_selftest(args):
    results = run_all()
    data = {"suites": [r.to_dict() for r in results], "ok": all(r.ok for r in results)}
    return data, data["suites"]


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--precision-cap", type=_int, default=DEFAULT_PRECISION_CAP,
                        help="max working precision in bits for decimal alphas")
    common.add_argument("--digits", type=_int, default=REPORT_DIGITS,
                        help="significant digits of reported decimals")

    p = _Parser(prog="billiard-gaps", description="Minimal gaps in the spectrum {alpha m^2 + n^2}.",
                epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    sp = add("spectrum", cmd_spectrum, "first N eigenvalues")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--N", type=_int, required=True)
    sp.add_argument("--X", type=_int, help="also report the exact count below X and the Weyl term")

    sp = add("mingap", cmd_mingap, "k-th smallest gap among the first N levels")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--N", type=_int, required=True)
    sp.add_argument("--k", type=_int, default=1)

    sp = add("sweep", cmd_sweep, "N * delta_min(N) over a list of N")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--N", type=_int_list, required=True, help="comma separated, increasing")

    sp = add("cf", cmd_cf, "continued fraction expansion")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--depth", type=_int, default=20)

    sp = add("convergents", cmd_convergents, "convergents with exact quality")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--count", type=_int, default=10)

    sp = add("dirichlet", cmd_dirichlet, "approximant with q <= Q and |q alpha - p| <= 1/Q")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--Q", type=_int, required=True)

    sp = add("divisor", cmd_divisor, "most balanced divisor of n")
    sp.add_argument("--n", type=_int, required=True)
    sp.add_argument("--seconds", type=float, default=30.0)

    sp = add("cheb", cmd_cheb, "2T_n(x/2) and U_n(x/2)")
    sp.add_argument("--x", type=_int, required=True)
    sp.add_argument("--n", type=_int_list, required=True)

    sp = add("pell", cmd_pell, "fundamental Pell solution and its powers")
    sp.add_argument("--D", type=_int, required=True)
    sp.add_argument("--n", type=_int_list, default=[])

    sp = add("primeselect", cmd_primeselect, "greedy primes with density in (1/2 - eps, 1/2)")
    sp.add_argument("--eps", type=_fraction, required=True)
    sp.add_argument("--pool", choices=("odd", "1mod4", "3mod4"), default="odd")
    sp.add_argument("--coprime-to", type=_int, default=1)
    sp.add_argument("--bound", type=_int, default=10**6)

    sp = add("construct", cmd_construct, "gap certificates")
    sp.add_argument("kind", choices=("dirichlet", "approximant", "sqrtD", "general", "strong"))
    sp.add_argument("--alpha")
    sp.add_argument("--N", type=_int)
    sp.add_argument("--p", type=_int)
    sp.add_argument("--q", type=_int)
    sp.add_argument("--seconds", type=float, default=30.0)
    sp.add_argument("--D", type=_int)
    sp.add_argument("--primes", type=_int_list)
    sp.add_argument("--P", type=_int_list)
    sp.add_argument("--prefactor", type=_fraction, default=Fraction(1))
    sp.add_argument("--spec", choices=("golden", "golden2"))
    sp.add_argument("--x", type=_int)
    sp.add_argument("--a", type=_int)
    sp.add_argument("--b", type=_int)
    sp.add_argument("--sign", type=_int)
    sp.add_argument("--r", type=_fraction, default=Fraction(1))
    sp.add_argument("--eps", type=_fraction, default=Fraction(1, 4))
    sp.add_argument("--count", type=_int, default=3)
    sp.add_argument("--primes-L", type=_int_list)
    sp.add_argument("--primes-L-prime", type=_int_list)

    sp = add("poisson", cmd_poisson, "Poisson minimal-gap baseline")
    sp.add_argument("--N", type=_int, required=True)
    sp.add_argument("--trials", type=_int, required=True)
    sp.add_argument("--seed", type=_int, required=True)
    sp.add_argument("--k", type=_int, default=1)
    sp.add_argument("--oracle", action="store_true", help="also compute the exact median")
    sp.add_argument("--devroye", type=_int_list, help="j_min,j_max: event frequencies on N = 2^j")

    sp = add("multtable", cmd_multtable, "distinct products in an X by X table")
    sp.add_argument("--X", type=_int_list, required=True)
    sp.add_argument("--max-X", type=_int, default=30_000)

    sp = add("quadruples", cmd_quadruples, "count n1 n2/(n3 n4) within 1/T of alpha")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--M", type=_int, required=True)
    sp.add_argument("--T-exp", type=_fraction, default=Fraction(3))
    sp.add_argument("--T", type=_int)

    sp = add("report", cmd_report, "billiard against Poisson, with the quadrupling check")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--N", type=_int_list, required=True)
    sp.add_argument("--trials", type=_int, required=True)
    sp.add_argument("--seed", type=_int, required=True)

    add("selftest", cmd_selftest, "exhaustive Chebyshev identity suites")
    return p


_REQUIRED = {
    ("construct", "dirichlet"): ("alpha", "N"),
    ("construct", "approximant"): ("alpha", "p", "q"),
    ("construct", "sqrtD"): ("D", "primes", "P"),
}


def _check_required(args) -> None:
    need = _REQUIRED.get((args.command, getattr(args, "kind", None)), ())
    missing = [f for f in need if getattr(args, f) is None]
    if missing:
        raise UsageError(f"construct {args.kind} needs --{', --'.join(missing)}")
    if args.command == "poisson" and args.devroye is not None and len(args.devroye) != 2:
        raise UsageError("--devroye takes j_min,j_max")


# --------------------------------------------------------------------------
# output


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def make_manifest(argv: list[str], args, data) -> dict:
    return {
        "command": ["billiard-gaps", *argv],
        "alpha": getattr(args, "alpha", None),
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "sha256": hashlib.sha256(canonical_json(data).encode()).hexdigest(),
    }


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    cols: list[str] = []
    for r in rows:
        cols.extend(k for k in r if k not in cols)
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
    return buf.getvalue()


def _fail(exc: BaseException, code: int) -> int:
    sys.stderr.write(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc),
                                           "exit_code": code}}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help / --version exit 0, errors exit 64
        return int(exc.code or 0)
    try:
        _check_required(args)
        data, rows = args.func(args)
    except UsageError as exc:
        return _fail(exc, EXIT_USAGE)
    except BilliardError as exc:
        return _fail(exc, exc.exit_code)
    manifest = make_manifest(argv, args, data)
    if args.format == "csv" and rows is not None:
        sys.stdout.write(_csv(rows))
        sys.stderr.write(json.dumps({"manifest": manifest}) + "\n")
    else:
        sys.stdout.write(json.dumps({"data": data, "manifest": manifest}, indent=1) + "\n")
    if args.command == "selftest" and not data["ok"]:
        return EXIT_SELFTEST
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
