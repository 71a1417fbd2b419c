"""Command-line front end: ``zetamoments <command> [options]``.

Exit status: 0 success, 1 tolerance violation (verify-all or a failed
requested tolerance), 2 invalid input, 3 computation budget exceeded.
Errors are also written to stderr as a one-line JSON record.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib import metadata

import numpy as np

from . import conjecture, moments, perron
from .arith import cached_sieve_dk, ones_table, sieve_phi
from .dirichlet import DirichletPolynomial, mv_envelope, second_moment_exact, zeta_afe
from .errors import (
    BudgetExceededError, CapacityError, DomainError, LengthMismatchError, ToleranceError,
)
from .special import zeta_reference, zeta_truncated_sum
from .verify import PROFILES, run_all

EXIT_TOLERANCE, EXIT_VALIDATION, EXIT_BUDGET = 1, 2, 3


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


class CLIValidationError(ValueError):
    pass


# ---------------------------------------------------------------- parsing

def parse_complex(text: str) -> complex:
    """Accept '0.5+100i', '0.5+100j', '2', '-3i'."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise CLIValidationError(f"cannot parse complex number {text!r}") from None


def parse_int_range(text: str) -> list[int]:
    """'0..6' (inclusive) or '1,2,5'."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise CLIValidationError(f"cannot parse integer list {text!r}") from None


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise CLIValidationError(f"cannot parse number list {text!r}") from None


def format_complex(z: complex) -> str:
    return moments.format_complex(complex(z))


# ----------------------------------------------------------------- output

def _json_value(v):
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, np.generic):
        return v.item()
    return v


def _text_value(v) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        return format_complex(v)
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def render(rows: list[dict], fmt: str, meta: dict) -> str:
    columns = list(rows[0].keys()) if rows else []
    if fmt == "json":
        doc = {"meta": meta, "rows": [{k: _json_value(v) for k, v in r.items()} for r in rows]}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_text_value(r[c]) for c in columns])
        return buf.getvalue()
    cells = [[_text_value(r[c]) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- commands

_EVAL_METHODS = ("reference", "afe", "truncated")


def cmd_eval(args) -> tuple[list[dict], int]:
    methods = [m for m in args.method.split(",") if m]
    for m in methods:
        if m not in _EVAL_METHODS:
            raise CLIValidationError(f"unknown method {m!r}; choose from {_EVAL_METHODS}")
    if "truncated" in methods and args.T is None:
        raise CLIValidationError("method 'truncated' needs --T")
    points = [parse_complex(x) for x in args.s]
    rows = []
    for s in points:
        row = {"s": s}
        values = []
        for m in methods:
            if m == "reference":
                v = zeta_reference(s)
            elif m == "afe":
                v = zeta_afe(s)
            else:
                v = zeta_truncated_sum(s, args.T)
            row[m] = complex(v)
            values.append(complex(v))
        if len(values) > 1:
            row["abs_diff"] = max(abs(v - values[0]) for v in values[1:])
        rows.append(row)
    return rows, 0


def _quad_cfg(args) -> moments.QuadratureConfig:
    return moments.QuadratureConfig(rule=args.rule, panel_width=args.panel_width,
                                    abs_tol=args.abs_tol, max_evals=args.max_evals)


def cmd_moment(args) -> tuple[list[dict], int]:
    cfg = _quad_cfg(args)
    rows = []
    for T in parse_float_list(args.T):
        if args.kind == "first":
            rep = moments.first_moment_report(T, cfg)
        else:
            rep = moments.moment_report(args.kind, T, args.sigma, args.evaluator, cfg)
        row = rep.row()
        if not args.timings:
            row.pop("seconds")
        rows.append(row)
    return rows, 0


def cmd_polymean(args) -> tuple[list[dict], int]:
    rows = []
    if args.random:
        if args.N is None:
            raise CLIValidationError("--random needs --N")
        rng = np.random.default_rng(args.seed)
        C = 4 * math.pi
        for case in range(args.random):
            P = DirichletPolynomial(rng.normal(size=args.N) + 1j * rng.normal(size=args.N))
            T = float(parse_float_list(args.T)[0])
            res = second_moment_exact(P, T, jobs=args.jobs)
            env = mv_envelope(P)
            rows.append({"case": case, "N": args.N, "T": T, "main": res.main, "cross": res.cross,
                         "total": res.total, "cross_over_envelope": abs(res.cross) / (C * env)})
        return rows, 0
    for T in parse_float_list(args.T):
        if args.k < 1 or T < 10:
            raise CLIValidationError("need k >= 1 and T >= 10")
        res = conjecture.dirichlet_poly_moment(args.k, T, jobs=args.jobs)
        pred = conjecture.dirichlet_poly_moment_prediction(args.k, T)
        rows.append({"k": args.k, "T": T, "N": res.N, "main": res.main, "cross": res.cross,
                     "total": res.total, "prediction": pred, "ratio": res.total / pred})
    return rows, 0


def cmd_perron(args) -> tuple[list[dict], int]:
    rows = []
    if args.kernel is not None:
        A = args.kernel
        for N in parse_int_range(args.N):
            val = perron.perron_kernel(A, args.Y, N)
            limit = perron.perron_kernel_limit(A, N)
            rows.append({"A": A, "N": N, "Y": args.Y, "value": val, "closed_form": limit,
                         "abs_diff": abs(val - limit)})
        return rows, 0
    F = perron.series_catalog(args.series)
    status = 0
    for X in parse_float_list(args.X):
        sigma = args.sigma if args.sigma is not None else max(F.abscissa, 0.0) + 1.0 / math.log(X)
        if args.tol is not None:
            est = perron.perron_estimate(F, X, sigma, args.tol, Y_max=args.Y)
            value, Y, bound = est.value, est.Y, est.error_bound
            if bound > args.tol:
                status = EXIT_TOLERANCE
        else:
            value = perron.perron_sum_estimate(F, X, sigma, args.Y)
            Y, bound = args.Y, perron.perron_truncation_bound(F, X, sigma, args.Y)
        row = {"series": F.name, "X": X, "sigma": sigma, "Y": Y, "estimate": value,
               "truncation_bound": bound}
        if F.coefficients is not None:
            exact = math.fsum(F.coefficients(int(math.floor(X))))
            row["exact"] = exact
            row["abs_error"] = abs(value - exact)
        rows.append(row)
    return rows, status


def _asym_table(name: str, N: int):
    """(table, weight, catalog series) for sum_{n<=X} of the named sequence."""
    if name == "zeta":
        return ones_table(N), "1", "zeta"
    if name == "phi":
        return sieve_phi(N), "1", "phi"
    if name in ("d2", "d2_over_n"):
        table = perron.square_table(cached_sieve_dk(2, N))
        return table, ("1/n" if name == "d2_over_n" else "1"), name
    if name.startswith("dk_pow("):
        k = int(name[len("dk_pow("):-1])
        return cached_sieve_dk(k, N), "1", name
    raise CLIValidationError(f"asym supports zeta, phi, d2, d2_over_n, dk_pow(k); got {name!r}")


def cmd_asym(args) -> tuple[list[dict], int]:
    grid = parse_float_list(args.X)
    if not grid:
        raise CLIValidationError("--X needs at least one value")
    N = int(max(grid))
    table, weight, series = _asym_table(args.series.strip(), N)
    F = perron.series_catalog(series)
    terms = perron.full_main_term(F) if args.full else [
        perron.main_term_from_pole(F, p) for p in F.poles]
    rows = perron.compare_sum_asymptotic(table, weight, terms, grid)
    for r in rows:
        r["series"] = series
    return rows, 0


def cmd_conj(args) -> tuple[list[dict], int]:
    rows = []
    if args.gk:
        ks = parse_int_range(args.gk)
        if args.exact_text:
            sys.stdout.write(conjecture.gk_rational_text(ks))
            return [], 0
        rows += [{"quantity": "g_k", **r} for r in conjecture.gk_rows(ks)]
        return rows, 0
    if args.ak:
        for k in parse_int_range(args.ak):
            res = conjecture.a_k(k, args.prime_cutoff, args.m_cutoff, args.tol)
            row = {"quantity": "a_k", "k": k, "value": res.value,
                   "rel_tail_bound": res.rel_tail_bound, "prime_cutoff": res.prime_cutoff,
                   "m_cutoff": res.m_cutoff}
            if args.T is not None:
                row["T"] = args.T
                row["conjectured_moment"] = conjecture.conjectured_moment(k, args.T, res.value)
            rows.append(row)
        return rows, 0
    raise CLIValidationError("conj needs --gk or --ak")


def _local_series(args) -> conjecture.LocalFactorSeries:
    if args.coeffs:
        return conjecture.LocalFactorSeries(tuple(parse_int_range(args.coeffs)))
    if args.series == "dk":
        return conjecture.LocalFactorSeries.divisor_k(args.k, args.J)
    if args.series == "dk2":
        return conjecture.LocalFactorSeries.divisor_k_squared(args.k, args.J)
    raise CLIValidationError("factorize needs --coeffs or --series {dk, dk2}")


def cmd_factorize(args) -> tuple[list[dict], int]:
    f = _local_series(args)
    fac = conjecture.estermann_factorize(f)
    return [{
        "J": f.J,
        "input": " ".join(map(str, f.coeffs)),
        "C": " ".join(map(str, fac.C)),
        "remainder": " ".join(map(str, fac.remainder)),
        "pole_order": conjecture.pole_order_from_local(f) if f.J >= 2 else "",
        "round_trip_exact": fac.reconstruct() == f.coeffs,
    }], 0


def cmd_verify_all(args) -> tuple[list[dict], int]:
    only = set(parse_int_range(args.only)) if args.only else None

    def progress(res):
        if args.format != "table":
            print(res.line(), file=sys.stderr, flush=True)

    results = run_all(args.profile, args.seed, only, progress)
    rows = []
    for r in results:
        row = {"criterion": r.criterion, "title": r.title,
               "status": "PASS" if r.passed else "FAIL", "detail": r.detail}
        if args.timings:
            row["seconds"] = round(r.seconds, 2)
        rows.append(row)
    return rows, (0 if all(r.passed for r in results) else EXIT_TOLERANCE)


COMMANDS = {
    "eval": cmd_eval, "moment": cmd_moment, "polymean": cmd_polymean, "perron": cmd_perron,
    "asym": cmd_asym, "conj": cmd_conj, "factorize": cmd_factorize, "verify-all": cmd_verify_all,
}


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "table"), default="table")
    common.add_argument("--output", help="write results here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock columns (output is then not reproducible)")
    common.add_argument("--config", help="JSON file of option values for this command")

    parser = argparse.ArgumentParser(prog="zetamoments", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate zeta by several methods")
    p.add_argument("--s", action="append", required=True, help="point such as 0.5+100i; repeatable")
    p.add_argument("--method", default="reference,afe", help="comma list of reference, afe, truncated")
    p.add_argument("--T", type=float, help="length for the truncated Dirichlet sum")

    p = sub.add_parser("moment", parents=[common], help="moment integrals against main terms")
    p.add_argument("--kind", default="a",
                   choices=("a", "b", "c", "d", "a2pi", "refined-second", "refined-second-2pi",
                            "second", "offline-second", "fourth", "first"))
    p.add_argument("--T", default="1000", help="comma list of upper limits")
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--evaluator", default="reference", choices=moments.EVALUATORS)
    p.add_argument("--rule", default="gauss-legendre-panels",
                   choices=("gauss-legendre-panels", "adaptive-simpson"))
    p.add_argument("--panel-width", type=float)
    p.add_argument("--abs-tol", type=float, default=1e-6)
    p.add_argument("--max-evals", type=int, default=5_000_000)

    p = sub.add_parser("polymean", parents=[common], help="exact Dirichlet-polynomial mean squares")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--T", default="1000", help="comma list of lengths")
    p.add_argument("--random", type=int, default=0, help="number of random polynomials (uses --seed)")
    p.add_argument("--N", type=int, help="length of the random polynomials")

    p = sub.add_parser("perron", parents=[common], help="Perron integrals")
    p.add_argument("--series", default="zeta")
    p.add_argument("--X", default="10.5", help="comma list of non-integer X")
    p.add_argument("--sigma", type=float)
    p.add_argument("--Y", type=float, default=5000.0)
    p.add_argument("--tol", type=float, help="choose Y up to --Y by the truncation bound")
    p.add_argument("--kernel", type=float, metavar="A", help="evaluate the basic kernel at A instead")
    p.add_argument("--N", default="1", help="kernel powers, e.g. 1..3")

    p = sub.add_parser("asym", parents=[common], help="partial sums against residue main terms")
    p.add_argument("--series", default="d2_over_n")
    p.add_argument("--X", default="1000000", help="comma list")
    p.add_argument("--full", action="store_true", help="include the s = 0 residue when present")

    p = sub.add_parser("conj", parents=[common], help="g_k, a_k and conjectured moments")
    p.add_argument("--gk", help="k range such as 0..6")
    p.add_argument("--exact-text", action="store_true", help="print g_k as 'k num/den' lines")
    p.add_argument("--ak", help="k range such as 1..4")
    p.add_argument("--prime-cutoff", type=int, default=1_000_000)
    p.add_argument("--m-cutoff", type=int, default=60)
    p.add_argument("--tol", type=float, help="required relative tail bound for a_k")
    p.add_argument("--T", type=float, help="also report the conjectured moment at T")

    p = sub.add_parser("factorize", parents=[common], help="zeta-factorization of a local factor")
    p.add_argument("--coeffs", help="comma list c(1), c(p), c(p^2), ...")
    p.add_argument("--series", choices=("dk", "dk2"))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--J", type=int, default=8)

    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance checks")
    p.add_argument("--profile", choices=PROFILES, default="desk")
    p.add_argument("--only", help="criterion numbers, e.g. 1,5,9 or 6..10")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    with open(args.config) as fh:
        config = json.load(fh)
    if not isinstance(config, dict):
        raise CLIValidationError("config file must hold a JSON object")
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    subparser = sub.choices[args.command]
    known = {a.dest for a in subparser._actions} - {"help", "config"}
    cleaned = {}
    for key, value in config.items():
        dest = key.replace("-", "_")
        if dest not in known:
            raise CLIValidationError(f"unknown config key {key!r} for {args.command}")
        cleaned[dest] = value
    subparser.set_defaults(**cleaned)
    return parser.parse_args(argv)


def _error(kind: str, exc: BaseException, code: int) -> int:
    record = {"error": kind, "type": type(exc).__name__, "message": str(exc), "exit": code}
    print(json.dumps(record), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        if args.jobs < 1:
            raise CLIValidationError("--jobs must be at least 1")
        rows, status = COMMANDS[args.command](args)
    except (CLIValidationError, DomainError, LengthMismatchError, ValueError, OSError) as exc:
        return _error("validation", exc, EXIT_VALIDATION)
    except (BudgetExceededError, CapacityError) as exc:
        return _error("budget", exc, EXIT_BUDGET)
    except ToleranceError as exc:
        return _error("tolerance", exc, EXIT_TOLERANCE)
    if rows:
        meta = {"version": _version(), "command": args.command,
                "config": {k: v for k, v in sorted(vars(args).items())
                           if k not in ("output", "format", "command", "config")}}
        text = render(rows, args.format, meta)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
