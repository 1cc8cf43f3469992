"""``logtangent`` command line: compute, verify, discover, bench.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 precision or convergence failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from . import __version__
from .errors import DomainError, LogTangentError, PrecisionError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3
PREC_ENV = "LOGTANGENT_PREC"
DEFAULT_PREC = 50


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    records: list[dict] = field(default_factory=list)
    version: str = __version__

    def lines(self) -> list[str]:
        """One JSON object per line: the summary, then any per-item records."""
        head = {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "diagnostics": self.diagnostics,
            "version": self.version,
        }
        return [json.dumps(head)] + [json.dumps(r) for r in self.records]

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.lines()) + "\n")


def format_digits(value: mpmath.mpf, prec: int, block: int = 10, per_line: int = 50) -> str:
    """``prec`` significant digits, fraction in blocks of 10, 50 per line.

    The last block carries ``(+-1)``: the final digit may be off by one unit.
    """
    text = mpmath.nstr(value, prec, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    sign = "-" if text.startswith("-") else ""
    text = text.lstrip("-")
    whole, _, frac = text.partition(".")
    blocks = [frac[i:i + block] for i in range(0, len(frac), block)]
    per = per_line // block
    rows = [" ".join(blocks[i:i + per]) for i in range(0, len(blocks), per)] or [""]
    rows[-1] += " (+-1)"
    out = [f"{sign}{whole}.{rows[0]}"]
    pad = " " * (len(sign) + len(whole) + 1)
    out += [pad + r for r in rows[1:]]
    return "\n".join(out)


def _sci(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 3)


# --------------------------------------------------------------------------
# compute

CONSTANTS = ("G", "L2chi6", "L2chi8")
METHODS = ("accel-n", "lucas", "slow")


def cmd_compute(args: argparse.Namespace) -> tuple[RunReport, int]:
    from .accel import aux_lvalue_run, catalan_accel_run, catalan_lucas_run

    const, method, prec = args.constant, args.method, args.prec
    if const != "G":
        if method is not None:
            raise UsageError(f"{const} has a single formula; --method applies to G only")
        if args.n is not None:
            raise UsageError("--n applies to --method accel-n only")
        method = "closed"
    else:
        method = method or "accel-n"
        if args.n is not None and method != "accel-n":
            raise UsageError("--n applies to --method accel-n only")
    report = RunReport("compute", {"constant": const, "method": method, "n": args.n, "prec": prec})
    start = time.perf_counter()
    if method == "accel-n":
        n = args.n if args.n is not None else 1
        if n < 1:
            raise UsageError("--n must be >= 1")
        run = catalan_accel_run(n, prec)
        value, terms = run.value, run.terms_used
    elif method == "lucas":
        run = catalan_lucas_run(prec)
        value, terms = run.value, run.terms_used
    elif method == "slow":
        run = aux_lvalue_run("chi4-slow", prec)
        value, terms = run.value, run.terms_used
        report.diagnostics["deceleration"] = True
    else:
        run = aux_lvalue_run("chi6" if const == "L2chi6" else "chi8", prec)
        value, terms = run.value, run.terms_used
    wall = (time.perf_counter() - start) * 1000
    report.outputs["value"] = mpmath.nstr(value, prec, strip_zeros=False)
    report.diagnostics.update({"terms_used": terms, "wall_ms": round(wall, 3)})
    if terms:
        report.diagnostics["digits_per_term"] = round(prec / terms, 6)
    print(f"{const} = " + format_digits(value, prec))
    print(f"# method {method}, {terms} terms")
    return report, EXIT_OK


# --------------------------------------------------------------------------
# verify

SUITES = ("reflection", "multiplication", "lemma1", "decompositions", "units", "denest")


def random_angles(rng: random.Random, count: int, max_den: int = 120, upper: Fraction = Fraction(1, 2)) -> list[Fraction]:
    """Distinct rationals in ``(0, upper]`` with denominator at most ``max_den``."""
    out: set[Fraction] = set()
    while len(out) < count:
        b = rng.randint(2, max_den)
        a = rng.randint(1, b)
        f = Fraction(a, b)
        if 0 < f <= upper:
            out.add(f)
    return sorted(out)


def suite_reflection(prec: int, rng: random.Random) -> list[tuple[str, mpmath.mpf]]:
    from .logtan import t_value

    out = []
    for f in random_angles(rng, 200):
        with mpmath.workdps(prec + 10):
            d = abs(t_value(f, prec + 10).value - t_value(Fraction(1, 2) - f, prec + 10).value)
        out.append((f"T({f}) - T({Fraction(1, 2) - f})", d))
    return out


def suite_multiplication(prec: int, rng: random.Random) -> list[tuple[str, mpmath.mpf]]:
    from .transforms import multiplication_relation

    out = []
    for m in range(3, 12, 2):
        for r in random_angles(rng, 20, max_den=60 * m, upper=Fraction(1, 2 * m)):
            rel = multiplication_relation(m, r)
            out.append((f"m={m}, r={r}", abs(rel.evaluate(prec))))
    return out


def suite_lemma1(prec: int, rng: random.Random) -> list[tuple[str, mpmath.mpf]]:
    from .transforms import lemma1_residual

    out = []
    for m in range(1, 12, 2):
        for _ in range(20):
            x = f"{rng.uniform(0.01, 1.5):.12f}"
            out.append((f"m={m}, x={x}", lemma1_residual(m, x, prec)))
    return out


def suite_decompositions(prec: int, rng: random.Random) -> list[tuple[str, mpmath.mpf]]:
    from .transforms import alt_decomposition_relation

    return [(f"n={n}", abs(alt_decomposition_relation(n).evaluate(prec))) for n in range(1, 9)]


def suite_units(prec: int, rng: random.Random) -> list[tuple[str, mpmath.mpf]]:
    from .units import certify_unit, unit_poly

    out = []
    for n in range(1, 51):
        for sign in ("+", "-"):
            unit_poly(n, sign)  # raises on a bad leading/constant coefficient
    for n in range(1, 21):
        for j in range(1, n + 1):
            out.append((f"n={n}, j={j}", certify_unit(n, j, prec).residual))
    return out


def suite_denest(prec: int, rng: random.Random) -> list[tuple[str, mpmath.mpf]]:
    from .accel import denest_residual

    return [("tan(pi/20)/tan(3pi/20)^3 denesting", denest_residual(prec))]


SUITE_FUNCS: dict[str, Callable[[int, random.Random], list[tuple[str, mpmath.mpf]]]] = {
    "reflection": suite_reflection,
    "multiplication": suite_multiplication,
    "lemma1": suite_lemma1,
    "decompositions": suite_decompositions,
    "units": suite_units,
    "denest": suite_denest,
}


def run_suite(name: str, prec: int, seed: int = 0) -> list[tuple[str, mpmath.mpf, bool]]:
    """Residuals of one suite with pass flags at threshold ``10**(5-prec)``."""
    threshold = mpmath.mpf(10) ** (5 - prec)
    rows = SUITE_FUNCS[name](prec, random.Random(seed))
    return [(label, res, res < threshold) for label, res in rows]


def cmd_verify(args: argparse.Namespace) -> tuple[RunReport, int]:
    from .errors import CertificationError

    report = RunReport("verify", {"suite": args.suite, "prec": args.prec, "seed": args.seed})
    start = time.perf_counter()
    try:
        rows = run_suite(args.suite, args.prec, args.seed)
    except CertificationError as exc:
        print(f"FAIL {exc}")
        report.outputs["passed"] = False
        report.outputs["error"] = str(exc)
        return report, EXIT_FAIL
    wall = (time.perf_counter() - start) * 1000
    failed = [r for r in rows if not r[2]]
    worst = max((r[1] for r in rows), default=mpmath.mpf(0))
    for label, res, ok in rows:
        if args.verbose or not ok:
            print(f"{'ok  ' if ok else 'FAIL'} {label}: {_sci(res)}")
        report.records.append({"identity": label, "residual": _sci(res), "passed": ok})
    print(f"{args.suite}: {len(rows) - len(failed)}/{len(rows)} passed, max residual {_sci(worst)}"
          f" (threshold 1e{5 - args.prec})")
    report.outputs.update({"passed": not failed, "checks": len(rows), "failures": len(failed),
                           "max_residual": _sci(worst)})
    report.diagnostics["wall_ms"] = round(wall, 3)
    return report, EXIT_OK if not failed else EXIT_FAIL


# --------------------------------------------------------------------------
# discover


def cmd_discover(args: argparse.Namespace) -> tuple[RunReport, int]:
    from .relations import (
        appendix_relations,
        explain_relation,
        relation_class_key,
        relation_record,
        scan_t_relations,
    )

    if args.max_den < 2:
        raise UsageError("--max-den must be >= 2")
    report = RunReport("discover", {"max_den": args.max_den, "prec": args.prec,
                                    "max_norm": args.max_norm, "size_cap": args.size_cap})
    start = time.perf_counter()
    disc = scan_t_relations(args.max_den, args.prec, args.max_norm, args.size_cap)
    labels: dict[tuple, list[str]] = {}
    for label, angles, coeffs in appendix_relations():
        labels.setdefault(relation_class_key(angles, coeffs), []).append(label)
    unexplained = 0
    for rel in disc.relations:
        deriv = explain_relation(rel, args.max_den)
        unexplained += not deriv.explained
        tag = ",".join(labels.get(relation_class_key(rel.angles, rel.coefficients), []))
        print(f"{rel.text():<60} [{tag}]" if tag else rel.text())
        print(f"    {deriv.describe()}")
        rec = relation_record(rel)
        rec["appendix"] = tag
        rec["derivation"] = deriv.describe()
        report.records.append(rec)
    wall = (time.perf_counter() - start) * 1000
    print(f"# {len(disc.relations)} relations, {disc.subsets_tested} subsets, "
          f"{len(disc.failures)} subset failures, {unexplained} unexplained")
    report.outputs.update({"relations": len(disc.relations), "unexplained": unexplained})
    report.diagnostics.update({"subsets_tested": disc.subsets_tested,
                               "subset_failures": len(disc.failures), "wall_ms": round(wall, 3)})
    return report, EXIT_OK if not unexplained else EXIT_FAIL


# --------------------------------------------------------------------------
# bench


def cmd_bench(args: argparse.Namespace) -> tuple[RunReport, int]:
    from .accel import (
        aux_lvalue_run,
        catalan_accel_run,
        digits_per_term,
        limiting_ratio,
        slow_terms_bound,
        summand_ratio,
        terms_needed,
    )

    report = RunReport("bench", {"n": list(args.n), "prec": args.prec,
                                 "target_digits": args.target_digits, "slow_digits": args.slow_digits})
    print(f"{'n':>3} {'terms':>7} {'ratio@200':>12} {'rho^2/4':>10} {'digits/term':>12} {'ms':>9}")
    for n in args.n:
        if n < 1:
            raise UsageError("bench needs n >= 1")
        start = time.perf_counter()
        catalan_accel_run(n, args.prec)
        wall = (time.perf_counter() - start) * 1000
        row = {
            "n": n,
            "terms_for_target": terms_needed(n, args.target_digits),
            "measured_ratio": round(summand_ratio(n, 200), 8),
            "limit_ratio": round(limiting_ratio(n), 8),
            "digits_per_term": round(digits_per_term(n, 200), 6),
            "wall_ms": round(wall, 3),
        }
        report.records.append(row)
        print(f"{n:>3} {row['terms_for_target']:>7} {row['measured_ratio']:>12.6f} "
              f"{row['limit_ratio']:>10.6f} {row['digits_per_term']:>12.4f} {row['wall_ms']:>9.1f}")
    if args.slow_digits:
        start = time.perf_counter()
        run = aux_lvalue_run("chi4-slow", args.slow_digits)
        wall = (time.perf_counter() - start) * 1000
        direct = slow_terms_bound(args.slow_digits)
        report.records.append({"n": "slow", "terms_for_target": f"{direct:.3e}",
                               "extrapolated_terms": run.terms_used, "deceleration": True,
                               "wall_ms": round(wall, 3)})
        print(f"slow (chi4): direct summation needs ~{direct:.2e} terms for {args.slow_digits} digits; "
              f"extrapolated with {run.terms_used}")
    return report, EXIT_OK


# --------------------------------------------------------------------------


def _default_prec() -> int:
    raw = os.environ.get(PREC_ENV)
    if not raw:
        return DEFAULT_PREC
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{PREC_ENV}={raw!r} is not an integer") from None
    return value


def _prec_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"precision must be an integer, got {text!r}") from None
    if value < 5:
        raise argparse.ArgumentTypeError("precision must be at least 5 digits")
    return value


def build_parser(default_prec: int) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logtangent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--report", metavar="PATH", help="write a JSON-lines run report")
    # also accepted after the subcommand; SUPPRESS keeps a top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="PATH", default=argparse.SUPPRESS,
                        help="write a JSON-lines run report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="digits of G, L(2,chi6) or L(2,chi8)")
    p.add_argument("constant", choices=CONSTANTS)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--n", type=int)
    p.add_argument("--prec", type=_prec_arg, default=default_prec)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", parents=[common], help="run an identity residual suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--prec", type=_prec_arg, default=default_prec)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("discover", parents=[common], help="integer relations among T-values")
    p.add_argument("--max-den", type=int, default=20)
    p.add_argument("--prec", type=_prec_arg, default=80)
    p.add_argument("--max-norm", type=int, default=32)
    p.add_argument("--size-cap", type=int, default=6)
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("bench", parents=[common], help="convergence of the accelerated series")
    p.add_argument("--n", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6])
    p.add_argument("--prec", type=_prec_arg, default=default_prec)
    p.add_argument("--target-digits", type=int, default=50)
    p.add_argument("--slow-digits", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser(_default_prec())
    except UsageError as exc:
        print(f"logtangent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 0 for --help, 2 for bad flags
        return int(exc.code or 0)
    try:
        report, code = args.func(args)
    except UsageError as exc:
        print(f"logtangent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"logtangent: precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except DomainError as exc:
        print(f"logtangent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LogTangentError as exc:
        print(f"logtangent: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.report:
        report.write(args.report)
    return code


if __name__ == "__main__":
    sys.exit(main())
