"""Command-line front end.

Exit codes: 0 success, 2 violation found, 3 input rejected,
4 factoring budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import __version__
from .experiments import (
    BoundReport,
    HypothesisError,
    TableProvider,
    base_report,
    check_hypotheses,
    check_theorem2,
    check_theorem3,
    check_theorem4,
    reports_to_csv,
    reports_to_json,
)
from .poly import PolynomialError, is_even, parse_poly
from .primes import DEFAULT_RHO_BUDGET, FactoringError
from .tuples import (
    BaierDey,
    GenericU,
    Sah,
    enumerate_profiles,
    max_weight,
    max_weight_over_height,
    maximizers,
    render_dot,
    render_tree,
)
from .valuation import verify_mu_bounds
from .zerosum import RootCertificationError, find_roots, minimal_u, near_misses, search_zero_sums

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_REJECTED = 3
EXIT_FACTORING = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse's default exit code 2 would read as a violation
        self.print_usage(sys.stderr)
        self.exit(EXIT_REJECTED, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> List[int]:
    vals = [int(x) for x in text.split(",") if x.strip()]
    if not vals or any(b <= a for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError("grid must be a strictly increasing list of integers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None, help="factor-table cache (default: $LCMLAB_CACHE)")
    common.add_argument("--rho-budget", type=int, default=DEFAULT_RHO_BUDGET)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for factoring")
    common.add_argument("--format", choices=("csv", "json", "tree", "dot"), default=None)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp header line")
    common.add_argument("--allow-unknown", action="store_true",
                        help="proceed when irreducibility cannot be certified")
    common.add_argument("--prime-budget", type=int, default=10_000,
                        help="largest prime tried as an irreducibility witness")

    p = _Parser(prog="lcmlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"lcmlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="valuation anatomy of f(1..N)")
    a.add_argument("--poly", required=True)
    g = a.add_mutually_exclusive_group(required=True)
    g.add_argument("--N", type=int)
    g.add_argument("--grid", type=_grid)
    a.add_argument("--c", type=Fraction, default=Fraction(1))

    v = sub.add_parser("verify", parents=[common], help="run a theorem or lemma harness")
    which = v.add_mutually_exclusive_group(required=True)
    which.add_argument("--theorem", type=int, choices=(2, 3, 4))
    which.add_argument("--lemma", choices=("algnt", "sah", "zerosum"))
    v.add_argument("--poly")
    v.add_argument("--N", type=int)
    v.add_argument("--grid", type=_grid)
    v.add_argument("--c", type=Fraction, default=None)
    v.add_argument("--u", type=int, default=None, help="override u for the key-lemma check")
    v.add_argument("--eta", type=int, default=None)
    v.add_argument("--exact", action="store_true", help="also compare exact integers (N <= 500)")
    v.add_argument("--support", type=int, default=3, help="max support for the zero-sum search")
    v.add_argument("--skip-irreducibility", action="store_true",
                   help="run the inequality without certifying irreducibility")

    t = sub.add_parser("tuples", parents=[common], help="admissible valuation profiles")
    t.add_argument("--filter", choices=("sah", "baierdey", "generic"), required=True)
    t.add_argument("--d", type=int)
    t.add_argument("--eta", type=int)
    t.add_argument("--u", type=int)
    return p


def _header(args) -> Optional[str]:
    if args.no_timestamp:
        return None
    stamp = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    return f"generated {stamp} by lcmlab {__version__}"


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_reports(args, reports: List[BoundReport]) -> None:
    fmt = args.format or "csv"
    if fmt == "json":
        _emit(args, reports_to_json(reports, _header(args)))
    else:
        _emit(args, reports_to_csv(reports, _header(args)))


def _provider(args) -> TableProvider:
    return TableProvider(args.cache_dir, args.rho_budget, max(1, args.jobs))


def _ns(args) -> List[int]:
    if getattr(args, "grid", None):
        return args.grid
    if args.N is None:
        raise HypothesisError("--N or --grid is required")
    return [args.N]


def cmd_analyze(args) -> int:
    f = parse_poly(args.poly)
    verdict = check_hypotheses(f, need_even=False, allow_unknown=args.allow_unknown,
                               prime_budget=args.prime_budget)
    print(f"{f}: {verdict.describe()}", file=sys.stderr)
    provider = _provider(args)
    Ns = _ns(args)
    provider.table(f, max(Ns), args.c)
    _emit_reports(args, [base_report(provider.table(f, N, args.c)) for N in Ns])
    return EXIT_OK


def _verify_theorem(args, provider: TableProvider) -> int:
    reports = []
    for N in _ns(args):
        if args.theorem == 4:
            if args.eta is None:
                raise HypothesisError("--eta is required for theorem 4")
            rep = check_theorem4(args.eta, N, args.c, provider, exact=args.exact)
        else:
            if not args.poly:
                raise HypothesisError("--poly is required")
            f = parse_poly(args.poly)
            kw = dict(provider=provider, allow_unknown=args.allow_unknown,
                      require_irreducible=not args.skip_irreducibility, exact=args.exact)
            if args.theorem == 2:
                rep = check_theorem2(f, N, **kw)
            else:
                rep = check_theorem3(f, N, args.c, **kw)
        reports.append(rep)
        status = "ok" if rep.passed else "VIOLATION"
        extra = "" if rep.exact_ok is None else f" exact={'ok' if rep.exact_ok else 'FAIL'}"
        print(f"{rep.label} {rep.poly} N={rep.N} c={rep.c} h={rep.h} "
              f"margin={rep.margin:.6g}{extra} {status}", file=sys.stderr)
    if args.out or args.format:
        _emit_reports(args, reports)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def _verify_mu(args, provider: TableProvider) -> int:
    if not args.poly:
        raise HypothesisError("--poly is required")
    f = parse_poly(args.poly)
    u = args.u if args.u is not None else minimal_u(find_roots(f))
    if u > f.degree:
        raise HypothesisError(f"{f} has no negation pair among its roots; pass --u")
    failed = False
    for N in _ns(args):
        rep = verify_mu_bounds(provider.table(f, N, 1), u)
        if args.lemma == "algnt":
            print(f"N={N} u={u}, max mu_p over p>2N: {rep.max_mu_large} (bound ≤{u - 1})")
            for p, mu in rep.algnt_violations:
                print(f"  violation: p={p} mu_p={mu}")
            failed |= bool(rep.algnt_violations)
        else:
            print(f"N={N} minimal violation-free c': {rep.minimal_clean_c}")
            for c, bad in rep.sah_violations.items():
                if bad:
                    shown = ", ".join(f"p={p} nu={nu} mu={m}" for p, nu, m in bad[:5])
                    print(f"  c'={c}: {len(bad)} violation(s): {shown}")
            failed |= rep.minimal_clean_c is None
    return EXIT_VIOLATION if failed else EXIT_OK


def _verify_zerosum(args) -> int:
    if not args.poly:
        raise HypothesisError("--poly is required")
    f = parse_poly(args.poly)
    rs = find_roots(f)
    u = minimal_u(rs)
    print(f"{f}: {len(rs.pairs)} negation pair(s), "
          f"{'exact symmetry' if rs.exact_pairing else 'numerical'} pairing")
    print(f"minimal u via pairing: {u}" if u <= f.degree else "no admissible u via pairing")
    support = min(args.support, f.degree)
    sums = search_zero_sums(rs, support)
    print(f"zero sums with support <= {support}: {len(sums)}")
    for z in sums:
        print(f"  {z.coefficients} residual={z.residual:.3g}")
    for vec, res in near_misses(rs, support):
        print(f"  near miss {vec} residual={res:.3g}")
    if is_even(f) and u != f.degree // 2 + 1:
        print(f"  VIOLATION: even polynomial with u={u} != d/2+1")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args) -> int:
    provider = _provider(args)
    if args.theorem is not None:
        return _verify_theorem(args, provider)
    if args.lemma == "zerosum":
        return _verify_zerosum(args)
    return _verify_mu(args, provider)


def cmd_tuples(args) -> int:
    if args.filter == "sah":
        if args.d is None:
            raise HypothesisError("--d is required")
        filt, name = Sah(args.d), f"sah_d{args.d}"
    elif args.filter == "baierdey":
        if args.eta is None:
            raise HypothesisError("--eta is required")
        filt, name = BaierDey(args.eta), f"baierdey_eta{args.eta}"
    else:
        if args.d is None or args.u is None:
            raise HypothesisError("--d and --u are required")
        filt, name = GenericU(args.d, args.u), f"generic_d{args.d}_u{args.u}"
    profiles = enumerate_profiles(filt)
    if args.format == "dot":
        _emit(args, render_dot(profiles, name))
        return EXIT_OK
    ratio = max_weight_over_height(filt)
    lines = [
        f"filter: {filt!r}",
        f"profiles: {len(profiles)}",
        f"max-weight: {max_weight(filt)}",
        f"max-ratio: {ratio}",
        "maximizers: " + " ".join("(" + ",".join(map(str, p)) + ")" for p in maximizers(filt)),
        "",
    ]
    _emit(args, "\n".join(lines) + render_tree(profiles))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"analyze": cmd_analyze, "verify": cmd_verify, "tuples": cmd_tuples}[args.command]
    try:
        return handler(args)
    except FactoringError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FACTORING
    except (PolynomialError, HypothesisError, RootCertificationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
