"""Command-line front end: ``conseq-lab <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 a checked identity or invariant
failed, 3 a counting budget was exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import correlation as corr
from . import growth, recursion, wilf
from .core import Pattern, is_monotone, is_nonoverlapping
from .enumeration import (PERMS, WORDS, BudgetExceeded, CountTable, brute_table,
                          dp_perm_counts, dp_word_counts)

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2, 3
CACHE_ENV = "CONSEQ_LAB_CACHE_DIR"


class UsageError(ValueError):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``"3..20"`` -> (3, 20); a single integer means (its default start, value)."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    return -1, int(text)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Pattern):
        return str(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _envelope(args, payload: dict) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    out = {"tool": "conseq_lab", "version": __version__, "command": args.command,
           "config": config, "exact": True}
    if not args.deterministic:
        out["generated_at"] = datetime.now(timezone.utc).isoformat()
    out.update(payload)
    return out


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(args, payload: dict) -> None:
    _emit(args, json.dumps(_envelope(args, payload), indent=2, sort_keys=True,
                           default=_json_default))


# cache --------------------------------------------------------------------

def _cache_path(pattern: Pattern, universe: str, k, engine: str, n_max: int, r_max: int):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    key = json.dumps([str(pattern), universe, k, engine, __version__, n_max, r_max])
    name = hashlib.sha256(key.encode()).hexdigest()[:24] + ".csv"
    return Path(root) / name


def cached_table(pattern: Pattern, universe: str, k, engine: str, n_max: int,
                 r_max: int) -> CountTable:
    """Compute a count table, reading and writing the CSV cache when configured."""
    path = _cache_path(pattern, universe, k, engine, n_max, r_max)
    if path is not None and path.exists():
        return CountTable.from_csv(path.read_text(), pattern, universe, k, engine)
    if engine == "brute":
        table = brute_table(pattern, universe, n_max, r_max, k)
    elif universe == PERMS:
        table = dp_perm_counts(pattern, n_max, r_max)
    else:
        table = dp_word_counts(pattern, k, n_max, r_max)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(table.to_csv())
    return table


# commands -----------------------------------------------------------------

def cmd_count(args) -> int:
    v = Pattern.parse(args.pattern)
    if args.universe == WORDS and args.k is None:
        raise UsageError("--k is required for words")
    r_max = args.r_max if args.r_max is not None else max(args.n_max - v.d + 1, 0)
    engine = "brute" if args.engine == "brute" else "dp"
    table = cached_table(v, args.universe, args.k, engine, args.n_max, r_max)
    table.check()
    status, verified = EXIT_OK, None
    if args.verify:
        cap = 9 if args.universe == PERMS else None
        n_hi = min(args.n_max, cap) if cap else args.n_max
        if args.universe == WORDS:
            while n_hi > 0 and args.k**n_hi > 10**7:
                n_hi -= 1
        oracle = brute_table(v, args.universe, n_hi, r_max, args.k)
        verified = all(tuple(table.rows[n]) == tuple(oracle.rows[n]) for n in range(1, n_hi + 1))
        if not verified:
            status = EXIT_FAIL
    if args.format == "csv":
        text = table.to_csv()
        if verified is not None:
            text += f"# verified against enumeration up to n={n_hi}: {verified}\n"
        _emit(args, text)
    else:
        payload = {"table": table.to_json_obj()}
        if verified is not None:
            payload["verified"] = verified
        _emit_json(args, payload)
    return status


def cmd_classify(args) -> int:
    part = wilf.classify(args.d, args.universe, args.n_max, args.r_max, args.k_max,
                         workers=args.workers)
    payload = {"partition": part.to_json_obj()}
    ok = wilf.closed_under(part, lambda p: Pattern(p.entries[::-1]))
    if args.check_sufficiency:
        rep = wilf.check_sufficiency(args.d, args.n_max, args.r_max, args.k_max)
        payload["sufficiency"] = rep.to_json_obj()
        ok &= rep.ok
    payload["invariants_hold"] = ok
    _emit_json(args, payload)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_recursion(args) -> int:
    v = Pattern.parse(args.pattern)
    lo, hi = parse_range(args.n)
    n_min = None if lo < 0 else lo
    th = args.theorem
    if th == "nonoverlap":
        rep = recursion.verify_nonoverlapping_recursion(v, hi, n_min, args.coefficients)
        extra = {"grading": recursion.grade_L(v, 2)} if args.grade else {}
    elif th == "words":
        if args.k is None:
            raise UsageError("--k is required for the word recursion")
        rep = recursion.verify_word_recursion(v, args.k, hi, n_min)
        extra = {"grading": recursion.grade_H(v, args.k, 2)} if args.grade else {}
    elif th == "monotone":
        rep = recursion.verify_monotone_recursion(v, hi, n_min)
        extra = {"grading": recursion.grade_M(v.d, 2)} if args.grade else {}
    else:
        rep = recursion.verify_sandwich(v, args.ell, hi, args.universe, args.k, n_min)
        extra = {}
    _emit_json(args, {"report": rep.to_json_obj(), **extra})
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_bounds(args) -> int:
    v = Pattern.parse(args.pattern)
    rep = growth.bound_report(v, args.ell, tuple(args.alpha_int), args.n_max)
    mineq = {al: growth.verify_mineq(v, al, range(1, args.mineq_k + 1)) for al in args.alpha_int}
    payload = {"bounds": rep.to_json_obj(),
               "mineq": {str(al): {"holds": m.holds,
                                   "rows": [{"k": r["k"], "lhs": str(r["lhs"]),
                                             "rhs": str(r["rhs"]), "holds": r["holds"]}
                                            for r in m.rows]}
                         for al, m in mineq.items()}}
    ok = not rep.violations() and all(m.holds for m in mineq.values())
    ok &= all(x <= 1e-10 for x in rep.residuals.values())
    payload["invariants_hold"] = ok
    _emit_json(args, payload)
    return EXIT_OK if ok else EXIT_FAIL


def _parse_alpha(text: str) -> Fraction:
    a = Fraction(text)
    if not 0 < a < 1:
        raise UsageError("--alpha must be a rational in (0, 1)")
    return a


def cmd_correlation(args) -> int:
    v = Pattern.parse(args.pattern)
    a = _parse_alpha(args.alpha)
    R = corr.build_R(v, args.k, a)
    sol = corr.expected_alpha_T1_split(v, args.k, a, args.t)
    system = corr.verify_T1_system(v, args.k, a, args.t)
    gen = [corr.genfunc_value(v, args.k, a, r, args.terms) for r in range(args.r + 1)]
    payload = {"matrix": R.to_json_obj(), "det_R": str(R.det()), "T1": sol.to_json_obj(),
               "system": system.to_json_obj(),
               "genfunc": [g.to_json_obj() for g in gen]}
    ok = system.holds and all(g.agrees for g in gen)
    payload["invariants_hold"] = ok
    _emit_json(args, payload)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(args) -> int:
    v = Pattern.parse(args.pattern)
    d = v.d
    out: dict = {"pattern": str(v)}
    ok = True
    table = cached_table(v, PERMS, None, "dp", args.n_max, 2)
    out["counts"] = table.to_json_obj()
    if d >= 3 and is_nonoverlapping(v):
        rep = recursion.verify_nonoverlapping_recursion(v, args.n_max)
        out["recursion"] = rep.to_json_obj()
        ok &= rep.holds
    elif d >= 3 and is_monotone(v):
        rep = recursion.verify_monotone_recursion(v, args.n_max)
        out["recursion"] = rep.to_json_obj()
        ok &= rep.holds
    if d >= 3:
        sand = recursion.verify_sandwich(v, 2, args.n_max)
        out["sandwich"] = sand.to_json_obj()
        ok &= sand.holds
    b = growth.bound_report(v, args.ell)
    out["bounds"] = b.to_json_obj()
    ok &= not b.violations()
    k = args.k or d + 1
    a = _parse_alpha(args.alpha)
    system = corr.verify_T1_system(v, k, a)
    out["correlation"] = {"k": k, "alpha": str(a), "system": system.to_json_obj(),
                          "E_alpha_T1": str(corr.expected_alpha_T1(v, k, a))}
    ok &= system.holds
    out["invariants_hold"] = ok
    _emit_json(args, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(verbose=True)
    failed = [c.number for c in results if not c.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failing: {failed}" if failed else ""))
    return EXIT_OK if not failed else EXIT_FAIL


# parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conseq-lab",
                                description="Exact consecutive-pattern counting and checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--deterministic", action="store_true",
                        help="omit timestamps so identical runs give identical bytes")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="count table for one pattern")
    c.add_argument("--pattern", required=True)
    c.add_argument("--universe", choices=[PERMS, WORDS], default=PERMS)
    c.add_argument("--k", type=int)
    c.add_argument("--n-max", type=int, required=True)
    c.add_argument("--r-max", type=int)
    c.add_argument("--engine", choices=["auto", "dp", "brute"], default="auto")
    c.add_argument("--verify", action="store_true", help="cross-check against enumeration")
    c.add_argument("--format", choices=["csv", "json"], default="csv")
    c.set_defaults(func=cmd_count)

    c = sub.add_parser("classify", parents=[common], help="candidate Wilf classes")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--universe", choices=[PERMS, WORDS], default=PERMS)
    c.add_argument("--n-max", type=int, default=8)
    c.add_argument("--r-max", type=int, default=0)
    c.add_argument("--k-max", type=int, default=5)
    c.add_argument("--check-sufficiency", action="store_true")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("recursion", parents=[common], help="exact recursion residuals")
    c.add_argument("--theorem", choices=["nonoverlap", "words", "monotone", "sandwich"],
                   required=True)
    c.add_argument("--pattern", required=True)
    c.add_argument("--n", default="20", help="range lo..hi, or just hi")
    c.add_argument("--k", type=int)
    c.add_argument("--ell", type=int, default=2)
    c.add_argument("--universe", choices=[PERMS, WORDS], default=PERMS)
    c.add_argument("--coefficients", choices=["oracle", "closed"], default="oracle")
    c.add_argument("--grade", action="store_true", help="grade closed forms against oracles")
    c.set_defaults(func=cmd_recursion)

    c = sub.add_parser("bounds", parents=[common], help="growth-rate estimate and bounds")
    c.add_argument("--pattern", required=True)
    c.add_argument("--ell", type=int, default=4)
    c.add_argument("--alpha-int", type=int, action="append")
    c.add_argument("--mineq-k", type=int, default=4)
    c.add_argument("--n-max", type=int, default=40)
    c.set_defaults(func=cmd_bounds)

    c = sub.add_parser("correlation", parents=[common], help="correlation matrix and transforms")
    c.add_argument("--pattern", required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--alpha", default="1/2")
    c.add_argument("--t", default="", help="history word (default: empty)")
    c.add_argument("--r", type=int, default=1, help="generating functions W_0..W_r")
    c.add_argument("--terms", type=int, default=60, help="series truncation N")
    c.set_defaults(func=cmd_correlation)

    c = sub.add_parser("report", parents=[common], help="everything for one pattern")
    c.add_argument("--pattern", required=True)
    c.add_argument("--n-max", type=int, default=16)
    c.add_argument("--ell", type=int, default=4)
    c.add_argument("--k", type=int)
    c.add_argument("--alpha", default="1/2")
    c.set_defaults(func=cmd_report)

    c = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    c.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if getattr(args, "alpha_int", "unset") is None:
        args.alpha_int = [2, 3]
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
