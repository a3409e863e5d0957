"""Command-line front end.

Exit codes: 0 verified / success, 1 identity failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .free_algebra import FormalSum, format_word
from .invariants import Tableau, inv, t_one, t_two
from .matrices import anti_part, build_W, build_Z, det, pfaffian
from .shuffle import half_shuffle, shuffle
from .signatures import PLPath, pair, path_signature
from .verify import IDENTITIES, UsageError, run

EXPANSIONS = ("shuffle", "halfshuffle", "inv", "detW", "pf-anti-W", "Z")


def _infer_d(texts: list[str]) -> int:
    d = 1
    for t in texts:
        s = FormalSum.parse(t, 255)
        for w in s:
            if w:
                d = max(d, max(w))
    return d


def _emit_sum(s: FormalSum, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps({"d": s.d, "terms": s.to_json_obj()}))
    else:
        print(s.to_text())


def _matrix_text(m) -> str:
    return "\n".join(" | ".join(str(x) for x in row) for row in m.rows)


def cmd_verify(args) -> int:
    options = {"slow": args.slow}
    if args.seed is not None:
        options["seed"] = args.seed
    if args.paths is not None:
        options["paths"] = args.paths
    if args.tol is not None:
        options["tol"] = args.tol
    report = run(args.identity, args.d, **options)
    if args.format == "json":
        print(json.dumps(report.as_dict(), sort_keys=True))
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def cmd_expand(args) -> int:
    expr = args.expr
    if expr in ("shuffle", "halfshuffle"):
        if len(args.operands) != 2:
            raise UsageError(f"{expr} takes exactly two operands")
        d = args.d or _infer_d(args.operands)
        a, b = (FormalSum.parse(t, d) for t in args.operands)
        result = shuffle(a, b) if expr == "shuffle" else half_shuffle(a, b)
    elif expr == "inv":
        if args.tableau:
            result = inv(Tableau.parse(args.tableau))
        elif args.d:
            result = inv(t_one(args.d))
        else:
            raise UsageError("inv needs --tableau or --d")
    else:
        if not args.d:
            raise UsageError(f"{expr} needs --d")
        d = args.d
        if expr == "detW":
            if args.matrix:
                print(_matrix_text(build_W(d)))
                return 0
            result = det(build_W(d))
        elif expr == "pf-anti-W":
            if d % 2:
                raise UsageError("pf-anti-W needs even d")
            m = anti_part(build_W(d))
            if args.matrix:
                print(_matrix_text(m))
                return 0
            result = pfaffian(m)
        else:
            if d % 2 == 0:
                raise UsageError("Z needs odd d")
            m = build_Z(d)
            if args.matrix:
                print(_matrix_text(m))
                return 0
            result = pfaffian(m)
    _emit_sum(result, args.format)
    return 0


_NAMED = [
    (re.compile(r"inv\(\s*t\s*1\s*,\s*(\d+)\s*\)$"), lambda m: inv(t_one(int(m.group(1))))),
    (re.compile(r"inv\(\s*t\s*2\s*,\s*(\d+)\s*\)$"), lambda m: inv(t_two(int(m.group(1))))),
    (re.compile(r"detW\(\s*(\d+)\s*\)$"), lambda m: det(build_W(int(m.group(1))))),
]


def parse_expression(text: str, d: int) -> FormalSum:
    """A formal sum in text form, or one of ``inv(t1,k)``, ``inv(t2,k)``, ``detW(k)``."""
    text = text.strip()
    for pattern, build in _NAMED:
        m = pattern.match(text)
        if m:
            s = build(m)
            if s.d > d:
                raise UsageError(f"{text} lives over d={s.d}, but the path has dimension {d}")
            return FormalSum(dict(s.items()), d)
    return FormalSum.parse(text, d)


def cmd_signature(args) -> int:
    if args.level < 0:
        raise UsageError("--level must be non-negative")
    path = PLPath.from_csv(args.path)
    sig = path_signature(path, args.level)
    if args.format == "json":
        terms = [{"word": list(w), "value": v} for w, v in sig.items()]
        print(json.dumps({"d": sig.d, "level": sig.level, "terms": terms}))
    else:
        for w, v in sig.items():
            print(f"{format_word(bytes(w))}: {v!r}")
    return 0


def cmd_pair(args) -> int:
    path = PLPath.from_csv(args.path)
    s = parse_expression(args.expr, path.d)
    level = s.max_degree() if args.level is None else args.level
    if level < s.max_degree():
        raise UsageError(f"--level {level} is below the expression degree {s.max_degree()}")
    value = pair(s, path_signature(path, level))
    if args.format == "json":
        print(json.dumps({"expr": args.expr, "value": value}))
    else:
        print(repr(value))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shuffle-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("verify", parents=[fmt], help="verify an identity")
    p.add_argument("identity", choices=sorted(IDENTITIES))
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--paths", type=int)
    p.add_argument("--slow", action="store_true", help="allow d=5 symbolic checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expand", parents=[fmt], help="print a canonical expansion")
    p.add_argument("expr", choices=EXPANSIONS)
    p.add_argument("operands", nargs="*", help="formal sums, e.g. 12 or '12 - 21'")
    p.add_argument("--d", type=int)
    p.add_argument("--tableau", help='rows separated by ";", entries by ","')
    p.add_argument("--matrix", action="store_true", help="print the matrix instead of its det/Pf")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("signature", parents=[fmt], help="signature of a piecewise-linear path")
    p.add_argument("path", help="CSV file, one point per row")
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("pair", parents=[fmt], help="pair an expression with a path signature")
    p.add_argument("expr")
    p.add_argument("path")
    p.add_argument("--level", type=int)
    p.set_defaults(func=cmd_pair)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
