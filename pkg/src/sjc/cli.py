"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or parameter error,
3 scale guard refused the run (retry with --long).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

from . import analysis
from .codes import (
    CodeParams,
    ScaleGuardError,
    code_size_formula,
    enumerate_code,
    exclusions,
    is_self_complementary,
    k_formula,
    self_complementary_expected,
    valid_params,
    validate,
)
from .forms import eps_str, parse_eps
from .gf2 import ParameterError

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_SCALE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default too
        raise UsageError(message)


def _emit(payload, out: str | None = None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def resolve_threads(flag: int | None) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("SJC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"SJC_THREADS={env!r} is not an integer") from None
    return os.cpu_count() or 1


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, choices=("nd", "ti"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--epsprime")
    p.add_argument("--delta", type=int)
    p.add_argument("--force", action="store_true", help="build excluded degenerate cases")


def _params(args) -> CodeParams:
    eps = parse_eps(args.eps)
    if args.family == "nd":
        if args.epsprime is None:
            if args.delta is not None:
                raise UsageError("nd codes take --epsprime, not --delta")
            # the exclusion check below names the real problem if there is one
            p = CodeParams("nd", args.n, args.d, eps, epsprime=1)
            if exclusions(p) and not args.force:
                validate(p)
            raise UsageError("nd codes need --epsprime + or -")
        return CodeParams("nd", args.n, args.d, eps, epsprime=parse_eps(args.epsprime))
    if args.delta is None:
        raise UsageError("ti codes need --delta 0 or 1")
    if args.epsprime is not None:
        raise UsageError("ti codes take --delta, not --epsprime")
    return CodeParams("ti", args.n, args.d, eps, delta=args.delta)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sjc", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=None)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("params", help="closed-form parameters of a code")
    _add_code_args(p)

    p = sub.add_parser("build", help="enumerate a code and write it as JSON")
    _add_code_args(p)
    p.add_argument("--out")
    p.add_argument("--long", action="store_true")

    p = sub.add_parser("mindist", help="exact minimum distance")
    _add_code_args(p)
    p.add_argument("--strategy", choices=analysis.STRATEGIES, default="fixed-first")
    p.add_argument("--long", action="store_true")

    p = sub.add_parser("verify-sit", help="check strong incidence-transitivity")
    _add_code_args(p)
    p.add_argument("--long", action="store_true")

    p = sub.add_parser("orbits", help="subgroup orbit partitions of Q^eps")
    p.add_argument("--case", required=True, choices=("c2", "c3", "c8"))
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--eps", required=True)

    p = sub.add_parser("table", help="sweep every valid parameter set up to n")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--csv")
    p.add_argument("--long", action="store_true")
    return parser


def _cmd_params(args) -> int:
    p = _params(args)
    broken = validate(p, force=args.force)
    payload = {"params": p.to_json(), "valid": not broken}
    if broken:
        payload["conforming"] = False
        payload["exclusions"] = broken
    else:
        payload.update(
            k=k_formula(p),
            code_size=code_size_formula(p),
            self_complementary=self_complementary_expected(p),
        )
    _emit(payload)
    return EXIT_OK


def _cmd_build(args) -> int:
    p = _params(args)
    code = enumerate_code(p, allow_long=args.long, force=args.force)
    _emit(code.to_json(), args.out)
    if args.out:
        print(json.dumps({"params": p.to_json(), "codewords": len(code), "out": args.out}))
    return EXIT_OK


def _cmd_mindist(args) -> int:
    p = _params(args)
    analysis.check_scale(p.n, args.long, "minimum distance")
    code = enumerate_code(p, allow_long=args.long, force=args.force)
    rep = analysis.min_distance(code, args.strategy, resolve_threads(args.threads))
    _emit(rep.to_json())
    if rep.conjecture_expected is not None and not rep.agrees:
        print(
            f"FAILED: minimum distance {rep.min_distance} differs from expected "
            f"{rep.conjecture_expected}",
            file=sys.stderr,
        )
        return EXIT_FAILED
    return EXIT_OK


def _cmd_verify_sit(args) -> int:
    p = _params(args)
    analysis.check_scale(p.n, args.long, "SIT verification", default_max=3, long_max=4)
    code = enumerate_code(p, allow_long=args.long, force=args.force)
    rep = analysis.sit_verify(code, allow_long=args.long)
    _emit(rep.to_json())
    if not rep.passed:
        print(f"FAILED: incidence-transitivity check is {rep.status}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _cmd_orbits(args) -> int:
    eps = parse_eps(args.eps)
    if args.case == "c2":
        if args.n is None or args.t is None:
            raise UsageError("c2 needs --n and --t")
        part = analysis.c2_orbits(args.n, args.t, eps)
        ok = [m for m, s in enumerate(part.sizes) if s] == analysis.c2_nonempty_expected(args.t, eps)
        ok = ok and "parts are single orbits" in part.notes
    elif args.case == "c3":
        if args.m is None or args.b is None:
            raise UsageError("c3 needs --m and --b")
        part = analysis.c3_orbits(args.m, args.b, eps)
        want = analysis.c3_expected_sizes(args.m, args.b, eps)
        ok = part.sizes == [1] + [want[k] for k in sorted(want)]
    else:
        if args.n is None:
            raise UsageError("c8 needs --n")
        part = analysis.c8_orbits(args.n, eps)
        ok = part.sizes == analysis.c8_expected_sizes(args.n, eps)
        ok = ok and "parts are single orbits" in part.notes
    payload = {
        "case": args.case,
        "eps": eps_str(eps),
        "parts": [{"label": q.label, "size": q.size} for q in part.parts],
        "total": part.total(),
        "certified": ok,
        "notes": part.notes,
    }
    _emit(payload)
    if not ok:
        print("FAILED: orbit sizes differ from the expected values", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _cmd_table(args) -> int:
    if args.nmax < 2:
        raise UsageError("--nmax must be at least 2")
    analysis.check_scale(args.nmax, args.long, "table")
    threads = resolve_threads(args.threads)
    rows = [analysis.table_row(p, threads, args.long) for p in valid_params(args.nmax)]
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=analysis.CSV_COLUMNS, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        print(json.dumps({"rows": len(rows), "csv": args.csv}))
    else:
        _emit(rows)
    if not all(r["agrees"] for r in rows):
        print("FAILED: some minimum distances differ from the expected values", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


COMMANDS = {
    "params": _cmd_params,
    "build": _cmd_build,
    "mindist": _cmd_mindist,
    "verify-sit": _cmd_verify_sit,
    "orbits": _cmd_orbits,
    "table": _cmd_table,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be positive")
        return COMMANDS[args.verb](args)
    except (UsageError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScaleGuardError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_SCALE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
