"""``ptl`` command line: powerful-number runs, range scans, solvers, traces.

Exit codes: 0 clean, 2 counterexample found, 64 usage error, 65 domain or
range error. JSON output is ``{"manifest": ..., "result": ...}``; the
manifest's ``result_digest`` is the SHA-256 of the canonical result JSON, so
timestamps never affect it.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import hashlib
import io
import json
import os
import sys
import tempfile
from typing import List, Optional, Sequence

from ptl import __version__
from ptl.arith import WIDTH_BITS, DomainError
from ptl.diophantine import cube_diff_solutions, mordell_points, MordellCurve, solve_quad_cubic, to_mordell
from ptl.powerful import consecutive_runs, powerful_up_to
from ptl.theorem import corollary_scan, stderr_progress, theorem_scan, trace_case
from ptl.verify import run_all

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 64, 65
EXIT_VERIFY_FAILED = 1
PROGRESS_THRESHOLD = 100_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def result_digest(result) -> str:
    return hashlib.sha256(canonical_json(result).encode("utf-8")).hexdigest()


def _now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


def build_manifest(argv: Sequence[str], params: dict, result, started: str) -> dict:
    return {
        "command": ["ptl", *argv],
        "parameters": params,
        "tool_version": __version__,
        "started": started,
        "finished": _now(),
        "width_mode": f"int{WIDTH_BITS}",
        "result_digest": result_digest(result),
    }


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ptl-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header: List[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, argv, params, result, started, csv_table=None) -> None:
    manifest = build_manifest(argv, params, result, started)
    if args.format == "csv":
        text = _csv(*csv_table)
        print(json.dumps(manifest, sort_keys=True), file=sys.stderr)
    else:
        text = json.dumps({"manifest": manifest, "result": result}, sort_keys=True, indent=2,
                          ensure_ascii=False) + "\n"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _jobs_default() -> int:
    env = os.environ.get("PTL_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"PTL_JOBS must be an integer, got {env!r}")
    return os.cpu_count() or 1


# --- subcommands ------------------------------------------------------------


def cmd_powerful(args, argv) -> int:
    started = _now()
    if args.limit < 1:
        raise UsageError("--limit must be >= 1")
    params = {"limit": args.limit, "run": args.run}
    if args.run is None:
        values = powerful_up_to(args.limit)
        result = {"kind": "powerful", "limit": args.limit, "count": len(values), "values": values}
        table = (["n"], [[v] for v in values])
        code = EXIT_OK
    else:
        if args.run < 2:
            raise UsageError("--run must be >= 2")
        starts = consecutive_runs(args.limit, args.run) if args.limit >= args.run else []
        result = {"kind": "runs", "limit": args.limit, "run_len": args.run, "count": len(starts),
                  "starts": starts}
        table = (["start"], [[s] for s in starts])
        code = EXIT_COUNTEREXAMPLE if args.run >= 3 and starts else EXIT_OK
    _emit(args, argv, params, result, started, table)
    return code


def cmd_scan(args, argv) -> int:
    started = _now()
    if args.x_from > args.x_to:
        raise UsageError("--from must be <= --to")
    jobs = args.jobs if args.jobs is not None else _jobs_default()
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    total = args.x_to - args.x_from + 1
    progress = stderr_progress() if total >= PROGRESS_THRESHOLD and not args.quiet else None
    scan = theorem_scan if args.kind == "theorem" else corollary_scan
    report = scan(args.x_from, args.x_to, jobs=jobs, progress=progress)
    result = report.to_dict()
    params = {"kind": args.kind, "from": args.x_from, "to": args.x_to, "jobs": jobs}
    stats = result["statistics"]
    rows = [["rejection", k, v] for k, v in stats["rejections"].items()]
    rows += [["rejected_on", k, v] for k, v in stats["rejected_on"].items()]
    rows += [["counterexample", c["x"], canonical_json(c)] for c in result["counterexamples"]]
    _emit(args, argv, params, result, started, (["section", "key", "value"], rows))
    return EXIT_COUNTEREXAMPLE if report.counterexamples else EXIT_OK


def cmd_solve(args, argv) -> int:
    started = _now()
    eq = args.equation
    if eq == "quadcubic":
        if args.s not in (1, -1) or args.k not in (1, 3):
            raise UsageError("quadcubic needs --s in {+1,-1} and --k in {1,3}")
        if args.bound < 1:
            raise UsageError("--bound must be >= 1")
        sol = solve_quad_cubic(args.s, args.k, args.bound, args.assume_complete)
        curve, amap = to_mordell(args.s, args.k)
        pairs = [list(p) for p in sol.solutions]
        result = {
            "equation": f"u^2 + ({args.s})u + 1 = {args.k} v^3",
            "bound": args.bound,
            "complete": sol.complete,
            "solutions": pairs,
            "u_values": sol.u_values,
            "mordell": {
                "k": curve.k,
                "map": {"x": f"{amap.x_scale}*v", "y": f"{amap.y_scale}*u + ({amap.y_shift})"},
                "steps": list(amap.steps),
                "images": [list(amap.forward(u, v)) for u, v in sol.solutions],
            },
        }
        params = {"equation": eq, "s": args.s, "k": args.k, "bound": args.bound,
                  "assume_complete": args.assume_complete}
        table = (["u", "v"], pairs)
    elif eq == "mordell":
        if args.k == 0:
            raise UsageError("--k must be nonzero")
        if args.bound < 1:
            raise UsageError("--bound must be >= 1")
        pts = [[pt.x, pt.y] for pt in mordell_points(MordellCurve(args.k), args.bound)]
        result = {"equation": f"y^2 = x^3 + ({args.k})", "bound": args.bound, "complete": False,
                  "points": pts}
        params = {"equation": eq, "k": args.k, "bound": args.bound}
        table = (["x", "y"], pts)
    else:
        if args.d not in (1, 2):
            raise UsageError("cubediff needs --d in {1,2}")
        sols = [list(p) for p in cube_diff_solutions(args.d)]
        result = {"equation": f"u^3 - v^3 = {args.d}", "complete": True,
                  "method": "factor-pair analysis, brute-force confirmed for |u|,|v| <= 1000",
                  "solutions": sols}
        params = {"equation": eq, "d": args.d}
        table = (["u", "v"], sols)
    _emit(args, argv, params, result, started, table)
    return EXIT_OK


def cmd_trace(args, argv) -> int:
    started = _now()
    trace = trace_case(args.x)
    result = trace.to_dict()
    rows = [["x", args.x], ["case", trace.case_label],
            ["minus_value", trace.minus_side.value],
            ["minus_reason", result["minus_side"]["reason"] or ""],
            ["plus_value", trace.plus_side.value],
            ["plus_reason", result["plus_side"]["reason"] or ""],
            ["verdict", canonical_json(result["verdict"])]]
    rows += [[k, v] for k, v in sorted(trace.congruence_facts.items())]
    _emit(args, argv, {"x": args.x}, result, started, (["field", "value"], rows))
    return EXIT_COUNTEREXAMPLE if trace.verdict.counterexample else EXIT_OK


def cmd_verify(args, argv) -> int:
    started = _now()
    if args.bound < 1:
        raise UsageError("--bound must be >= 1")
    checks = run_all(args.bound)
    result = {"bound": args.bound, "checks": [c.to_dict() for c in checks],
              "passed": all(c.passed for c in checks)}
    rows = [[c.name, c.cases, c.failures, c.passed] for c in checks]
    _emit(args, argv, {"bound": args.bound}, result, started,
          (["check", "cases", "failures", "passed"], rows))
    return EXIT_OK if result["passed"] else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report to FILE (atomically) instead of stdout")

    parser = _Parser(prog="ptl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ptl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("powerful", parents=[common], help="list powerful numbers or runs of them")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--run", type=int, help="report starts of runs of this many consecutive powerful numbers")
    p.set_defaults(func=cmd_powerful)

    p = sub.add_parser("scan", parents=[common], help="range scan for counterexamples")
    p.add_argument("kind", choices=("theorem", "corollary"))
    p.add_argument("--from", dest="x_from", type=int, required=True)
    p.add_argument("--to", dest="x_to", type=int, required=True)
    p.add_argument("--jobs", type=int, help="worker processes (default: $PTL_JOBS or CPU count)")
    p.add_argument("--quiet", action="store_true", help="no progress on stderr")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("solve", parents=[common], help="bounded equation solvers")
    p.add_argument("equation", choices=("quadcubic", "mordell", "cubediff"))
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--bound", type=int, default=100_000)
    p.add_argument("--assume-complete", action="store_true",
                   help="mark the quadcubic set complete on the strength of the published curve data")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("trace", parents=[common], help="case trace for one x")
    p.add_argument("x", type=int)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify-lemmas", parents=[common], help="run the bounded lemma checks")
    p.add_argument("--bound", type=int, default=100_000)
    p.set_defaults(func=cmd_verify)
    return parser


def _fill_defaults(args) -> None:
    if getattr(args, "equation", None) == "quadcubic" and args.k is None:
        raise UsageError("quadcubic needs --k")
    if getattr(args, "equation", None) == "mordell" and args.k is None:
        raise UsageError("mordell needs --k")
    if getattr(args, "equation", None) == "cubediff" and args.d is None:
        raise UsageError("cubediff needs --d")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _fill_defaults(args)
        return args.func(args, argv)
    except UsageError as exc:
        print(f"ptl: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"ptl: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
