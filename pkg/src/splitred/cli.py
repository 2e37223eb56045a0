"""Command line: run scenarios, reproduce the golden table, sweep parameters to CSV."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import golden
from .errors import ParseError, SplitRedError
from .scenario import ScenarioError, dumps_report, instantiate, load_json, run_scenario, stringify

EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_PARSE = 2
EXIT_INCONCLUSIVE = 3

CSV_COLUMNS = [
    "scenario_id", "p", "d", "n", "v_p_n", "lifting_exponent", "status",
    "delta_swan", "bk_bound", "certificate", "runtime_ms",
]


class UsageError(Exception):
    pass


def _classify(exc: BaseException) -> int:
    if isinstance(exc, (ScenarioError, ParseError)):
        return EXIT_PARSE
    return EXIT_PRECONDITION


def _read_doc(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(exc.strerror or str(exc), path) from None
    return load_json(text, path)


def _execute(doc: dict, precision, timing: bool, unsafe_degree: bool = False):
    """(outcome, error, exit code) for one scenario; never raises for library errors."""
    if unsafe_degree and doc.get("analysis", {}).get("kind") == "conductor":
        doc = {**doc, "analysis": {**doc["analysis"], "unsafe_degree": True}}
    start = time.perf_counter()
    try:
        out = run_scenario(doc, precision)
    except (SplitRedError, ValueError, ArithmeticError) as exc:
        return None, exc, _classify(exc)
    if timing:
        out.row["runtime_ms"] = f"{(time.perf_counter() - start) * 1000:.3f}"
    return out, None, EXIT_OK


def _pmap(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _error_record(label: str, exc: BaseException, code: int) -> dict:
    return {"scenario": label, "error": type(exc).__name__, "message": str(exc), "exit_code": code}


# -- run ------------------------------------------------------------------------
def cmd_run(args) -> int:
    docs = []
    for path in args.scenarios:
        try:
            docs.append((path, _read_doc(path), None))
        except ScenarioError as exc:
            docs.append((path, None, exc))

    def work(item):
        path, doc, err = item
        if err is not None:
            return None, err, EXIT_PARSE
        if "params" in doc:
            doc = instantiate(doc, {})
        return _execute(doc, args.precision, args.timing, args.unsafe_degree)

    results = _pmap(work, docs, args.jobs)
    reports, code = [], EXIT_OK
    for (path, _, _), (out, err, c) in zip(docs, results):
        if err is not None:
            print(f"error: {path}: {err}", file=sys.stderr)
            if code == EXIT_OK:
                code = c
            if not args.keep_going:
                break
            reports.append(_error_record(path, err, c))
            continue
        reports.append(out.report)
        if out.inconclusive and args.strict and code == EXIT_OK:
            code = EXIT_INCONCLUSIVE
    if reports:
        payload = reports[0] if len(args.scenarios) == 1 else reports
        sys.stdout.write(dumps_report(payload) + "\n")
    return code


# -- reproduce-paper -----------------------------------------------------------------
def cmd_reproduce(args) -> int:
    if args.list:
        for name in golden.CASES:
            print(name)
        return EXIT_OK
    names = args.case or list(golden.CASES)
    unknown = [n for n in names if n not in golden.CASES]
    if unknown:
        raise UsageError(f"unknown case {unknown[0]!r}; use --list")
    chunks = _pmap(lambda n: golden.CASES[n](), names, args.jobs)
    rows = [r for chunk in chunks for r in chunk]
    print(golden.format_rows(rows))
    return EXIT_OK if all(r.ok for r in rows) else EXIT_PRECONDITION


# -- scan -------------------------------------------------------------------------
def parse_range(spec: str) -> tuple[str, list]:
    """``key=2..6`` (inclusive), ``key=2,3,5`` or ``key=`` (empty)."""
    if "=" not in spec:
        raise UsageError(f"--vary expects key=range, got {spec!r}")
    key, _, rng = spec.partition("=")
    key, rng = key.strip(), rng.strip()
    if not key:
        raise UsageError(f"--vary has an empty key: {spec!r}")
    if not rng:
        return key, []
    try:
        if ".." in rng:
            lo, _, hi = rng.partition("..")
            return key, list(range(int(lo), int(hi) + 1))
        return key, [_scalar(x) for x in rng.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad range {rng!r} for {key}") from None


def _scalar(x: str):
    x = x.strip()
    try:
        return int(x)
    except ValueError:
        return x


def _sort_key(values: tuple):
    return tuple((0, v, "") if isinstance(v, int) else (1, 0, str(v)) for v in values)


def _placeholders(obj, acc: set) -> set:
    from .scenario import _PLACEHOLDER

    if isinstance(obj, str):
        acc.update(_PLACEHOLDER.findall(obj))
    elif isinstance(obj, list):
        for x in obj:
            _placeholders(x, acc)
    elif isinstance(obj, dict):
        for k, v in obj.items():
            if k != "params":
                _placeholders(v, acc)
    return acc


def _csv_cell(v) -> str:
    if v is None:
        return ""
    v = stringify(v)
    return v if isinstance(v, str) else json.dumps(v)


def cmd_scan(args) -> int:
    try:
        template = _read_doc(args.template)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    ranges = [parse_range(s) for s in args.vary]
    known = set(template.get("params", {})) | _placeholders(template, set())
    for key, _ in ranges:
        if key not in known:
            raise UsageError(f"--vary key {key!r} is not a template parameter")
    keys = [k for k, _ in ranges]
    combos = sorted(itertools.product(*[v for _, v in ranges]), key=_sort_key) if ranges else [()]

    def work(values):
        doc = instantiate(template, dict(zip(keys, values)))
        base = doc.get("id", "scan")
        suffix = ",".join(f"{k}={v}" for k, v in zip(keys, values))
        if suffix:
            doc["id"] = f"{base}[{suffix}]"
        return doc["id"], _execute(doc, args.precision, args.timing, args.unsafe_degree)

    results = _pmap(work, combos, args.jobs)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    code = EXIT_OK
    for sid, (out, err, c) in results:
        if err is not None:
            print(f"error: {sid}: {err}", file=sys.stderr)
            if code == EXIT_OK:
                code = c
            if not args.keep_going:
                break
            writer.writerow({"scenario_id": sid, "status": f"Error:{type(err).__name__}"})
            continue
        row = {k: _csv_cell(out.row.get(k)) for k in CSV_COLUMNS}
        writer.writerow(row)
        if out.inconclusive and args.strict and code == EXIT_OK:
            code = EXIT_INCONCLUSIVE
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    return code


# -- entry point ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="override the tower precision")
    common.add_argument("--strict", action="store_true", help="exit 3 when any result is Inconclusive")
    common.add_argument("--keep-going", action="store_true", help="continue after a failing scenario")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker threads")
    common.add_argument("--timing", action="store_true", help="fill the runtime_ms column")
    common.add_argument("--unsafe-degree", action="store_true",
                        help="apply the Weil restriction Swan identity beyond degree p (unverified)")

    parser = argparse.ArgumentParser(prog="splitred", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="analyse scenario files, print JSON reports")
    run.add_argument("scenarios", nargs="+")
    run.set_defaults(func=cmd_run)

    rep = sub.add_parser("reproduce-paper", parents=[common], help="recompute the golden example table")
    rep.add_argument("--case", action="append", help="restrict to a case id (repeatable)")
    rep.add_argument("--list", action="store_true", help="list case ids")
    rep.set_defaults(func=cmd_reproduce)

    scan = sub.add_parser("scan", parents=[common], help="sweep template parameters into CSV")
    scan.add_argument("template")
    scan.add_argument("--vary", action="append", default=[], metavar="KEY=RANGE",
                      help="2..6 (inclusive), 2,3,5 or empty")
    scan.add_argument("--out", help="CSV path (default stdout)")
    scan.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
