"""``shulga`` command line.

Exit status is 0 on success, 1 when an audit or verifier fails (the
witness is printed), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import construction, growth
from .engine import decompose, decompose_real, from_record, to_record
from .errors import PrecisionExhausted, ShulgaError
from .rational import QuadraticIrrational, cf_expand, format_real, parse_real, qi_expand

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_input(text: str):
    try:
        return parse_real(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _plain(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, dict) and v or isinstance(v, list) and v and not all(isinstance(x, str) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(_plain(v, indent + 1).rstrip("\n"))
            elif isinstance(v, list):
                lines.append(f"{pad}{k}: [{', '.join(map(str, v))}]")
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                lines.append(f"{pad}- " + ", ".join(f"{k}={v}" for k, v in item.items()))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines) + "\n"


def _emit(fmt: str, obj, csv_table=None) -> str:
    if fmt == "json":
        return _json(obj)
    if fmt == "csv":
        if csv_table is None:
            raise UsageError("this subcommand has no CSV form; use json or plain")
        return _csv(*csv_table)
    return _plain(obj)


# ---------------------------------------------------------------------------
# subcommands: each returns (exit code, report object, optional csv table)
# ---------------------------------------------------------------------------

def cmd_expand(args):
    x = _parse_input(args.input)
    if isinstance(x, QuadraticIrrational):
        a0, digits, period = qi_expand(x, args.terms)
        rep = {"input": format_real(x), "a0": str(a0), "digits": [str(d) for d in digits],
               "period": None if period is None else [str(d) for d in period]}
    else:
        e = cf_expand(x)
        digits = e.digits[:args.terms] if args.terms else e.digits
        rep = {"input": format_real(x), "a0": str(e.a0), "digits": [str(d) for d in digits],
               "expansion": str(e)}
    table = (["index", "digit"], [[str(i), d] for i, d in enumerate([rep["a0"]] + rep["digits"])])
    return EXIT_OK, rep, table


def _decomp_table(rec):
    n = len(rec["c"])
    rows = [[str(k + 1), rec["b"][k], rec["c"][k]] for k in range(n)]
    return ["n", "b", "c"], rows


def cmd_decompose(args):
    x = _parse_input(args.input)
    try:
        m, res = decompose_real(x, args.max_steps)
    except PrecisionExhausted as exc:
        raise ShulgaError(f"precision exhausted at step {exc.step}") from None
    rep = growth.audit(res.alpha, res)
    rec = to_record(res, rep, integer_part=m)
    code = EXIT_OK if rep.ok and not res.anomaly else EXIT_FAIL
    if res.anomaly:
        rec["anomaly"] = "rational hit the step cap without terminating"
    return code, rec, _decomp_table(rec)


def cmd_audit(args):
    try:
        text = sys.stdin.read() if args.record == "-" else open(args.record, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"record is not JSON: {exc}") from None
    records = data if isinstance(data, list) else [data]
    out, code = [], EXIT_OK
    for rec in records:
        try:
            res = from_record(rec)
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"malformed record: {exc}") from None
        rep = growth.audit(res.alpha, res)
        again = decompose(res.alpha, max(res.steps, 1) if not res.terminated else None)
        drift = (again.b, again.c, again.terminated) != (res.b, res.c, res.terminated)
        ok = rep.ok and not drift
        code = code if ok else EXIT_FAIL
        out.append({"alpha": rec["alpha"], "ok": ok, "recomputation_drift": drift,
                    "audit": rep.flags()})
    report = out[0] if len(out) == 1 else out
    table = (["alpha", "ok", "recomputation_drift"],
             [[r["alpha"], str(r["ok"]).lower(), str(r["recomputation_drift"]).lower()] for r in out])
    return code, report, table


def cmd_scan(args):
    if args.q_max < 2:
        raise UsageError("--q-max must be >= 2")
    rows = []
    keep_rows = args.format == "csv"
    on_record = (lambda r: rows.append(r.csv_row())) if keep_rows else None
    try:
        _, summary = growth.scan(args.q_max, args.q_min, jobs=args.jobs, max_steps=args.max_steps,
                                 on_record=on_record, keep=False)
    except growth.ScanFailure as exc:
        rep = {"failure": f"{exc.p}/{exc.q}", "reason": exc.reason}
        return EXIT_FAIL, rep, (["failure", "reason"], [[rep["failure"], rep["reason"]]])
    return EXIT_OK, summary.to_dict(), (list(growth.ScanRecord.CSV_COLUMNS), rows)


def cmd_construct(args):
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")
    st = construction.generate(args.depth)
    window = construction.verify_window(st) if st.n >= 2 else construction.Verification(True)
    nesting = construction.verify_nesting(st)
    bounds = construction.verify_growth_bounds(st)
    margins = {r["level"]: r for r in window.rows}
    levels = []
    for n in range(1, st.n + 1):
        w = margins.get(str(n), {})
        levels.append({
            "n": str(n), "b": str(st.b[n - 1]), "c": str(st.c[n - 1]),
            "window_margin": w.get("margin"), "q_squared": w.get("q_squared"),
            "b_slack": str(st.b[n - 1] - (4 * n - 2)), "c_slack": str(5 * n - st.c[n - 1]),
        })
    rep = {
        "depth": str(st.n),
        "b": [str(x) for x in st.b],
        "c": [str(x) for x in st.c],
        "verify_window": {"ok": window.ok, "failures": window.failures},
        "verify_nesting": {"ok": nesting.ok, "failures": nesting.failures},
        "verify_growth_bounds": {"ok": bounds.ok, "failures": bounds.failures},
        "levels": levels,
    }
    header = ["n", "b", "c", "window_margin", "q_squared", "b_slack", "c_slack"]
    rows = [[lv[h] if lv[h] is not None else "" for h in header] for lv in levels]
    code = EXIT_OK if window.ok and nesting.ok and bounds.ok else EXIT_FAIL
    return code, rep, (header, rows)


def cmd_enumerate(args):
    try:
        found = growth.enumerate_prefixes(args.depth, args.b_cap, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = {"depth": str(args.depth), "b_cap": str(args.b_cap), "count": str(len(found)),
           "prefixes": [{"b": [str(x) for x in b], "c": [str(x) for x in c]} for b, c in found]}
    rows = [[" ".join(map(str, b)), " ".join(map(str, c))] for b, c in found]
    return EXIT_OK, rep, (["b", "c"], rows)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default=None,
                        help="output format (default: plain on a terminal, json otherwise)")
    common.add_argument("--out", help="write the report to this file")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for scan/enumerate")
    common.add_argument("--max-steps", type=int, default=None, help="step cap for decompositions")

    p = argparse.ArgumentParser(prog="shulga", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("expand", parents=[common], help="continued fraction expansion")
    e.add_argument("input")
    e.add_argument("--terms", type=int, default=20, help="digits to show (0 for all of a rational)")
    d = sub.add_parser("decompose", parents=[common], help="decompose and audit one real")
    d.add_argument("input")
    a = sub.add_parser("audit", parents=[common], help="re-audit a stored decomposition record")
    a.add_argument("record", help="JSON file, or - for stdin")
    s = sub.add_parser("scan", parents=[common], help="decompose every reduced p/q up to --q-max")
    s.add_argument("--q-max", type=int, required=True)
    s.add_argument("--q-min", type=int, default=1)
    c = sub.add_parser("construct", parents=[common], help="linear-growth construction")
    c.add_argument("--depth", type=int, default=100)
    n = sub.add_parser("enumerate", parents=[common], help="feasible staggered prefixes")
    n.add_argument("--depth", type=int, required=True)
    n.add_argument("--b-cap", type=int, required=True)
    return p


COMMANDS = {
    "expand": cmd_expand,
    "decompose": cmd_decompose,
    "audit": cmd_audit,
    "scan": cmd_scan,
    "construct": cmd_construct,
    "enumerate": cmd_enumerate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    fmt = args.format or ("plain" if args.out is None and sys.stdout.isatty() else "json")
    args.format = fmt
    if args.jobs < 1:
        print("shulga: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, report, table = COMMANDS[args.command](args)
        text = _emit(fmt, report, table)
    except UsageError as exc:
        print(f"shulga: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ShulgaError, OSError) as exc:
        print(f"shulga: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
