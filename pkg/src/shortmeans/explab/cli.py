"""``explab`` command line: tables, weights, integrals, checks and grid runs.

Exit codes: 0 on success, 1 on invalid input, 2 when a check or gate fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from ..arith_tables import SieveSpec, build_table
from ..correlations import RemainderTerms, autocorrelation, lemma4_main
from ..divisor_mean import proximity
from ..errors import ShortMeansError
from ..integrals import modified_selberg, selberg, symmetry, weighted_selberg
from ..sporadic import sporadic_expansion, sporadic_value
from ..weights import TruncatedWeight, correlation_table, dft_rational
from .checks import SUITES, check_suite
from .runner import ExperimentConfig, derive_H, dumps, parse_mean, records_csv, run_grid, summarize

EXIT_OK, EXIT_INPUT, EXIT_GATE = 0, 1, 2


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, complex):
        return repr(v)
    if hasattr(v, "denominator") and getattr(v, "denominator", 1) != 1:
        return f"{v.numerator}/{v.denominator}"
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def cmd_table(args) -> int:
    t = build_table(args.kind, args.lo, args.hi)
    rows = ((n, _fmt(v)) for n, v in zip(range(t.lo, t.hi + 1), t.values.tolist()))
    _emit(_csv(["n", "value"], rows), args.out)
    return EXIT_OK


def cmd_weight(args) -> int:
    tw = TruncatedWeight(args.spec, args.H)
    if args.corr:
        table = correlation_table(tw)
        rows = [(int(a), _fmt(table.entry(int(a)))) for a in table.shifts]
        _emit(_csv(["a", "value"], rows), args.out)
    elif args.dft is not None:
        q = args.dft
        rows = []
        for j in range(q):
            z = complex(dft_rational(tw, j, q))
            rows.append((j, repr(z.real), repr(z.imag)))
        _emit(_csv(["j", "re", "im"], rows), args.out)
    else:
        raise ShortMeansError("choose --dft Q or --corr")
    return EXIT_OK


def cmd_sporadic(args) -> int:
    tw = TruncatedWeight(args.spec, args.H)
    direct = sporadic_value(tw, args.x, args.q)
    expan = sporadic_expansion(tw, args.x, args.q)
    diff = abs(complex(direct) - expan)
    _emit(f"direct={_fmt(direct)}\nexpansion={expan!r}\ndifference={diff!r}\n", args.out)
    return EXIT_OK


def cmd_integral(args) -> int:
    N, H = args.N, args.H
    f = build_table(args.f, N - H, 2 * N + H)
    t0 = time.perf_counter()
    weight = TruncatedWeight(args.weight, H)
    if weight.label == "sgn" and args.mean == "zero":
        res = symmetry(f, H, N)
    else:
        mode = parse_mean(args.mean, args.f)
        if weight.label == "u":
            res = selberg(f, H, N, mode)
        elif weight.label == "C":
            res = modified_selberg(f, H, N, mode)
        else:
            res = weighted_selberg(f, weight, N, mode)
    ms = (time.perf_counter() - t0) * 1e3 if args.timing else 0.0
    rec = {"N": N, "H": H, "f": res.f, "weight": weight.label, "mean": res.mean_mode,
           "value": res.value, "runtime_ms": round(ms, 3)}
    _emit(dumps(rec), args.out)
    return EXIT_OK


def _read_g(path: str) -> dict:
    g = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip() or row[0].strip().lower() == "q":
                continue
            raw = row[1].strip()
            g[int(row[0])] = int(raw) if raw.lstrip("-").isdigit() else float(raw)
    return g


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def cmd_correlation(args) -> int:
    s = SieveSpec(_read_g(args.g_file), args.Q)
    shifts = _parse_range(args.a)
    N = args.N
    lo = min([N + 1] + [N + 1 - a for a in shifts])
    hi = max([2 * N] + [2 * N - a for a in shifts])
    f = s.table(lo, hi)
    terms = RemainderTerms(s, N)
    rows = []
    for a in shifts:
        cf = autocorrelation(f, N, a)
        main = lemma4_main(s, N, a)
        rem = terms.remainder(a).real
        rows.append((a, _fmt(cf), _fmt(main), repr(rem), repr(float(cf) - float(main) - rem)))
    _emit(_csv(["a", "cf", "main", "remainder", "residual"], rows), args.out)
    return EXIT_OK


def cmd_divisor_mean(args) -> int:
    H = derive_H(args.N, args.theta)
    stride = None if args.stride == "auto" else int(args.stride)
    res = proximity(args.k, args.N, H, stride, args.normalization)
    rec = {"N": res.N, "H": res.H, "k": res.k, "stat": res.stat, "stride": res.stride}
    _emit(dumps(rec), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    rep = check_suite(args.suite, quick=args.quick)
    d = rep.as_dict()
    if not args.timing:
        d["runtime_s"] = 0.0
    _emit(dumps(d), args.out)
    return EXIT_OK if rep.passed else EXIT_GATE


def cmd_run(args) -> int:
    cfg = ExperimentConfig.from_dict(json.loads(Path(args.config).read_text()))
    records = run_grid(cfg)
    summary = summarize(cfg, records)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "records.csv").write_text(records_csv(records))
    (out / "summary.json").write_text(dumps(summary))
    return EXIT_OK if summary["passed"] else EXIT_GATE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="explab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="tabulate an arithmetic function as CSV n,value")
    t.add_argument("--kind", required=True)
    t.add_argument("--lo", type=int, required=True)
    t.add_argument("--hi", type=int, required=True)
    t.add_argument("--out")
    t.set_defaults(func=cmd_table)

    w = sub.add_parser("weight", help="DFT at j/q or the correlation table of a weight")
    w.add_argument("--spec", required=True)
    w.add_argument("--H", type=int, required=True)
    g = w.add_mutually_exclusive_group(required=True)
    g.add_argument("--dft", type=int, metavar="Q")
    g.add_argument("--corr", action="store_true")
    w.add_argument("--out")
    w.set_defaults(func=cmd_weight)

    s = sub.add_parser("sporadic", help="sporadic function: direct value and expansion")
    s.add_argument("--spec", required=True)
    s.add_argument("--H", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sporadic)

    i = sub.add_parser("integral", help="one short-interval mean-square as JSON")
    i.add_argument("--f", required=True)
    i.add_argument("--weight", default="sgn")
    i.add_argument("--N", type=int, required=True)
    i.add_argument("--H", type=int, required=True)
    i.add_argument("--mean", default="zero")
    i.add_argument("--timing", action="store_true", help="record wall-clock runtime_ms")
    i.add_argument("--out")
    i.set_defaults(func=cmd_integral)

    c = sub.add_parser("correlation", help="autocorrelation split into main term and remainder")
    c.add_argument("--g-file", required=True, help="CSV with rows q,g(q)")
    c.add_argument("--Q", type=int, required=True)
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--a", required=True, help="shifts as LO..HI or a comma list")
    c.add_argument("--out")
    c.set_defaults(func=cmd_correlation)

    d = sub.add_parser("divisor-mean", help="proximity statistic for d_3")
    d.add_argument("--k", type=int, default=3)
    d.add_argument("--N", type=int, required=True)
    d.add_argument("--theta", type=float, default=0.7)
    d.add_argument("--stride", default="auto")
    d.add_argument("--normalization", choices=("x", "2N"), default="x")
    d.add_argument("--out")
    d.set_defaults(func=cmd_divisor_mean)

    k = sub.add_parser("check", help="run a named check suite")
    k.add_argument("suite", choices=sorted(SUITES))
    k.add_argument("--quick", action="store_true", help="smaller grids")
    k.add_argument("--timing", action="store_true")
    k.add_argument("--out")
    k.set_defaults(func=cmd_check)

    r = sub.add_parser("run", help="run a grid experiment from a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ShortMeansError, OSError, json.JSONDecodeError) as exc:
        print(f"explab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
