"""Command-line surface: single c-DDT computations, reference-table sweeps
and the cross-verification suites.

Exit codes: 0 success, 1 usage error, 2 verification mismatch, 3 a sum that
must be an integer failed to round (numeric fault).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import cddt as _cddt
from . import gold as _gold
from . import tables as _tables
from . import verify as _verify
from .charsum import DEFAULT_TOL, NonIntegralError
from .field import Field, FieldError, parse_field
from .linpoly import parse_linpoly

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_NONINTEGRAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_config(path: str) -> dict:
    """key=value lines (# comments); keys use the long option names."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _build_function(K: Field, args) -> tuple[np.ndarray, _gold.GoldSpec | None, str]:
    if args.gold is not None:
        P = parse_linpoly(K, args.perturb) if args.perturb else parse_linpoly(K, "zero")
        spec = _gold.make_gold_spec(K, args.gold, P, 0)
        F = _gold.gold_table(K, spec)
        name = f"gold k={args.gold} perturb={args.perturb or 'zero'}"
        return F, spec, name
    if args.fn is None:
        raise ValueError("need --gold K or --fn NAME")
    fn = args.fn.strip().lower()
    if fn == "identity":
        return _cddt.identity_table(K), None, "identity"
    if fn == "inverse":
        return _cddt.power_map_table(K, K.q - 2), None, "inverse"
    if fn.startswith("pow:"):
        e = int(fn[4:])
        return _cddt.power_map_table(K, e), None, fn
    if fn.startswith("file:"):
        text = Path(fn[5:]).read_text()
        vals = json.loads(text) if text.lstrip().startswith("[") else \
            [int(t) for t in text.replace(",", " ").split()]
        return _cddt.as_fn_table(K, vals), None, fn
    raise ValueError(f"unknown function spec {args.fn!r}")


def _parse_c_range(K: Field, cspec: str) -> list[int] | int:
    s = cspec.strip().lower()
    if s == "all":
        return [c for c in K.elements() if c != 1]
    if s == "nonzero":
        return [c for c in K.elements() if c not in (0, 1)]
    c = int(s)
    if not 0 <= c < K.q:
        raise ValueError(f"c = {c} outside [0, {K.q})")
    return c


def _table_by_method(K, F, spec, c, method, tol):
    if method == "brute":
        return _cddt.cddt_brute(K, F, c).counts
    if method == "char":
        return _cddt.cddt_char_table(K, F, c, tol)
    if method == "closed":
        if spec is None:
            raise ValueError("--method closed requires --gold")
        return _gold.closed_table(K, _gold.GoldSpec(spec.k, spec.P, c), tol)
    raise ValueError(f"unknown method {method!r}")


def cmd_ddt(args) -> int:
    K = parse_field(args.field, args.modulus)
    F, spec, fname = _build_function(K, args)
    crange = _parse_c_range(K, args.c)
    tol = args.tol

    if args.method == "verify":
        cs = [crange] if isinstance(crange, int) else crange
        total = 0
        for c in cs:
            brute = _cddt.cddt_brute(K, F, c).counts
            char = _cddt.cddt_char_table(K, F, c, tol)
            routes = "char=brute"
            ok = (char == brute).all()
            if spec is not None:
                closed = _gold.closed_table(K, _gold.GoldSpec(spec.k, spec.P, c), tol)
                ok = ok and (closed == brute).all()
                routes = "char=brute=closed"
            if not ok:
                print(f"VERIFY FAILED at c={c}", file=sys.stderr)
                return EXIT_MISMATCH
            total += brute.size
        print(f"{routes} on {total} entries")
        return EXIT_OK

    if isinstance(crange, int):
        counts = _table_by_method(K, F, spec, crange, args.method, tol)
        t = _cddt.CDDT(crange, counts)
        if not t.row_sums_ok():
            raise NonIntegralError("row-sum check failed before write")
        if args.format == "csv":
            _emit(_cddt.cddt_to_csv(t, admissible_only=args.admissible_only), args.out)
        elif args.format == "json":
            obj = _cddt.cddt_to_json_obj(t)
            obj.update({"field": args.field, "function": fname, "method": args.method})
            _emit(json.dumps(obj, sort_keys=True) + "\n", args.out)
        else:
            _emit(_cddt.cddt_to_markdown(t), args.out)
        return EXIT_OK

    rows = []
    for c in crange:
        counts = _table_by_method(K, F, spec, c, args.method, tol)
        rows.append((c, _cddt.uniformity_of(counts, c)))
    beta = max(u for _, u in rows)
    if args.format == "csv":
        text = "c,max\n" + "\n".join(f"{c},{u}" for c, u in rows) + "\n"
    elif args.format == "json":
        text = json.dumps({"field": args.field, "function": fname, "beta": beta,
                           "per_c": [{"c": c, "max": u} for c, u in rows]},
                          sort_keys=True) + "\n"
    else:
        text = ("| c | max |\n|---|---|\n"
                + "\n".join(f"| {c} | {u} |" for c, u in rows)
                + f"\n\nbeta = {beta}\n")
    _emit(text, args.out)
    return EXIT_OK


def cmd_tables(args) -> int:
    degrees = [int(t) for t in args.n.split(",")] if args.n else list(_tables.SWEEP_DEGREES)
    chunks = []
    mismatches = []
    for n in degrees:
        grid = _tables.sweep_beta_grid(n, include_zero_c=not args.exclude_zero_c,
                                       threads=args.threads)
        if args.diff:
            mismatches.extend(_tables.compare_grid(n, grid))
        if args.format == "csv":
            chunks.append(_tables.render_grid_csv(n, grid))
        else:
            chunks.append(_tables.render_grid_markdown(n, grid))
    _emit("\n".join(chunks), args.out)
    if args.diff:
        if mismatches:
            for m in mismatches:
                print(f"DIFF n={m['n']} (i,j)=({m['i']},{m['j']}) k={m['k']}: "
                      f"computed {m['computed']}, expected {m['expected']}", file=sys.stderr)
            return EXIT_MISMATCH
        print(f"all cells match the reference tables (n = {degrees})", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = _verify.run_suites(args.suite or None, quick=args.quick, seed=args.seed,
                                tol=args.tol, variant=args.inject_fault)
    if args.json:
        _emit(json.dumps(report, sort_keys=True, indent=1) + "\n", args.out)
    else:
        lines = []
        for s in report["suites"]:
            status = "PASS" if s["passed"] else "FAIL"
            lines.append(f"{status} {s['name']}: {s['checked']} checks")
            for note in s["notes"]:
                lines.append(f"  note: {note}")
            for f in s["failures"][:5]:
                lines.append(f"  counterexample: {f}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report["passed"] else EXIT_MISMATCH


def build_parser() -> _Parser:
    parser = _Parser(prog="cdu", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ddt = sub.add_parser("ddt", help="compute one c-DDT or a per-c summary")
    p_ddt.add_argument("--field", required=True, help='field specifier, e.g. "2^6"')
    p_ddt.add_argument("--modulus", help="comma-separated digits c0,...,cn")
    p_ddt.add_argument("--gold", type=int, help="Gold exponent index k")
    p_ddt.add_argument("--perturb", help='linearized perturbation: "mono:i", "bin:i,j", coefficients or "zero"')
    p_ddt.add_argument("--fn", help="identity | inverse | pow:E | file:PATH")
    p_ddt.add_argument("--c", required=True, help='multiplier: an integer, "all" (c != 1) or "nonzero" (c not in {0,1})')
    p_ddt.add_argument("--method", default="brute", choices=["brute", "char", "closed", "verify"])
    p_ddt.add_argument("--format", default="csv", choices=["csv", "json", "md"])
    p_ddt.add_argument("--admissible-only", action="store_true",
                       help="drop a = 0 rows from exports when c = 1")
    p_ddt.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_ddt.add_argument("--threads", type=int, default=None)
    p_ddt.add_argument("--seed", type=int, default=2024)
    p_ddt.add_argument("--out", help="write output to a file instead of stdout")
    p_ddt.set_defaults(func=cmd_ddt)

    p_tab = sub.add_parser("tables", help="beta sweeps for the binomial-perturbed Gold grids")
    p_tab.add_argument("--n", help="comma list of degrees (default 3,4,5,6)")
    p_tab.add_argument("--format", default="md", choices=["md", "csv"])
    p_tab.add_argument("--diff", action="store_true",
                       help="compare against the frozen reference grids")
    p_tab.add_argument("--exclude-zero-c", action="store_true",
                       help="restrict the c range to c not in {0, 1}")
    p_tab.add_argument("--threads", type=int, default=None)
    p_tab.add_argument("--out", help="write output to a file instead of stdout")
    p_tab.set_defaults(func=cmd_tables)

    p_ver = sub.add_parser("verify", help="run the cross-verification suites")
    p_ver.add_argument("--suite", action="append", choices=sorted(_verify.SUITES),
                       help="repeatable; default runs every suite")
    p_ver.add_argument("--quick", action="store_true", help="reduced scopes for a smoke run")
    p_ver.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_ver.add_argument("--seed", type=int, default=2024)
    p_ver.add_argument("--json", action="store_true", help="machine-readable report")
    p_ver.add_argument("--inject-fault", choices=["t1", "grouping"],
                       help="run the three-way suite with a rejected formula variant")
    p_ver.add_argument("--out", help="write output to a file instead of stdout")
    p_ver.set_defaults(func=cmd_verify)

    for p in (p_ddt, p_tab, p_ver):
        p.add_argument("--config", help="key=value file of defaults for this command")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # apply --config as defaults, then reparse the full command line
    try:
        pre, _ = parser.parse_known_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        if getattr(pre, "config", None):
            defaults = _read_config(pre.config)
            sub_actions = [a for a in parser._subparsers._group_actions][0]
            subparser = sub_actions.choices[pre.command]
            known = {a.dest for a in subparser._actions}
            unknown = set(defaults) - known
            if unknown:
                raise ValueError(f"unknown config keys: {sorted(unknown)}")
            subparser.set_defaults(**defaults)
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    except NonIntegralError as exc:
        print(f"numeric fault: {exc}", file=sys.stderr)
        return EXIT_NONINTEGRAL
    except (FieldError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
