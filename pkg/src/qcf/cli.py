"""Command line interface: ``qcf <command> ...`` or ``python3 -m qcf``.

Exit codes: 0 pass, 1 fail, 2 domain violation, 3 usage error or unknown id.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import os
import sys
from dataclasses import dataclass, replace

from mpmath import mpf, nstr

from . import catalog, harness
from .bauermuir import PRESETS
from .cfengine import iter_convergents
from .errors import BMDegenerate, DomainError, SamplingExhausted, SpecError, UnknownIdentity
from .precision import default_digits, to_complex, working_precision
from .qseries import ParameterPoint

EXIT_PASS, EXIT_FAIL, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2, 3
CONFIG_ENV = "QCF_CONFIG"
SYMBOL_FLAGS = {"q": "q", "a": "a", "b": "b", "lambda": "lam", "c": "c", "z": "z", "x": "x"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with "domain violation".
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


@dataclass(frozen=True)
class Settings:
    """Defaults that a config file may override; command flags win over both."""

    tol: str = "1e-15"
    precision: int | None = None
    max_terms: int = harness.Budget.max_terms
    max_quotients: int = harness.Budget.max_quotients
    wall_time: float = harness.Budget.wall_time
    workers: int = 1

    @property
    def budget(self) -> harness.Budget:
        return harness.Budget(self.max_terms, self.max_quotients, self.wall_time)


def load_settings(path: str | None) -> Settings:
    """Read a key=value file (``#`` comments allowed) into :class:`Settings`."""
    path = path or os.environ.get(CONFIG_ENV)
    settings = Settings()
    if not path:
        return settings
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path) as fh:
            parser.read_string("[qcf]\n" + fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    types = {"tol": str, "precision": int, "max_terms": int, "max_quotients": int,
             "wall_time": float, "workers": int}
    changes = {}
    for key, raw in parser["qcf"].items():
        if key not in types:
            raise UsageError(f"unknown config key {key!r} in {path}")
        try:
            changes[key] = types[key](raw)
        except ValueError:
            raise UsageError(f"bad value for {key} in {path}: {raw!r}") from None
    return replace(settings, **changes)


# -- argument helpers ------------------------------------------------------------


def _add_point_args(p):
    for flag in SYMBOL_FLAGS:
        p.add_argument(f"--{flag}", metavar="V", help=f"value of {flag} (real or complex, e.g. 0.3+0.1j)")
    p.add_argument("--point", metavar="K=V,...", help="parameters as one comma-separated list")
    p.add_argument("--seed", type=int, help="sample the point from this seed instead")


def _add_numeric_args(p):
    p.add_argument("--tol", help="pass threshold on rel_diff")
    p.add_argument("--precision", type=int, help="working precision in decimal digits")


def _explicit_point(args) -> dict:
    values = {}
    if args.point:
        for item in args.point.split(","):
            key, sep, val = item.partition("=")
            key = key.strip()
            key = SYMBOL_FLAGS.get(key, key)
            if not sep or key not in SYMBOL_FLAGS.values():
                raise UsageError(f"bad --point entry {item!r}")
            values[key] = val.strip()
    for flag, sym in SYMBOL_FLAGS.items():
        if getattr(args, flag) is not None:
            values[sym] = getattr(args, flag)
    try:
        return {k: to_complex(v) for k, v in values.items()}
    except (ValueError, TypeError):
        raise UsageError(f"cannot parse parameter values {values}") from None


def _resolve_point(args, id: str):
    """Explicit values win; otherwise the point for --seed (default 1)."""
    explicit = _explicit_point(args)
    if explicit and args.seed is not None:
        raise UsageError("give either explicit parameters or --seed, not both")
    if explicit:
        return ParameterPoint(explicit), None
    seed = 1 if args.seed is None else args.seed
    return catalog.sample_point(id, seed), seed


def _fmt(x, digits) -> str:
    x = to_complex(x)
    if x.imag == 0:
        return nstr(x.real, digits)
    sign = "+" if x.imag >= 0 else "-"
    return f"{nstr(x.real, digits)}{sign}{nstr(abs(x.imag), digits)}j"


def _point_text(point, digits=12) -> str:
    return ", ".join(f"{k}={_fmt(v, digits)}" for k, v in point.items())


def _report_code(passed: bool, flags) -> int:
    if passed:
        return EXIT_PASS
    return EXIT_DOMAIN if "domain-violation" in flags else EXIT_FAIL


# -- commands --------------------------------------------------------------------


def cmd_list(args, settings):
    rows = catalog.list_identities()
    width = max(len(r[0]) for r in rows)
    for id, citation, params in rows:
        print(f"{id:<{width}}  {','.join(params):<16}  {citation}")
    return EXIT_PASS


def cmd_export(args, settings):
    print(catalog.export_text())
    return EXIT_PASS


def cmd_verify(args, settings):
    precision = args.precision or settings.precision
    with working_precision(precision) as dps:
        rec = catalog.get(args.id)
        point, seed = _resolve_point(args, rec.id)
        report = harness.verify(rec.id, point, mpf(args.tol or settings.tol), settings.budget, dps, seed=seed)
    if args.json:
        print(harness.to_json(report.to_dict(), "verify", report.precision))
    else:
        status = "PASS" if report.passed else "FAIL"
        print(f"{status} {report.id}  [{_point_text(report.point)}]")
        if report.rel_diff is not None:
            print(f"  lhs      = {_fmt(report.lhs, 25)}")
            print(f"  rhs      = {_fmt(report.rhs, 25)}")
            print(f"  rel_diff = {nstr(report.rel_diff, 5)}  (tol {nstr(report.tol, 3)})")
        if report.flags:
            print(f"  flags: {', '.join(report.flags)}")
        if report.message:
            print(f"  {report.message}")
    return _report_code(report.passed, report.flags)


def cmd_sweep(args, settings):
    if args.id == "all":
        ids = [i for i in catalog.ids() if not args.real_q or catalog.get(i).real_q]
    else:
        ids = [catalog.get(args.id).id]
    precision = args.precision or settings.precision or default_digits()
    tol = mpf(args.tol or settings.tol)
    workers = args.workers or settings.workers
    sweeps = [harness.sweep(i, args.seeds, tol, settings.budget, precision, args.real_q, workers) for i in ids]
    if args.json:
        print(harness.to_json([s.to_dict() for s in sweeps], "sweep", precision))
    elif args.csv:
        out = csv.writer(sys.stdout)
        out.writerow(["id", "seed", "pass", "rel_diff", "flags"])
        for s in sweeps:
            for r in s.reports:
                rd = "" if r.rel_diff is None else nstr(r.rel_diff, 6)
                out.writerow([r.id, r.seed, int(r.passed), rd, ";".join(r.flags)])
    else:
        for s in sweeps:
            worst = "-" if s.worst_rel_diff is None else nstr(s.worst_rel_diff, 3)
            print(f"{s.id:<18} pass-rate {s.pass_rate:6.1%}  worst rel_diff {worst:<10}  {s.wall_time:7.2f}s")
    reports = [r for s in sweeps for r in s.reports]
    if all(r.passed for r in reports):
        return EXIT_PASS
    failing_flags = {f for r in reports if not r.passed for f in r.flags}
    only_domain = all("domain-violation" in r.flags for r in reports if not r.passed)
    return EXIT_DOMAIN if only_domain and "domain-violation" in failing_flags else EXIT_FAIL


def cmd_eval_cf(args, settings):
    with working_precision(args.precision or settings.precision) as dps:
        rec = catalog.get(args.id)
        sides = [s for s in (rec.lhs, rec.rhs) if s.kind == "cf"]
        if not sides:
            raise UsageError(f"{rec.id} has no continued-fraction side")
        point, _ = _resolve_point(args, rec.id)
        bad = rec.violations(point)
        if bad:
            print(f"domain violation: {'; '.join(bad)}", file=sys.stderr)
            return EXIT_DOMAIN
        cf = catalog.build_side(sides[0], point)
        out = csv.writer(sys.stdout)
        out.writerow(["n", "A_n", "B_n", "f_n"])
        for n, A, B, _, _ in iter_convergents(cf, args.n):
            f = _fmt(A / B, dps) if B != 0 else "inf"
            out.writerow([n, _fmt(A, dps), _fmt(B, dps), f])
    return EXIT_PASS


def cmd_bm(args, settings):
    if args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}; choose from {', '.join(sorted(PRESETS))}")
    precision = args.precision or settings.precision
    with working_precision(precision) as dps:
        explicit = _explicit_point(args)
        if explicit:
            point = ParameterPoint(explicit)
        else:
            point = catalog.sample_point("gcf1", 1 if args.seed is None else args.seed)
        tol = mpf(args.tol) if args.tol else None
        try:
            report = harness.bm_verify(args.preset, point, args.steps, args.check_n, tol, dps, settings.budget)
        except BMDegenerate as exc:
            print(f"FAIL {args.preset}: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
    if args.json:
        print(harness.to_json(report.to_dict(), "bm", report.precision))
    else:
        print(f"{'PASS' if report.passed else 'FAIL'} {report.preset}  [{_point_text(report.point)}]")
        rows = [
            (f"approximant contract (n <= {report.N})", report.contract_max),
            (f"prefix vs target ({report.steps} steps)", report.prefix_max),
            ("chained value vs source", report.soundness),
        ]
        width = max(len(label) for label, _ in rows)
        for label, value in rows:
            print(f"  {label:<{width}}  {nstr(value, 3)}")
        for n, f in enumerate(report.tail_offsets, start=1):
            print(f"  f_{n} = {'diverged' if f is None else _fmt(f, 15)}")
        if report.flags:
            print(f"  flags: {', '.join(report.flags)}")
    return EXIT_PASS if report.passed else EXIT_FAIL


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcf", description="Numerical verification of q-continued-fraction identities.")
    parser.add_argument("--config", help=f"key=value defaults file (also ${CONFIG_ENV})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="identity table").set_defaults(func=cmd_list)
    sub.add_parser("export", help="plain-text dump of the registry").set_defaults(func=cmd_export)

    p = sub.add_parser("verify", help="check one identity at one point")
    p.add_argument("id")
    _add_point_args(p)
    _add_numeric_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="verify over seeded points")
    p.add_argument("id", help="identity id or 'all'")
    p.add_argument("--seeds", type=int, default=10)
    _add_numeric_args(p)
    p.add_argument("--workers", type=int)
    p.add_argument("--real-q", action="store_true", help="draw the base real and positive")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eval-cf", help="approximant trace as CSV")
    p.add_argument("id")
    p.add_argument("--n", type=int, default=20)
    _add_point_args(p)
    p.add_argument("--precision", type=int)
    p.set_defaults(func=cmd_eval_cf)

    p = sub.add_parser("bm", help="run and check a Bauer-Muir chain preset")
    p.add_argument("preset", help=", ".join(sorted(PRESETS)))
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--check-n", type=int, default=40)
    _add_point_args(p)
    _add_numeric_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bm)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(args.config)
        return args.func(args, settings)
    except (UsageError, UnknownIdentity, ValueError) as exc:
        if isinstance(exc, (DomainError, SpecError)):
            print(f"domain violation: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(f"qcf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SamplingExhausted as exc:
        print(f"qcf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
