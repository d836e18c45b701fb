"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 verification mismatch,
3 budget or capacity stop.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

from . import __version__, oracle
from .bench import run_bench
from .conumber_sieve import (
    DEFAULT_CHUNK_SIZE,
    DEFAULT_PHASE_BUDGET,
    CoProduct,
    circle_sum_test,
    coproduct_value,
    run_schedule,
    surviving_fraction,
    zeros_equivalence_check,
)
from .errors import VerificationError
from .modular_rep import (
    check_coprime_table,
    check_table1,
    nonblank_density,
    table1,
    theorem9_for_first,
    zeta_proportion,
)
from .wave_core import (
    CIRCLE,
    DEFAULT_MATERIALIZE_CAP,
    PLAIN,
    STAR,
    circular_product_many_term,
    term_at,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_BUDGET = 3

MIN_PHASE_BUDGET = 10**4
BUDGET_ENV = "WAVENUM_PHASE_BUDGET"
FORMATS = ("text", "json", "csv")

EQ16_NOTE = (
    "# note: phase k carries frequency k/6, so phases 29, 31, 35 show 29/6, 31/6, 35/6; "
    "a listing with 31/6, 37/6, 43/6 at those phases is a slip"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    limit: int | None = None
    iterations: int | None = None
    mode: str = "conservative"
    phase_budget: int = DEFAULT_PHASE_BUDGET
    output_format: str = "text"
    output_path: str | None = None
    chunk_size: int = DEFAULT_CHUNK_SIZE
    jobs: int = 1

    def __post_init__(self):
        if self.phase_budget < MIN_PHASE_BUDGET:
            raise UsageError(f"phase budget must be >= {MIN_PHASE_BUDGET}")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.chunk_size < 1:
            raise UsageError("--chunk-size must be >= 1")
        if self.output_format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--out", metavar="PATH", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    p.add_argument("--phase-budget", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wavenum", description="Wave-number prime identification")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("primes", help="run the window recursion and list primes")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--limit", type=int)
    g.add_argument("--iterations", type=int)
    p.add_argument("--mode", choices=("conservative", "maximal"), default="conservative")
    _common(p)

    p = sub.add_parser("schedule", help="largest identified prime per iteration")
    p.add_argument("--iterations", type=int, default=4)
    p.add_argument("--mode", choices=("conservative", "maximal"), default="maximal")
    _common(p)

    p = sub.add_parser("table1", help="modular co-number table")
    p.add_argument("--primes", type=_int_list, default=(2, 3, 5))
    p.add_argument("--check", action="store_true")
    _common(p)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--theorem9", action="store_true", help="only the residue-equality section")
    _common(p)

    p = sub.add_parser("bench", help="wheel enumeration versus baseline sieve")
    p.add_argument("--limit", type=int, default=10**6)
    p.add_argument("--wheel-primes", "--primes", dest="wheel_primes", type=_int_list, default=(2, 3, 5))
    _common(p)

    p = sub.add_parser("render", help="print principal parts as frequencies")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--wave", type=int, metavar="N")
    g.add_argument("--conumber", type=int, metavar="N")
    g.add_argument("--circle", type=int, metavar="N")
    g.add_argument("--product", type=_int_list, metavar="LIST")
    g.add_argument("--conumber-product", type=_int_list, metavar="LIST")
    g.add_argument("--eq16", action="store_true")
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--unreduced", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_MATERIALIZE_CAP)
    _common(p)
    return parser


def _phase_budget(args) -> int:
    if args.phase_budget is not None:
        return args.phase_budget
    env = os.environ.get(BUDGET_ENV)
    if env is None:
        return DEFAULT_PHASE_BUDGET
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be an integer, got {env!r}")


def _config(args) -> RunConfig:
    return RunConfig(
        subcommand=args.command,
        limit=getattr(args, "limit", None),
        iterations=getattr(args, "iterations", None),
        mode=getattr(args, "mode", "conservative"),
        phase_budget=_phase_budget(args),
        output_format=args.format,
        output_path=args.out,
        chunk_size=args.chunk_size,
        jobs=args.jobs,
    )


class Output:
    """Collects one command's output and renders it in the requested format."""

    def __init__(self, cfg: RunConfig, args):
        self.cfg = cfg
        self.args = args
        self.lines: list[str] = []
        self.data: dict = {}
        self.csv_header: list[str] | None = None
        self.csv_rows: list[list] = []

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def render(self) -> str:
        fmt = self.cfg.output_format
        if fmt == "json":
            config = {k: v for k, v in vars(self.args).items()}
            config["phase_budget"] = self.cfg.phase_budget
            doc = {
                "meta": {"version": __version__, "command": self.cfg.subcommand, "config": config},
                "data": self.data,
            }
            return json.dumps(doc, indent=2, default=_json_default) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            if self.csv_header:
                w.writerow(self.csv_header)
            w.writerows(self.csv_rows)
            return buf.getvalue()
        return "".join(s + "\n" for s in self.lines)

    def emit(self) -> None:
        text = self.render()
        if self.cfg.output_path:
            with open(self.cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()


def _json_default(o):
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _join(xs) -> str:
    return " ".join(str(x) for x in xs)


# -- primes / schedule -------------------------------------------------------


def _schedule_output(out: Output, result, limit: int | None) -> None:
    primes = [p for p in result.primes if limit is None or p <= limit]
    out.data = {
        "mode": result.mode,
        "windows": [r.to_dict(include_elapsed=False) for r in result.reports],
        "schedule": [e.to_dict() for e in result.entries],
        "primes": primes,
        "budget_exhausted": result.budget_exhausted,
    }
    out.csv_header = ["iteration", "lo", "hi", "surviving", "oracle_count", "verdict", "largest_prime", "count"]
    for r, e in zip(result.reports, result.entries):
        out.csv_rows.append(
            [r.iteration, r.lo, r.hi, _join(r.surviving_phases), len(r.oracle_primes), r.verdict, e.largest_prime, e.count]
        )
        out.line(f"window {r.iteration} [{r.lo}, {r.hi}): {len(r.surviving_phases)} phases, {r.verdict}")
        if len(r.surviving_phases) <= 50:
            out.line(f"  {_join(r.surviving_phases)}")
        line = f"  largest {e.largest_prime}, identified {e.count}"
        if e.estimate is not None:
            line += f", estimate {e.estimate:.2f}, relative error {e.relative_error:.4f}"
        out.line(line)
    if result.budget_exhausted:
        out.line(f"budget exhausted after {result.phases_scanned} phases")
    if len(primes) <= 200:
        out.line(f"primes: {_join(primes)}")
    else:
        out.line(f"primes: {len(primes)} identified, largest {primes[-1]}")


def cmd_primes(cfg: RunConfig, args) -> int:
    if args.limit is not None and args.limit < 3:
        raise UsageError("--limit must be >= 3")
    if args.iterations is not None and args.iterations < 1:
        raise UsageError("--iterations must be >= 1")
    out = Output(cfg, args)
    try:
        result = run_schedule(
            args.iterations,
            args.mode,
            phase_budget=cfg.phase_budget,
            jobs=cfg.jobs,
            chunk_size=cfg.chunk_size,
            until=args.limit,
        )
    except VerificationError as err:
        return _mismatch(out, err)
    _schedule_output(out, result, args.limit)
    out.emit()
    return EXIT_BUDGET if result.budget_exhausted else EXIT_OK


def cmd_schedule(cfg: RunConfig, args) -> int:
    if args.iterations < 1:
        raise UsageError("--iterations must be >= 1")
    out = Output(cfg, args)
    try:
        result = run_schedule(
            args.iterations, args.mode, phase_budget=cfg.phase_budget, jobs=cfg.jobs, chunk_size=cfg.chunk_size
        )
    except VerificationError as err:
        return _mismatch(out, err)
    out.data = {
        "mode": result.mode,
        "schedule": [e.to_dict() for e in result.entries],
        "budget_exhausted": result.budget_exhausted,
        "phases_scanned": result.phases_scanned,
    }
    out.csv_header = ["iteration", "lo", "hi", "largest_prime", "count", "estimate", "relative_error"]
    for e in result.entries:
        out.csv_rows.append([e.iteration, e.lo, e.hi, e.largest_prime, e.count, e.estimate, e.relative_error])
        line = f"iteration {e.iteration} [{e.lo}, {e.hi}): largest {e.largest_prime}, identified {e.count}"
        if e.estimate is not None:
            line += f", estimate {e.estimate:.2f}, relative error {e.relative_error:.4f}"
        out.line(line)
    if result.budget_exhausted:
        out.line(f"budget exhausted after {result.phases_scanned} phases (budget {cfg.phase_budget})")
    out.emit()
    return EXIT_BUDGET if result.budget_exhausted else EXIT_OK


def _mismatch(out: Output, err: VerificationError) -> int:
    rep = err.report
    out.data = {"error": str(err), "report": rep.to_dict(include_elapsed=False) if rep else None}
    out.csv_header = ["error", "offending_phase"]
    phase = rep.first_offending_phase if rep else None
    out.csv_rows = [[str(err), phase]]
    out.lines = [f"MISMATCH: {err}", f"offending phase: {phase}"]
    out.emit()
    return EXIT_MISMATCH


# -- table1 ------------------------------------------------------------------


def cmd_table1(cfg: RunConfig, args) -> int:
    primes = tuple(sorted(args.primes))
    out = Output(cfg, args)
    try:
        cols = table1(primes)
    except ValueError as err:
        raise UsageError(str(err))
    labels = [f"r{p}" for p in primes]
    if args.check:
        problems = check_table1(cols) if primes == (2, 3, 5) else check_coprime_table(primes, cols)
        nonblank = [c.k for c in cols if not c.product.is_blank]
        out.data = {"primes": primes, "check": not problems, "problems": problems, "nonblank": nonblank}
        out.csv_header = ["check", "problems"]
        out.csv_rows = [["PASS" if not problems else "FAIL", len(problems)]]
        if problems:
            out.lines = [f"FAIL {p}" for p in problems]
        else:
            out.line(f"PASS table {','.join(map(str, primes))}: {len(cols)} columns, product non-blank at {len(nonblank)} phases")
        out.emit()
        return EXIT_OK if not problems else EXIT_MISMATCH
    out.data = {
        "primes": primes,
        "columns": [
            {"k": c.k, "rows": dict(zip(labels, (r.display() for r in c.rows))), "product": c.product.display()}
            for c in cols
        ],
    }
    out.csv_header = ["k"] + labels + ["product"]
    out.csv_rows = [[c.k] + c.cells() for c in cols]
    out.line("\t".join(["k"] + [str(c.k) for c in cols]))
    for i, p in enumerate(primes):
        out.line("\t".join([f"*{p}"] + [c.rows[i].display() for c in cols]))
    out.line("\t".join(["U"] + [c.product.display() for c in cols]))
    out.emit()
    return EXIT_OK


# -- verify ------------------------------------------------------------------


class _Checks:
    def __init__(self):
        self.lines: list[str] = []
        self.records: list[dict] = []
        self.failed = False

    def add(self, status: str, name: str, detail: str) -> None:
        if status == "FAIL":
            self.failed = True
        self.lines.append(f"{status} {name}: {detail}")
        self.records.append({"status": status, "check": name, "detail": detail})


def _verify_theorem9(checks: _Checks, n_max: int) -> None:
    for N in range(1, n_max + 1):
        rep = theorem9_for_first(N)
        checks.add(
            "PASS" if rep.nonzero_matches_oracle else "FAIL",
            f"residue non-blank N={N}",
            f"non-blank phases in [{rep.lo}, {rep.window_hi}) equal the {len(rep.oracle_primes)} oracle primes",
        )
        checks.add(
            "INFO",
            f"residue equality N={N}",
            f"agreement={str(rep.agreement).lower()} on [{rep.lo}, {rep.hi}), "
            f"window agreement={str(rep.window_agreement).lower()} on [{rep.lo}, {rep.window_hi}), "
            f"weights idempotent={str(rep.weights_idempotent).lower()}",
        )


def cmd_verify(cfg: RunConfig, args) -> int:
    n_max = args.n_max
    if n_max < 1:
        raise UsageError("--n-max must be >= 1")
    out = Output(cfg, args)
    checks = _Checks()
    exhausted = False

    if args.theorem9:
        _verify_theorem9(checks, n_max)
    else:
        try:
            result = run_schedule(
                n_max, "conservative", phase_budget=cfg.phase_budget, jobs=cfg.jobs, chunk_size=cfg.chunk_size
            )
        except VerificationError as err:
            rep = err.report
            checks.add("FAIL", f"window N={rep.iteration}", f"offending phase {rep.first_offending_phase}")
            result = None
        if result is not None:
            for rep in result.reports:
                checks.add(
                    "PASS" if rep.matched else "FAIL",
                    f"window N={rep.iteration}",
                    f"[{rep.lo}, {rep.hi}) surviving phases equal {len(rep.oracle_primes)} oracle primes",
                )
            exhausted = result.budget_exhausted
            if exhausted:
                checks.add("STOP", "budget", f"window N={len(result.reports) + 1} exceeds phase budget {cfg.phase_budget}")

        if not exhausted and not checks.failed:
            _verify_rest(checks, n_max)

    out.data = {"checks": checks.records, "budget_exhausted": exhausted}
    out.csv_header = ["status", "check", "detail"]
    out.csv_rows = [[r["status"], r["check"], r["detail"]] for r in checks.records]
    out.lines = checks.lines
    out.emit()
    if checks.failed:
        return EXIT_MISMATCH
    return EXIT_BUDGET if exhausted else EXIT_OK


def _verify_rest(checks: _Checks, n_max: int) -> None:
    ps = oracle.first_primes(n_max + 1)

    bound = 10**4
    for N in range(1, n_max + 1):
        cp = CoProduct(tuple(ps[:N]))
        bad = [k for k in range(1, bound + 1) if coproduct_value(cp, k).is_zero != (math.gcd(k, cp.period) > 1)]
        checks.add("PASS" if not bad else "FAIL", f"zero phases N={N}", f"zero iff gcd(k, {cp.period}) > 1 for k <= {bound}")

    for N in range(2, ps[-1] + 1):
        ok = zeros_equivalence_check(N, bound)
        checks.add("PASS" if ok else "FAIL", f"prime-only zeros N={N}", f"natural and prime co-number zeros agree for k <= {bound}")

    for N in range(1, n_max + 1):
        first = ps[:N]
        hi = ps[N] ** 2
        bad = [k for k in range(first[-1] + 1, hi) if circle_sum_test(first, k) != oracle.is_prime(k)]
        checks.add(
            "PASS" if not bad else "FAIL",
            f"circle sum N={N}",
            f"({first[-1]}, {hi}) agrees with trial division" + (f", first disagreement {bad[0]}" if bad else ""),
        )

    depth = min(3, n_max)
    sched = run_schedule(depth, "maximal")
    s = [e.largest_prime for e in sched.entries]
    want = [7]
    for _ in range(depth - 1):
        want.append(oracle.largest_prime_below(want[-1] ** 2))
    checks.add("PASS" if s == want else "FAIL", "maximal schedule", f"largest primes {_join(s)}")

    for N in range(1, min(n_max, 6) + 1):
        first = ps[:N]
        z = zeta_proportion(first)
        ok = z == nonblank_density(first) == surviving_fraction(first)
        checks.add("PASS" if ok else "FAIL", f"density N={N}", f"{z} of period {math.prod(first)}")

    _verify_theorem9(checks, n_max)


# -- bench -------------------------------------------------------------------


def cmd_bench(cfg: RunConfig, args) -> int:
    if args.limit < 10**3:
        raise UsageError("--limit must be >= 1000")
    out = Output(cfg, args)
    if args.limit > cfg.phase_budget:
        out.lines = [f"limit {args.limit} exceeds phase budget {cfg.phase_budget}"]
        out.data = {"error": out.lines[0]}
        out.emit()
        return EXIT_BUDGET
    if any(not oracle.is_prime(p) for p in args.wheel_primes) or len(set(args.wheel_primes)) != len(args.wheel_primes):
        raise UsageError("--wheel-primes must be distinct primes")
    res = run_bench(args.limit, args.wheel_primes)
    rows = res.rows()
    out.data = {
        "rows": rows,
        "period_candidates": res.period_candidates,
        "period_check": res.period_check,
        "count_check": res.count_check,
    }
    out.csv_header = list(rows[0].keys())
    out.csv_rows = [list(r.values()) for r in rows]
    for r in rows:
        out.line(
            f"{r['method']}: {r['wall_seconds']:.6f} s, candidates {r['candidates_examined']}, primes {r['primes_found']}"
        )
    out.line(f"density {res.density}, period {res.period}")
    out.line(
        f"{'PASS' if res.period_check else 'FAIL'} period candidates {res.period_candidates} = density x period"
    )
    out.line(f"{'PASS' if res.count_check else 'FAIL'} wheel prime count equals sieve count")
    out.emit()
    return EXIT_OK if res.period_check and res.count_check else EXIT_MISMATCH


# -- render ------------------------------------------------------------------


def render_terms(args) -> tuple[list[str], list[str]]:
    """Rendered terms plus any trailing note lines."""
    notes: list[str] = []
    unreduced = args.unreduced
    if args.eq16:
        lengths, kinds, terms = [2, 3], [STAR, STAR], 36
        unreduced = True
        notes.append(EQ16_NOTE)
    elif args.wave is not None:
        lengths, kinds = [args.wave], [PLAIN]
    elif args.conumber is not None:
        lengths, kinds = [args.conumber], [STAR]
    elif args.circle is not None:
        lengths, kinds = [args.circle], [CIRCLE]
    elif args.product is not None:
        lengths, kinds = list(args.product), [PLAIN] * len(args.product)
    else:
        lengths, kinds = list(args.conumber_product), [STAR] * len(args.conumber_product)
    if any(n < 1 for n in lengths):
        raise UsageError("wavelengths must be >= 1")
    if not args.eq16:
        period = math.prod(lengths)
        terms = args.terms if args.terms is not None else period
    if terms < 1:
        raise UsageError("--terms must be >= 1")
    if terms > args.cap:
        raise CapExceeded(f"{terms} terms exceed the materialization cap {args.cap}")
    if len(lengths) == 1:
        vals = [term_at(lengths[0], k, kinds[0]) for k in range(1, terms + 1)]
    else:
        vals = [circular_product_many_term(lengths, k, kinds) for k in range(1, terms + 1)]
    return [v.display(unreduced) for v in vals], notes


class CapExceeded(Exception):
    pass


def cmd_render(cfg: RunConfig, args) -> int:
    out = Output(cfg, args)
    try:
        cells, notes = render_terms(args)
    except CapExceeded as err:
        out.lines = [str(err)]
        out.data = {"error": str(err)}
        out.emit()
        return EXIT_BUDGET
    out.data = {"terms": cells, "notes": notes}
    out.csv_header = ["k", "value"]
    out.csv_rows = [[k, v] for k, v in enumerate(cells, start=1)]
    out.line(" ".join(cells))
    for n in notes:
        out.line(n)
    out.emit()
    return EXIT_OK


COMMANDS = {
    "primes": cmd_primes,
    "schedule": cmd_schedule,
    "table1": cmd_table1,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = _config(args)
        return COMMANDS[args.command](cfg, args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"wavenum: error: {err}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
