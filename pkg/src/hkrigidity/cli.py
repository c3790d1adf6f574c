"""Command line entry point.

Subcommands: rigidity (per-character certification sweep), invariants
(closed-form surface invariants), checks (consistency battery), cb (iterated
line-configuration census).  Report bodies are deterministic; timings are
printed to stderr only.  Exit codes: 0 success / rigid, 1 obstruction or
failed check, 2 unresolved problems, 3 usage error.
"""

from __future__ import annotations

import argparse
import sys
import time
from itertools import product

from . import cb_arrangements as cb
from . import replay as replay_mod
from . import reports
from .characters import Character, geometry_of, rank_exception_classify
from .invariants import (
    character_invariant_suite,
    chi_crosscheck,
    closed_form,
    euler_by_stratification,
    rigidity_report,
)
from .picard import verify_dependencies
from .registry import default_registry, default_registry_text, load_path
from .vanishing import ProofEngine, problem_of


class _Parser(argparse.ArgumentParser):
    """argparse signals usage errors with exit code 2; remap to 3 so code 2
    stays reserved for unresolved problems."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _parse_range(text: str):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"expected A..B, got {text!r}")
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _resolve_ns(parser, args, minimum=2):
    if args.n is not None and args.n_range is not None:
        parser.error("--n and --n-range are mutually exclusive")
    if args.n is not None:
        ns = [args.n]
    elif args.n_range is not None:
        try:
            ns = _parse_range(args.n_range)
        except ValueError as exc:
            parser.error(str(exc))
    else:
        parser.error("one of --n or --n-range is required")
    if ns[0] < minimum:
        parser.error(f"exponent must be at least {minimum}")
    return ns


def _add_n_args(sub):
    sub.add_argument("--n", type=int, default=None, help="single exponent")
    sub.add_argument(
        "--n-range", default=None, metavar="A..B", help="inclusive exponent range"
    )
    sub.add_argument("--json", action="store_true", help="emit JSON to stdout")


def build_parser() -> _Parser:
    parser = _Parser(prog="hkrigidity")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rig = subs.add_parser("rigidity", help="certify all characters at exponent n")
    _add_n_args(rig)
    mode = rig.add_mutually_exclusive_group()
    mode.add_argument(
        "--orbits",
        action="store_true",
        help="one proof per symmetry orbit (default)",
    )
    mode.add_argument(
        "--full", action="store_true", help="prove every character individually"
    )
    rig.add_argument("--jobs", type=int, default=1, help="workers for full mode")
    rig.add_argument(
        "--registry", default=None, metavar="PATH", help="alternate axiom registry"
    )
    rig.add_argument(
        "--max-superset",
        type=int,
        default=2,
        help="pole-enlargement budget in the prover",
    )
    rig.add_argument("--csv", action="store_true", help="emit the tally as CSV")

    inv = subs.add_parser("invariants", help="closed-form surface invariants")
    _add_n_args(inv)

    chk = subs.add_parser("checks", help="consistency battery")
    chk.add_argument(
        "--n-range", default="4..6", metavar="A..B", help="exponent range to sweep"
    )
    chk.add_argument("--json", action="store_true", help="emit JSON to stdout")
    chk.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    cbp = subs.add_parser("cb", help="iterated line-configuration census")
    _add_n_args(cbp)
    cbp.add_argument(
        "--emit-svg", default=None, metavar="PATH", help="write a picture of level n"
    )

    return parser


def _cmd_rigidity(parser, args) -> int:
    ns = _resolve_ns(parser, args)
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    if args.max_superset < 0:
        parser.error("--max-superset must be nonnegative")
    if args.registry is not None:
        registry = load_path(args.registry)
        with open(args.registry, "r", encoding="utf-8") as handle:
            registry_text = handle.read()
    else:
        registry, registry_text = default_registry(), default_registry_text()

    outs, payloads = [], []
    worst = 0
    for n in ns:
        t0 = time.perf_counter()
        report = rigidity_report(
            n,
            registry,
            orbit_mode=not args.full,
            jobs=args.jobs,
            depth_limit=args.max_superset,
            registry_text=registry_text,
        )
        print(
            f"rigidity n={n}: {time.perf_counter() - t0:.2f}s", file=sys.stderr
        )
        outs.append(report)
        payloads.append(reports.rigidity_payload(report))
        # obstruction outranks unresolved outranks rigid
        severity = {0: 0, 2: 1, 1: 2}[report.exit_code]
        if severity > {0: 0, 2: 1, 1: 2}[worst]:
            worst = report.exit_code
    if args.csv:
        sys.stdout.write(reports.rigidity_csv(outs))
    elif args.json:
        body = payloads[0] if len(payloads) == 1 else payloads
        sys.stdout.write(reports.to_json(body))
    else:
        for report in outs:
            sys.stdout.write(reports.rigidity_text(report))
    return worst


def _cmd_invariants(parser, args) -> int:
    ns = _resolve_ns(parser, args)
    payloads, texts = [], []
    for n in ns:
        inv = closed_form(n)
        strat = euler_by_stratification(n)
        payloads.append(reports.invariants_payload(inv, strat))
        texts.append(reports.invariants_text(inv, strat))
    if args.json:
        body = payloads[0] if len(payloads) == 1 else payloads
        sys.stdout.write(reports.to_json(body))
    else:
        sys.stdout.write("".join(texts))
    return 0 if all(p["noether_ok"] and p["stratification_ok"] for p in payloads) else 1


def _rank_exception_sweep(n: int) -> tuple:
    checked = failures = 0
    for digits in product(range(n), repeat=5):
        psi = Character(n, digits)
        if psi.is_zero:
            continue
        exc = rank_exception_classify(psi)
        if exc is None:
            continue
        checked += 1
        if exc.predicted_twists is not None:
            if geometry_of(psi).twist not in exc.predicted_twists:
                failures += 1
    return checked, failures


def _cmd_checks(parser, args) -> int:
    try:
        ns = _parse_range(args.n_range)
    except ValueError as exc:
        parser.error(str(exc))

    results = []

    t0 = time.perf_counter()
    table = replay_mod.build_table()
    if args.inject_fault:
        key = next(iter(sorted(table)))
        table = dict(table)
        table[key] += 1
    table_ok = replay_mod.validate_table(table)
    results.append(
        (
            "intersection_table",
            table_ok,
            "100 products recomputed" if table_ok else "table entry mismatch",
        )
    )

    dep = verify_dependencies()
    results.append(
        (
            "dependency_census",
            dep.passed and not dep.counterexamples,
            f"{dep.checked} subsets, {len(dep.counterexamples)} counterexamples",
        )
    )

    total = bad = 0
    for n in ns:
        checked, failures = _rank_exception_sweep(n)
        total += checked
        bad += failures
    results.append(
        ("rank_exceptions", bad == 0, f"{total} deficient characters, {bad} mismatches")
    )

    total = bad = 0
    for n in ns:
        checked, failures = character_invariant_suite(n)
        total += checked
        bad += len(failures)
    results.append(
        ("character_invariants", bad == 0, f"{total} characters, {bad} failures")
    )

    ok = all(chi_crosscheck(n) for n in ns)
    results.append(("chi_character_sum", ok, f"n in {ns[0]}..{ns[-1]}"))

    ok = all(
        euler_by_stratification(n) == closed_form(n).euler
        and (closed_form(n).K2 + closed_form(n).euler) % 12 == 0
        for n in range(2, 21)
    )
    results.append(("euler_and_noether", ok, "n in 2..20"))

    registry = default_registry()
    engine = ProofEngine(registry)
    replayed = failed = 0
    from .characters import orbit_representatives

    for psi, _ in orbit_representatives(min(ns)):
        prob = problem_of(psi)
        cert = engine.prove(prob)
        if cert.kind == "unresolved":
            continue
        res = replay_mod.replay(prob, cert, table=None, registry=registry)
        replayed += 1
        if not res.ok:
            failed += 1
    results.append(
        ("certificate_replay", failed == 0, f"{replayed} replayed, {failed} failed")
    )
    print(f"checks: {time.perf_counter() - t0:.2f}s", file=sys.stderr)

    if args.json:
        sys.stdout.write(reports.to_json(reports.checks_payload(results)))
    else:
        sys.stdout.write(reports.checks_text(results))
    return 0 if all(ok for _, ok, _ in results) else 1


def _cmd_cb(parser, args) -> int:
    ns = _resolve_ns(parser, args, minimum=0)
    if args.emit_svg is not None and len(ns) != 1:
        parser.error("--emit-svg needs a single --n")
    payloads, texts = [], []
    code = 0
    for n in ns:
        t0 = time.perf_counter()
        report = cb.census(n)
        verification = cb.verify_propositions(max(n, 1))
        print(f"cb n={n}: {time.perf_counter() - t0:.2f}s", file=sys.stderr)
        payloads.append(reports.cb_payload(report, verification))
        texts.append(reports.cb_text(report, verification))
        if not (report.pair_identity_ok and report.formula_ok and verification.ok):
            code = 1
    if args.emit_svg is not None:
        with open(args.emit_svg, "w", encoding="utf-8") as handle:
            handle.write(cb.render_svg(ns[0]))
    if args.json:
        body = payloads[0] if len(payloads) == 1 else payloads
        sys.stdout.write(reports.to_json(body))
    else:
        sys.stdout.write("".join(texts))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "rigidity":
        return _cmd_rigidity(parser, args)
    if args.command == "invariants":
        return _cmd_invariants(parser, args)
    if args.command == "checks":
        return _cmd_checks(parser, args)
    if args.command == "cb":
        return _cmd_cb(parser, args)
    parser.error(f"unknown command {args.command!r}")
    return 3


if __name__ == "__main__":
    sys.exit(main())
