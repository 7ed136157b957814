"""Command-line front end.

Subcommands: analyze, search, construct, sweep, verify. Exit codes:
0 success, 1 search found nothing, 2 input/parse error, 3 budget
exceeded, 4 theorem-suite failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import _kernels
from .catalog import builtin, parse_table, run_sweep
from .conditions import hp_report, sylow2_status, verify_theorems
from .core import LoopTable
from .errors import (
    BudgetExceeded,
    ContiguousUnitSubsequence,
    LoopplexError,
    NotAGroup,
    NotLatin,
    ParseError,
    ProductNotIdentity,
    RaggedInput,
    UnknownName,
)
from .plexes import (
    CellSelection,
    count_selections,
    find_selection,
    translate_partition,
    transversal_from_full_product,
)
from .products import (
    coset_profile,
    expression_leaves,
    format_expression,
    full_product_mask,
    product_set,
    witness,
)

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_THEOREM = 4

KIND_ALIASES = {
    "transversal": "transversal",
    "kplex": "k_plex",
    "rowkplex": "row_k_plex",
    "rrkplex": "regular_row_k_plex",
}


def _add_input_options(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", metavar="NAME",
                     help="catalog table, e.g. fig1, cyclic(6), dihedral(4)")
    src.add_argument("--table", metavar="PATH",
                     help="table file path, or '-' for standard input")


def _load_loop(args) -> LoopTable:
    if args.builtin:
        return builtin(args.builtin)
    if args.table == "-":
        return parse_table(sys.stdin.read())
    with open(args.table, "r", encoding="utf-8") as fh:
        return parse_table(fh.read())


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True))
        return
    for key, value in payload.items():
        print(f"{key}: {value}")


def _cells_1based(Q: LoopTable, sel: CellSelection) -> list[list[int]]:
    return [[r + 1, c + 1, e + 1] for r, c, e in sel]


def _cmd_analyze(args) -> int:
    Q = _load_loop(args)
    report = hp_report(Q, with_oracle=not args.no_oracle)
    ps1 = product_set(Q, 1, max_states=args.max_states)
    profile = coset_profile(Q, ps1)
    p2 = full_product_mask(Q, 2, max_states=args.max_states)
    counts: dict[str, int] = {}
    for kindspec in args.count or ():
        kind = KIND_ALIASES[kindspec]
        counts[kindspec] = count_selections(Q, kind, args.k,
                                            max_states=args.max_states)
    payload = {
        "n": Q.n,
        "group": Q.is_group(),
        "aq": report.associator_size,
        "dq": report.derived_size,
        "p1": sorted(x + 1 for x in report.full_products),
        "p2": sorted(x + 1 for x in range(Q.n) if p2 >> x & 1),
        "cond": {"A": report.a, "B": report.b, "C": report.c},
        "bc_counterexample": report.is_bc_counterexample,
        "derived_coset_hit_fully": profile.covers_all,
        "counts": counts,
    }
    if report.c_witness is not None:
        element, expr = report.c_witness
        payload["c_witness"] = {
            "element": element + 1,
            "expression": format_expression(Q, expr),
        }
    _emit(payload, args.json)
    return EXIT_OK


def _cmd_search(args) -> int:
    Q = _load_loop(args)
    kind = KIND_ALIASES[args.kind]
    k = args.k
    if args.mode == "count":
        count = count_selections(Q, kind, k, max_states=args.max_states)
        _emit({"kind": args.kind, "k": k or 1, "count": count}, args.json)
        return EXIT_OK
    sel = find_selection(Q, kind, k, max_states=args.max_states)
    if sel is None:
        _emit({"kind": args.kind, "k": k or 1, "found": False}, args.json)
        if not args.json:
            print("none")
        return EXIT_NOT_FOUND
    _emit({"kind": args.kind, "k": k or 1, "found": True,
           "cells": _cells_1based(Q, sel)}, args.json)
    return EXIT_OK


def _cmd_construct(args) -> int:
    G = _load_loop(args)
    if not G.is_group():
        raise NotAGroup("construct requires an associative table")
    if args.ordering:
        try:
            ordering = [int(tok) - 1 for tok in args.ordering.split(",")]
        except ValueError:
            raise ParseError("ordering must be comma-separated integers")
    else:
        ps = product_set(G, 1, witnesses=True, max_states=args.max_states)
        if 0 not in ps.achievable:
            _emit({"found": False,
                   "reason": "identity is not a full product of this group"},
                  args.json)
            return EXIT_NOT_FOUND
        ordering = expression_leaves(witness(ps, 0))
    sel = transversal_from_full_product(G, ordering)
    payload = {
        "ordering": [x + 1 for x in ordering],
        "transversal": _cells_1based(G, sel),
    }
    if args.partition:
        parts = translate_partition(G, sel)
        payload["partition"] = [_cells_1based(G, p) for p in parts]
    _emit(payload, args.json)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    records = run_sweep(
        args.order,
        checks=args.checks,
        up_to_iso=args.up_to_iso,
        workers=args.workers,
        suite_word_len=args.word_len,
        max_order=args.max_order,
    )
    for record in records:
        print(record.to_json())
    summary = {
        "loops": len(records),
        "bc_not_a": sum(1 for r in records
                        if r.cond[1] and r.cond[2] and not r.cond[0]),
        "suite_failures": sum(1 for r in records if r.suite != "pass"),
    }
    print(json.dumps({"summary": summary}, sort_keys=True), file=sys.stderr)
    return EXIT_THEOREM if summary["suite_failures"] else EXIT_OK


def _cmd_verify(args) -> int:
    Q = _load_loop(args)
    results = verify_theorems(Q, word_len=args.word_len,
                              max_states=args.max_states)
    failures = 0
    for res in results:
        status = "pass" if res.passed else ("skip" if res.skipped else "FAIL")
        detail = f"  ({res.details})" if res.details else ""
        print(f"{status}  {res.claim}{detail}")
        failures += 0 if res.ok else 1
    if args.json:
        print(json.dumps({
            "claims": [{"claim": r.claim, "passed": r.passed,
                        "skipped": r.skipped, "details": r.details}
                       for r in results]}, sort_keys=True))
    if Q.is_group():
        print(f"info  sylow2_status={sylow2_status(Q)}")
    print(f"info  kernel_backend={_kernels.BACKEND}")
    return EXIT_THEOREM if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopplex",
        description="Analyze finite loops: plexes, full products, HP conditions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="HP report, product sets, coset profile")
    _add_input_options(p)
    p.add_argument("--count", action="append", choices=sorted(KIND_ALIASES),
                   help="also count selections of this kind (repeatable)")
    p.add_argument("--k", type=int, default=None, help="plex width for --count")
    p.add_argument("--no-oracle", action="store_true",
                   help="skip the brute-force (B) cross-check")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-states", type=int, default=1 << 24)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("search", help="find or count one kind of selection")
    _add_input_options(p)
    p.add_argument("--kind", required=True, choices=sorted(KIND_ALIASES))
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--mode", choices=("find", "count"), default="find")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-states", type=int, default=1 << 24)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("construct",
                       help="regular row transversal of a group from a unit product")
    _add_input_options(p)
    p.add_argument("--ordering", metavar="SYMS",
                   help="comma-separated 1-based ordering with product 1")
    p.add_argument("--auto", action="store_true",
                   help="pull a unit-product ordering from the product DP")
    p.add_argument("--partition", action="store_true",
                   help="also emit the n-way partition")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-states", type=int, default=1 << 24)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("sweep", help="enumerate and analyze all loops of an order")
    p.add_argument("--order", type=int, action="append", required=True,
                   help="order to sweep (repeatable)")
    p.add_argument("--checks", choices=("hp", "all"), default="hp")
    p.add_argument("--up-to-iso", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--word-len", type=int, default=4)
    p.add_argument("--max-order", type=int, default=6)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="run the full theorem suite on one loop")
    _add_input_options(p)
    p.add_argument("--word-len", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-states", type=int, default=1 << 24)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "ordering", None) and getattr(args, "auto", False):
        print("error: --ordering and --auto are mutually exclusive", file=sys.stderr)
        return EXIT_PARSE
    if args.command == "construct" and not (args.ordering or args.auto):
        print("error: construct needs --ordering or --auto", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except ParseError as exc:
        pos = ""
        if exc.line is not None:
            pos = f" (line {exc.line}, column {exc.column})"
        print(f"error: {exc}{pos}", file=sys.stderr)
        return EXIT_PARSE
    except (NotLatin, RaggedInput, UnknownName, NotAGroup, ProductNotIdentity,
            ContiguousUnitSubsequence, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except LoopplexError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_THEOREM


if __name__ == "__main__":
    sys.exit(main())
