"""Command-line interface.

Commands
--------
- ``classify``: run one parameter row and write row.json plus generator files
- ``rank``: print the rank of V x| G0 for a matgroup file
- ``verify``: report order, solvability, irreducibility, quasi-primitivity, rank
- ``tables``: recompute the table rows and compare with the published values;
  ``--budget full`` also reruns the reducible search in dimension 4
- ``gammal1``: write GammaL(1, p^d) as a matgroup file
- ``row30``: write the order 29040 group in GL(10, 3) as a matgroup file

Exit codes: 0 success, 1 invalid input or unwritable output, 2 budget
exhausted, 3 expectation mismatch (verify), 4 table mismatch (tables).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .config import BudgetExceeded, budgets, set_budgets
from .engine import MatGroup, is_solvable, rank_of_action
from .matlin import MatgroupFormatError, read_matgroup, write_matgroup

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_EXPECT = 3
EXIT_MISMATCH = 4


def _err(msg: str) -> None:
    print(f"solvrank: {msg}", file=sys.stderr)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _apply_budget_flags(args) -> None:
    set_budgets(None)
    b = budgets()
    if getattr(args, "brute_threshold", None):
        b = replace(b, brute=args.brute_threshold)
    if getattr(args, "enumeration_cap", None):
        b = replace(b, enumeration=args.enumeration_cap)
    if getattr(args, "orbit_cap", None):
        b = replace(b, orbit=args.orbit_cap)
    set_budgets(b)


def _ensure_dir(path: str) -> bool:
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        _err(f"cannot create {path}: {exc}")
        return False
    if not os.access(path, os.W_OK):
        _err(f"{path} is not writable")
        return False
    return True


def _write_text(path: str, text: str) -> bool:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        _err(f"cannot write {path}: {exc}")
        return False
    return True


def _load_group(path: str) -> MatGroup:
    with open(path, encoding="utf-8") as fh:
        field, n, gens = read_matgroup(fh.read())
    return MatGroup(gens, field=field, dim=n)


def _group_text(G: MatGroup) -> str:
    return write_matgroup(G.field, G.dim, G.gens)


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    from .classify import RowParameterError, classify_row, write_row

    try:
        rec = classify_row(args.q, args.m, args.p, args.k, args.kind, reducible_r=args.reducible_r)
    except RowParameterError as exc:
        _err(str(exc))
        return EXIT_INVALID
    print(f"rank={rec.rank} max_order={rec.max_order} num_groups={rec.num_groups} note={rec.note}")
    if args.out:
        if not _ensure_dir(args.out):
            return EXIT_INVALID
        try:
            write_row(rec, args.out)
        except OSError as exc:
            _err(f"cannot write {args.out}: {exc}")
            return EXIT_INVALID
    return EXIT_OK


def cmd_rank(args) -> int:
    G = _load_group(args.file)
    print(rank_of_action(G))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .classify import verify_structure
    from .modana import is_irreducible, is_quasiprimitive

    G = _load_group(args.file)
    order, rank = G.order, rank_of_action(G)
    print(f"order: {order}")
    print(f"solvable: {is_solvable(G)}")
    print(f"irreducible: {is_irreducible(G)}")
    print(f"quasi-primitive: {is_quasiprimitive(G)}")
    print(f"rank: {rank}")
    if order <= budgets().enumeration:
        s = verify_structure(G)
        if s.q > 1:
            print(f"structure: q={s.q} m={s.m} |Z|={s.z} |U|={s.u} |F|={s.f} |A|={s.a} "
                  f"dim W={s.w_dim} b={s.b}")
            for name, ok in s.checks.items():
                print(f"  {'ok ' if ok else 'FAIL'} {name}")
    failed = []
    if args.expect_rank is not None and rank != args.expect_rank:
        failed.append(f"rank {rank} != {args.expect_rank}")
    if args.expect_order is not None and order != args.expect_order:
        failed.append(f"order {order} != {args.expect_order}")
    for msg in failed:
        _err(f"expectation failed: {msg}")
    return EXIT_EXPECT if failed else EXIT_OK


def cmd_tables(args) -> int:
    from .classify import reducible_search, run_tables, tables_csv

    if args.out and not _ensure_dir(args.out):
        return EXIT_INVALID
    outcomes = run_tables(args.budget, jobs=args.jobs)
    text = tables_csv(outcomes)
    sys.stdout.write(text)
    for o in outcomes:
        if o.status == "SKIPPED":
            _err(f"row {o.no} skipped: {o.reason}")
    if args.out and not _write_text(os.path.join(args.out, "tables.csv"), text):
        return EXIT_INVALID
    matched = sum(o.status == "MATCH" for o in outcomes)
    attempted = sum(o.status != "SKIPPED" for o in outcomes)
    print(f"{matched}/{attempted} rows match", file=sys.stderr)
    novel = 0
    if args.budget == "full":
        for p in (3, 5, 7):
            rep = reducible_search(p)
            novel += len(rep.novel)
            print(f"reducible d=4 p={p}: {len(rep.survivors)} survivors, {len(rep.novel)} novel",
                  file=sys.stderr)
    return EXIT_OK if matched == attempted and not novel else EXIT_MISMATCH


def _write_fixture(G: MatGroup, out: str | None) -> int:
    text = _group_text(G)
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    parent = os.path.dirname(os.path.abspath(out))
    if not _ensure_dir(parent) or not _write_text(out, text):
        return EXIT_INVALID
    print(f"order={G.order} rank={rank_of_action(G)}")
    return EXIT_OK


def cmd_gammal1(args) -> int:
    from .classify import build_gammaL1

    return _write_fixture(build_gammaL1(args.p, args.d), args.out)


def cmd_row30(args) -> int:
    from .classify import construct_row30

    return _write_fixture(construct_row30(), args.out)


# ---------------------------------------------------------------------------
# parser


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--brute-threshold", type=_positive, help="largest |GL| scanned by brute force")
    p.add_argument("--enumeration-cap", type=_positive, help="largest group enumerated element-wise")
    p.add_argument("--orbit-cap", type=_positive, help="largest vector space handled by orbit code")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="solvrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify one parameter row")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--kind", choices=("plus", "minus", "odd"), required=True)
    p.add_argument("--reducible-r", type=_positive, default=1)
    p.add_argument("--jobs", type=_positive, default=1, help="accepted for symmetry; one row runs serially")
    p.add_argument("--out", help="directory for row.json and generator files")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("rank", help="rank of V x| G0 for a matgroup file")
    p.add_argument("file")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("verify", help="property report for a matgroup file")
    p.add_argument("file")
    p.add_argument("--expect-rank", type=int)
    p.add_argument("--expect-order", type=int)
    _add_budget_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", help="recompute the tables and compare")
    p.add_argument("--budget", choices=("quick", "full"), default="quick")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--out", help="directory for tables.csv")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("gammal1", help="write GammaL(1, p^d) in GL(d, p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--out", help="output file (default: standard output)")
    p.set_defaults(func=cmd_gammal1)

    p = sub.add_parser("row30", help="write the order 29040 group in GL(10, 3)")
    p.add_argument("--out", help="output file (default: standard output)")
    p.set_defaults(func=cmd_row30)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    _apply_budget_flags(args)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        _err(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except (MatgroupFormatError, ValueError, OSError) as exc:
        _err(str(exc))
        return EXIT_INVALID
    finally:
        set_budgets(None)


if __name__ == "__main__":
    sys.exit(main())
