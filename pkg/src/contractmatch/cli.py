"""Command-line interface.

Subcommands operate on instance files (see :mod:`contractmatch.instancefile`):

- ``validate``  — parse a file and check the declared choice functions
- ``solve``     — run the offer/rejection iteration and report the outcome
- ``lattice``   — enumerate stable agreements and their meet/join structure
- ``market``    — run money-economy checks (no-shortage, monotonicity, prices)
- ``oracle``    — dump the brute-force stable-agreement catalog as JSON
- ``query``     — evaluate revealed-preference questions on one side

Exit codes: 0 success, 1 a requested check found violations, 2 the input
could not be parsed or is semantically invalid, 3 an exhaustive check was
refused because the instance exceeds the configured size bounds.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import limits
from .aggregation import AggregateChoice
from .coherence import CoherenceReport, check_coherent
from .engine import Instance, join, meet, run
from .errors import (
    DomainError,
    ParseError,
    PreconditionError,
    SizeBoundError,
    SpecError,
)
from .instancefile import load
from .market import (
    check_money_monotone,
    check_no_shortage,
    check_two_prices,
)
from .oracle import StableSetCatalog, brute_glb, brute_lub, enumerate_stable_agreements
from .preference import (
    COHERENCE_CHECKED,
    COHERENCE_UNKNOWN,
    closure,
    indifferent,
    prefers,
)
from .sets import format_mask


def _emit(args: argparse.Namespace, payload: dict, human_lines: Sequence[str]) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        for line in human_lines:
            print(line)


def _subset_names(instance: Instance, mask: int) -> list[str]:
    return sorted(instance.names[i] for i in _bits(mask))


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _coherence_payload(report: CoherenceReport, names: Sequence[str]) -> dict:
    def fmt(violations):
        return [v.describe(names) for v in violations]

    return {
        "coherent": report.coherent,
        "contraction": fmt(report.contraction),
        "rejection_consistency": fmt(report.irc),
        "substitutes": fmt(report.substitutes),
        "path_independence": fmt(report.path_independence),
    }


def _validate_side(
    instance: Instance, side: int
) -> tuple[dict[str, Any], list[str], bool]:
    """Check one side's choice functions.  Returns (payload, lines, ok)."""
    f = instance.side(side)
    payload: dict[str, Any] = {}
    lines: list[str] = []
    ok = True
    if isinstance(f, AggregateChoice):
        agents: dict[str, Any] = {}
        for part in f.parts:
            local_names = [instance.names[cid] for cid in part.contract_ids]
            report = check_coherent(part.spec)
            agents[part.agent] = _coherence_payload(report, local_names)
            status = "coherent" if report.coherent else "NOT coherent"
            lines.append(f"side{side}/{part.agent}: {status}")
            for v in report.all_violations():
                lines.append(f"  {v.describe(local_names)}")
            ok = ok and report.coherent
        payload["agents"] = agents
        # The aggregation theorems make per-agent checks sufficient; rerun
        # on the whole side only when it is small enough to be free.
        if instance.n <= limits.pairwise_bound() and instance.n <= limits.exhaustive_bound():
            whole = check_coherent(f)
            payload["aggregate_coherent"] = whole.coherent
            ok = ok and whole.coherent
    else:
        report = check_coherent(f)
        payload = _coherence_payload(report, instance.names)
        status = "coherent" if report.coherent else "NOT coherent"
        lines.append(f"side{side}: {status}")
        for v in report.all_violations():
            lines.append(f"  {v.describe(instance.names)}")
        ok = report.coherent
    return payload, lines, ok


def cmd_validate(args: argparse.Namespace) -> int:
    loaded = load(args.file)
    instance = loaded.instance
    payload: dict[str, Any] = {"contracts": list(instance.names)}
    lines = [f"{len(instance.names)} contracts"]
    ok = True
    for side in (1, 2):
        side_payload, side_lines, side_ok = _validate_side(instance, side)
        payload[f"side{side}"] = side_payload
        lines.extend(side_lines)
        ok = ok and side_ok
    if loaded.economy is not None:
        shortage = check_no_shortage(loaded.economy)
        money = check_money_monotone(loaded.economy)
        payload["market"] = {
            "no_shortage": shortage.ok,
            "missing_tuples": list(shortage.missing),
            "money_monotone": money.ok,
            "money_monotone_violations": [
                v.describe(instance.names) for v in money.violations
            ],
        }
        lines.append(f"market: no-shortage {'ok' if shortage.ok else 'FAILED'}")
        lines.append(f"market: money-monotone {'ok' if money.ok else 'FAILED'}")
        ok = ok and shortage.ok and money.ok
    payload["ok"] = ok
    lines.append("valid" if ok else "INVALID")
    _emit(args, payload, lines)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    loaded = load(args.file)
    instance = loaded.instance
    result = run(instance, proposer=args.proposer)
    chosen = _subset_names(instance, result.chosen)
    payload: dict[str, Any] = {
        "proposer": result.proposer,
        "chosen": chosen,
        "iterations": result.trace.iterations,
        "agreement": result.agreement.holds,
        "stable": result.stability.stable,
    }
    if result.stability.blocking_contract is not None:
        payload["blocking_contract"] = instance.names[result.stability.blocking_contract]
    lines = [
        f"chosen: {format_mask(result.chosen, instance.names)}",
        f"iterations: {result.trace.iterations}",
        f"agreement: {'yes' if result.agreement.holds else 'no'}",
        f"stable: {'yes' if result.stability.stable else 'no'}",
    ]
    if result.stability.blocking_contract is not None:
        lines.append(
            f"blocking contract: {instance.names[result.stability.blocking_contract]}"
        )
    if args.trace:
        steps = []
        for j in range(result.trace.iterations):
            steps.append(
                {
                    "step": j,
                    "pool": _subset_names(instance, result.trace.pools[j]),
                    "offer": _subset_names(instance, result.trace.offers[j]),
                    "accepted": _subset_names(instance, result.trace.accepted[j]),
                }
            )
        payload["trace"] = steps
        for step in steps:
            lines.append(
                f"  step {step['step']}: pool {{{', '.join(step['pool'])}}}"
                f" offer {{{', '.join(step['offer'])}}}"
                f" accepted {{{', '.join(step['accepted'])}}}"
            )
    _emit(args, payload, lines)
    if args.require_stable and not result.stability.stable:
        return 1
    return 0


# ---------------------------------------------------------------------------
# lattice
# ---------------------------------------------------------------------------


def cmd_lattice(args: argparse.Namespace) -> int:
    loaded = load(args.file)
    instance = loaded.instance
    catalog = enumerate_stable_agreements(instance)
    sets = [_subset_names(instance, s) for s in catalog.sets]
    payload: dict[str, Any] = {
        "count": len(catalog),
        "stable_agreements": sets,
        "below": [list(row) for row in catalog.below],
    }
    lines = [f"{len(catalog)} stable agreement(s)"]
    for i, s in enumerate(sets):
        lines.append(f"  [{i}] {{{', '.join(s)}}}")
    mismatches: list[str] = []
    meets: list[dict[str, Any]] = []
    joins: list[dict[str, Any]] = []
    for i, a in enumerate(catalog.sets):
        for j_, b in enumerate(catalog.sets):
            if j_ < i:
                continue
            m = meet(instance, a, b)
            j = join(instance, a, b)
            meets.append({"a": i, "b": j_, "result": _subset_names(instance, m)})
            joins.append({"a": i, "b": j_, "result": _subset_names(instance, j)})
            oracle_m = brute_glb(catalog, a, b)
            oracle_j = brute_lub(catalog, a, b)
            if oracle_m != m:
                mismatches.append(
                    f"meet([{i}],[{j_}]) = {format_mask(m, instance.names)}"
                    f" but the brute-force bound is"
                    f" {None if oracle_m is None else format_mask(oracle_m, instance.names)}"
                )
            if oracle_j != j:
                mismatches.append(
                    f"join([{i}],[{j_}]) = {format_mask(j, instance.names)}"
                    f" but the brute-force bound is"
                    f" {None if oracle_j is None else format_mask(oracle_j, instance.names)}"
                )
    payload["meet"] = meets
    payload["join"] = joins
    payload["verified"] = not mismatches
    payload["mismatches"] = mismatches
    npairs = len(catalog) * (len(catalog) + 1) // 2
    if mismatches:
        lines.append(f"meet/join MISMATCH against brute force on {len(mismatches)} pair(s):")
        lines.extend(f"  {m}" for m in mismatches)
    else:
        lines.append(f"meet/join verified against brute force on {npairs} pair(s)")
    _emit(args, payload, lines)
    return 1 if mismatches else 0


# ---------------------------------------------------------------------------
# market
# ---------------------------------------------------------------------------


def cmd_market(args: argparse.Namespace) -> int:
    loaded = load(args.file)
    if loaded.economy is None:
        raise ParseError("this file has no market section", "market")
    economy = loaded.economy
    instance = loaded.instance
    checks = {args.check} if args.check != "all" else {"no-shortage", "money", "two-prices"}
    payload: dict[str, Any] = {}
    lines: list[str] = []
    failed = False
    premises_ok = True

    catalog: StableSetCatalog | None = None
    if checks & {"no-shortage", "two-prices"}:
        catalog = enumerate_stable_agreements(instance)
        payload["stable_agreements"] = [
            _subset_names(instance, s) for s in catalog.sets
        ]
        lines.append(f"{len(catalog)} stable agreement(s)")

    if "no-shortage" in checks:
        report = check_no_shortage(economy, catalog.sets if catalog else ())
        payload["no_shortage"] = {
            "ok": report.ok,
            "missing": [list(key) for key in report.missing],
            "unmatched": [
                {
                    "agreement": _subset_names(instance, agreement),
                    "contract": instance.names[cid],
                }
                for agreement, cid in report.unmatched
            ],
        }
        lines.append(f"no-shortage: {'ok' if report.ok else 'FAILED'}")
        for key in report.missing:
            lines.append(f"  no contract for tuple {key}")
        for agreement, cid in report.unmatched:
            lines.append(
                f"  {instance.names[cid]} has no spare copy outside the stable"
                f" agreement {format_mask(agreement, instance.names)}"
            )
        premises_ok = premises_ok and report.ok
        failed = failed or not report.ok

    if "money" in checks:
        report = check_money_monotone(economy)
        payload["money_monotone"] = {
            "ok": report.ok,
            "violations": [v.describe(instance.names) for v in report.violations],
        }
        lines.append(f"money-monotone: {'ok' if report.ok else 'FAILED'}")
        for v in report.violations:
            lines.append(f"  {v.describe(instance.names)}")
        premises_ok = premises_ok and report.ok
        failed = failed or not report.ok

    if "two-prices" in checks:
        assert catalog is not None
        advisory = not premises_ok or not (checks >= {"no-shortage", "money"})
        results = []
        any_gap = False
        for s in catalog.sets:
            report = check_two_prices(economy, s)
            any_gap = any_gap or not report.ok
            results.append(
                {
                    "agreement": _subset_names(instance, s),
                    "ok": report.ok,
                    "violations": [
                        v.describe(instance.names, economy.price_grid)
                        for v in report.violations
                    ],
                }
            )
        payload["two_prices"] = {"advisory": advisory, "agreements": results}
        for entry in results:
            status = "ok" if entry["ok"] else ("gap (advisory)" if advisory else "FAILED")
            lines.append(
                f"two-prices on {{{', '.join(entry['agreement'])}}}: {status}"
            )
            for v in entry["violations"]:
                lines.append(f"  {v}")
        if any_gap and not advisory:
            failed = True

    payload["ok"] = not failed
    _emit(args, payload, lines)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------


def cmd_oracle(args: argparse.Namespace) -> int:
    loaded = load(args.file)
    instance = loaded.instance
    catalog = enumerate_stable_agreements(instance)
    payload = {
        "count": len(catalog),
        "stable_agreements": [_subset_names(instance, s) for s in catalog.sets],
        "below": [list(row) for row in catalog.below],
    }
    lines = [f"{len(catalog)} stable agreement(s)"]
    for i, s in enumerate(catalog.sets):
        lines.append(f"  [{i}] {format_mask(s, instance.names)}")
    for i in range(len(catalog)):
        for j in range(len(catalog)):
            if i != j and catalog.below[i][j]:
                lines.append(f"  [{i}] is below [{j}] for side 1")
    _emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------
# query
# ---------------------------------------------------------------------------


def _parse_name_list(raw: str, instance: Instance, flag: str) -> int:
    mask = 0
    if raw.strip() == "":
        return 0
    for piece in raw.split(","):
        name = piece.strip()
        if name not in instance.names:
            raise ParseError(f"unknown contract name {name!r}", flag)
        mask |= 1 << instance.names.index(name)
    return mask


def cmd_query(args: argparse.Namespace) -> int:
    loaded = load(args.file)
    instance = loaded.instance
    f = instance.side(args.side)
    a = _parse_name_list(args.set_a, instance, "-A")
    coherence = COHERENCE_UNKNOWN
    if instance.n <= limits.pairwise_bound() and instance.n <= limits.exhaustive_bound():
        if check_coherent(f).coherent:
            coherence = COHERENCE_CHECKED

    if args.op == "closure":
        result = closure(f, a)
        payload = {
            "op": "closure",
            "side": args.side,
            "set": _subset_names(instance, a),
            "result": _subset_names(instance, result),
            "coherence": coherence,
        }
        lines = [f"closure: {format_mask(result, instance.names)}"]
        _emit(args, payload, lines)
        return 0

    if args.set_b is None:
        raise ParseError(f"--op {args.op} needs -B", "-B")
    b = _parse_name_list(args.set_b, instance, "-B")
    if args.op == "prefers":
        answer = prefers(f, a, b, coherence=coherence).holds
        lines = [
            f"side {args.side} reveals"
            f" {format_mask(a, instance.names)} at least as good as"
            f" {format_mask(b, instance.names)}: {'yes' if answer else 'no'}"
        ]
    else:
        answer = indifferent(f, a, b, coherence=coherence)
        lines = [
            f"side {args.side} reveals"
            f" {format_mask(a, instance.names)} equivalent to"
            f" {format_mask(b, instance.names)}: {'yes' if answer else 'no'}"
        ]
    if coherence != COHERENCE_CHECKED:
        lines.append(
            "note: coherence not verified; revealed comparisons are only"
            " meaningful for coherent choice functions"
        )
    payload = {
        "op": args.op,
        "side": args.side,
        "set_a": _subset_names(instance, a),
        "set_b": _subset_names(instance, b),
        "holds": answer,
        "coherence": coherence,
    }
    _emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------
# parser plumbing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contractmatch",
        description="Many-to-many matching with contracts: solve, verify, explore.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("file", help="instance file (JSON)")
        p.add_argument("--json", action="store_true", help="emit JSON on stdout")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the choice functions declared in a file")

    p_solve = add("solve", cmd_solve, "run the offer/rejection iteration")
    p_solve.add_argument("--proposer", type=int, choices=(1, 2), default=1)
    p_solve.add_argument("--trace", action="store_true", help="include every step")
    p_solve.add_argument(
        "--require-stable",
        action="store_true",
        help="exit 1 unless the outcome is a stable agreement",
    )

    add("lattice", cmd_lattice, "enumerate stable agreements with meet/join")

    p_market = add("market", cmd_market, "run money-economy checks")
    p_market.add_argument(
        "--check",
        choices=("no-shortage", "money", "two-prices", "all"),
        default="all",
    )

    add("oracle", cmd_oracle, "dump the brute-force stable-agreement catalog")

    p_query = add("query", cmd_query, "evaluate revealed-preference questions")
    p_query.add_argument("--op", choices=("prefers", "indifferent", "closure"), required=True)
    p_query.add_argument("--side", type=int, choices=(1, 2), default=1)
    p_query.add_argument("-A", dest="set_a", required=True, help="comma-separated names")
    p_query.add_argument("-B", dest="set_b", default=None, help="comma-separated names")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SizeBoundError as e:
        print(f"refused: {e}", file=sys.stderr)
        return 3
    except (SpecError, DomainError, PreconditionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
