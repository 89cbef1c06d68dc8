"""Command-line entry points for the compile / solve / verify / chain
workflows, plus the playground service launcher.

Exit codes: 0 success, 2 validation failure, 3 verification mismatch,
4 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import chainio, gadgets
from .chain import (
    N3DMInstance,
    ThreePartitionInstance,
    check_parsimony,
    count_solutions_of,
    formula_to_triangles,
    n3dm_to_3partition,
    triangles_to_n3dm,
)
from .engine import GravityMode
from .model import (
    ValidationError,
    parse,
    parse_witness,
    serialize,
    serialize_witness,
)
from .solver import Budget, count_rectangle_fillings, replay, solve
from .verify import load_clog_fixtures, load_spin_fixtures, mirror_spin, run_clog, run_spin
from .pieces import PieceType

EXIT_VALIDATION = 2
EXIT_MISMATCH = 3
EXIT_BUDGET = 4


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace(",", " ").split())


def _instance_from_args(args) -> tuple:
    """Shared by generate and verify-reduction: build instance + witness."""
    partition = None
    if args.survival or args.survival_clearing:
        inst = ThreePartitionInstance(_parse_ints(args.a), relaxed=args.relaxed)
        mode = GravityMode(args.mode or "harddrop")
        if args.survival:
            out = gadgets.compile_survival(inst, mode)
        else:
            out = gadgets.compile_survival_clearing(inst, mode)
        return out, inst, partition
    if args.asp:
        a, b, c = (_parse_ints(args.n3dm_a), _parse_ints(args.n3dm_b), _parse_ints(args.n3dm_c))
        inst = N3DMInstance(a, b, c)
        return gadgets.compile_asp(inst, args.pieceset), inst, None
    inst = ThreePartitionInstance(_parse_ints(args.a), relaxed=args.relaxed)
    mode = GravityMode(args.mode or "standard")
    kwargs = {}
    if args.fill_multiplier and args.pair.upper() in gadgets.I_PAIRS:
        kwargs["relaxed_multiplier"] = args.fill_multiplier
    return gadgets.compile_pair(args.pair, inst, mode=mode, **kwargs), inst, None


def cmd_generate(args) -> int:
    try:
        out, _, _ = _instance_from_args(args)
    except (ValidationError, gadgets.InvalidInstance, gadgets.UnsupportedPair) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    text = serialize(out)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out} ({out.board.width}x{out.board.height}, "
              f"{len(out.sequence)} pieces)")
    else:
        sys.stdout.write(text)
    if out.meta:
        print(f"blowup: {out.meta.blowup.format()}", file=sys.stderr)
    return 0


def cmd_witness(args) -> int:
    try:
        if args.survival or args.survival_clearing:
            inst = ThreePartitionInstance(_parse_ints(args.a), relaxed=args.relaxed)
            partition = _parse_partition(args.partition, inst)
            mode = GravityMode(args.mode or "harddrop")
            fn = gadgets.witness_survival if args.survival else gadgets.witness_survival_clearing
            out, script = fn(inst, partition, mode)
        elif args.asp:
            inst = N3DMInstance(
                _parse_ints(args.n3dm_a), _parse_ints(args.n3dm_b), _parse_ints(args.n3dm_c)
            )
            matching = [tuple(_parse_ints(tr)) for tr in args.matching.split(";")]
            out, script = gadgets.witness_asp(inst, matching, args.pieceset)
        else:
            inst = ThreePartitionInstance(_parse_ints(args.a), relaxed=args.relaxed)
            partition = _parse_partition(args.partition, inst)
            mode = GravityMode(args.mode or "standard")
            kwargs = {}
            if args.fill_multiplier and args.pair.upper() in gadgets.I_PAIRS:
                kwargs["relaxed_multiplier"] = args.fill_multiplier
            out, script = gadgets.witness_for_pair(args.pair, inst, partition, mode=mode, **kwargs)
    except (ValidationError, gadgets.InvalidInstance, gadgets.InvalidPartition,
            gadgets.UnsupportedPair) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    Path(args.instance_out).write_text(serialize(out))
    Path(args.witness_out).write_text(serialize_witness(script))
    print(f"wrote {args.instance_out} and {args.witness_out} ({len(script)} placements)")
    return 0


def _parse_partition(text: str | None, inst: ThreePartitionInstance):
    if text:
        return [tuple(_parse_ints(group)) for group in text.split(";")]
    from .chain import count_solutions_of as _count  # noqa: F401

    solution = next(iter(inst.solutions()), None)
    if solution is None:
        raise ValidationError("instance has no 3-partition; pass --partition")
    value_groups = [sorted(group) for group in solution]
    index_of = {}
    for i, v in enumerate(inst.a):
        index_of.setdefault(v, []).append(i)
    partition = []
    for group in value_groups:
        partition.append(tuple(index_of[v].pop() for v in group))
    return partition


def cmd_solve(args) -> int:
    inst = parse(Path(args.instance).read_text())
    budget = Budget(max_nodes=args.budget_nodes, max_seconds=args.budget_seconds)
    res = solve(inst, want_count=args.count, budget=budget)
    report = {
        "decision": res.decision,
        "count": res.count,
        "nodes": res.stats.nodes,
        "memo_hits": res.stats.memo_hits,
        "seconds": round(res.stats.seconds, 3),
    }
    print(json.dumps(report, indent=1))
    if res.witness is not None and args.witness_out:
        Path(args.witness_out).write_text(serialize_witness(res.witness))
    return EXIT_BUDGET if res.decision == "exhausted" else 0


def cmd_replay(args) -> int:
    inst = parse(Path(args.instance).read_text())
    script = parse_witness(Path(args.witness).read_text())
    outcome = replay(inst, script)
    if outcome.ok:
        print(outcome.status)
        return 0
    print(f"failed at piece {outcome.failed_index}: {outcome.reason}")
    return EXIT_MISMATCH


def cmd_verify_reduction(args) -> int:
    try:
        out, src, _ = _instance_from_args(args)
    except (ValidationError, gadgets.InvalidInstance, gadgets.UnsupportedPair) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    source_count = count_solutions_of(src)
    budget = Budget(max_nodes=args.budget_nodes, max_seconds=args.budget_seconds)
    res = solve(out, want_count=args.count, budget=budget)
    if res.decision == "exhausted":
        print("budget exhausted (inconclusive)")
        return EXIT_BUDGET
    decision_match = (res.decision == "yes") == (source_count > 0)
    print(f"combinatorial count: {source_count}")
    print(f"tetris decision: {res.decision}")
    if args.count:
        f4_table = {}
        for piece, width, m, _ in out.meta.blowup.f4_terms:
            f4_table[(piece, width, m)] = count_rectangle_fillings(piece, width, m, budget)
        blowup = out.meta.blowup.resolve(f4_table)
        print(f"tetris count: {res.count}")
        print(f"expected blowup: {blowup}")
        if res.count != source_count * blowup:
            print("MISMATCH: count != source_count * blowup")
            return EXIT_MISMATCH
        print(f"match: {res.count} = {source_count} x {blowup}")
    if not decision_match:
        print("MISMATCH: decisions differ")
        return EXIT_MISMATCH
    return 0


def cmd_chain(args) -> int:
    if args.from_kind == "pos1in3":
        cnf = chainio.parse_cnf(Path(args.formula).read_text())
        graph, _ = formula_to_triangles(cnf)
        if args.check:
            report = check_parsimony("formula_to_triangles", cnf)
            print(f"step 2 parsimony: {report.count_before} == {report.count_after}")
        n3dm, _ = triangles_to_n3dm(graph)
        part, _ = n3dm_to_3partition(n3dm)
        if args.graph_out:
            Path(args.graph_out).write_text(chainio.serialize_graph(graph))
        if args.n3dm_out:
            Path(args.n3dm_out).write_text(chainio.serialize_n3dm(n3dm))
        if args.out:
            Path(args.out).write_text(chainio.serialize_3partition(part))
        print(f"3-partition instance with n={part.n}, t={part.t}")
        return 0
    if args.from_kind == "graph":
        graph = chainio.parse_graph(Path(args.formula).read_text())
        if args.check:
            report = check_parsimony("triangles_to_n3dm", graph)
            print(f"step 3 parsimony: {report.count_before} == {report.count_after}")
        n3dm, _ = triangles_to_n3dm(graph)
        part, _ = n3dm_to_3partition(n3dm)
        if args.out:
            Path(args.out).write_text(chainio.serialize_3partition(part))
        print(f"3-partition instance with n={part.n}, t={part.t}")
        return 0
    n3dm = chainio.parse_n3dm(Path(args.formula).read_text())
    if args.check:
        report = check_parsimony("n3dm_to_3partition", n3dm)
        print(f"step 4 parsimony: {report.count_before} == {report.count_after}")
    part, _ = n3dm_to_3partition(n3dm)
    if args.out:
        Path(args.out).write_text(chainio.serialize_3partition(part))
    print(f"3-partition instance with n={part.n}, t={part.t}")
    return 0


def cmd_spins(args) -> int:
    scenarios = load_spin_fixtures()
    failed = 0
    for figure, scenario in scenarios.items():
        report = run_spin(scenario)
        status = "pass" if report.passed else f"FAIL ({report.reason})"
        print(f"{figure:<18} tests {report.trace!s:<10} {status}")
        failed += not report.passed
        if scenario.start.piece is not PieceType.I:
            mirrored = run_spin(mirror_spin(scenario))
            status = "pass" if mirrored.passed else f"FAIL ({mirrored.reason})"
            print(f"{figure + '-mirror':<18} tests {mirrored.trace!s:<10} {status}")
            failed += not mirrored.passed
    return EXIT_MISMATCH if failed else 0


def cmd_clogs(args) -> int:
    failed = exhausted = 0
    for scenario in load_clog_fixtures():
        report = run_clog(scenario)
        tag = f"{scenario.section}/{scenario.letter}"
        print(f"{tag:<22} {report.verdict}")
        if report.verdict == "budget-exhausted":
            exhausted += 1
        elif scenario.claim == "control":
            failed += report.verdict != "counterexample"
        elif scenario.claim == "impossible":
            failed += report.verdict != "impossible-confirmed"
        else:
            failed += report.verdict != "proven-unsolvable"
    if exhausted:
        return EXIT_BUDGET
    return EXIT_MISMATCH if failed else 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def _add_generate_like(p, witness=False):
    p.add_argument("--pair", help="two-piece construction id, e.g. IL or OJ")
    p.add_argument("--a", default="", help="3-partition integers, comma separated")
    p.add_argument("--relaxed", action="store_true", help="waive the t/4 < a_i < t/2 bounds")
    p.add_argument("--mode", choices=[m.value for m in GravityMode])
    p.add_argument("--fill-multiplier", type=int,
                   help="relaxed micro fill pieces per unit (I-family only)")
    p.add_argument("--survival", action="store_true")
    p.add_argument("--survival-clearing", action="store_true")
    p.add_argument("--asp", action="store_true")
    p.add_argument("--pieceset", default="ITL", choices=["ITL", "ITJ"])
    p.add_argument("--n3dm-a", default="")
    p.add_argument("--n3dm-b", default="")
    p.add_argument("--n3dm-c", default="")
    if witness:
        p.add_argument("--partition", help="semicolon-separated index groups, e.g. '0,1,2'")
        p.add_argument("--matching", help="semicolon-separated value triples for asp")
        p.add_argument("--instance-out", default="instance.txt")
        p.add_argument("--witness-out", default="witness.txt")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="srstris")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="compile a reduction instance")
    _add_generate_like(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("witness", help="compile an instance plus a witness script")
    _add_generate_like(p, witness=True)
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("solve", help="exhaustively decide or count an instance")
    p.add_argument("instance")
    p.add_argument("--count", action="store_true")
    p.add_argument("--budget-nodes", type=int, default=10**8)
    p.add_argument("--budget-seconds", type=float, default=300.0)
    p.add_argument("--witness-out")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("replay", help="validate a witness script")
    p.add_argument("instance")
    p.add_argument("witness")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("verify-reduction", help="compare instance counts against the source")
    _add_generate_like(p)
    p.add_argument("--count", action="store_true")
    p.add_argument("--budget-nodes", type=int, default=10**8)
    p.add_argument("--budget-seconds", type=float, default=300.0)
    p.set_defaults(fn=cmd_verify_reduction)

    p = sub.add_parser("chain", help="run the reduction chain with parsimony checks")
    p.add_argument("--from", dest="from_kind", required=True,
                   choices=["pos1in3", "graph", "n3dm"])
    p.add_argument("--formula", required=True, help="input document")
    p.add_argument("--check", action="store_true", help="verify parsimony where feasible")
    p.add_argument("--graph-out")
    p.add_argument("--n3dm-out")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_chain)

    p = sub.add_parser("spins", help="run the spin conformance table")
    p.set_defaults(fn=cmd_spins)

    p = sub.add_parser("clogs", help="run the clog conformance table")
    p.set_defaults(fn=cmd_clogs)

    p = sub.add_parser("serve", help="start the playground session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8571)
    p.set_defaults(fn=cmd_serve)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
