#!/usr/bin/env python3
"""Generate the spin and clog fixture files.

Spin fixtures are built by carving the start and target cells of one kick
maneuver out of a dense board, so every earlier kick test is obstructed by
construction; the blocker list is then computed by removal probing.  Clog
fixtures take the top few pocket levels of each two-piece construction,
apply one reachable-but-improper placement, and keep the variant only if
the exhaustive solver proves the truncated board unclearable.  Everything
written here is re-verified by the test suite, so regenerating fixtures is
always safe.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from srstris.board import Board, OverflowLock
from srstris.chain import ThreePartitionInstance
from srstris.engine import (
    GravityMode,
    PieceState,
    collides,
    is_supported,
    lock_and_clear,
    reachable_placements,
    rotate,
)
from srstris.gadgets import tower
from srstris.model import (
    Instance,
    Objective,
    PieceSequence,
    ReductionMeta,
    serialize,
)
from srstris.pieces import OFFSETS, Orientation, PieceType
from srstris.solver import Budget, solve
from srstris.verify import (
    CLOG_SECTIONS,
    IMPOSSIBLE_LETTERS,
    SpinScenario,
    fixtures_root,
    run_spin,
    serialize_spin,
    validate_blockers,
)

P = PieceType
O0, OR, O2, OL = Orientation.SPAWN, Orientation.R, Orientation.TWO, Orientation.L


def state_at(piece, orient, cx, cy):
    parity = 1 if piece in (P.I, P.O) else 0
    return PieceState(piece, orient, 2 * cx + parity, 2 * cy + parity)


def dense_minus(width, height, holes):
    cells = {(x, y) for x in range(width) for y in range(height)} - set(holes)
    return Board.from_cells(width, height, cells)


def compute_blockers(scenario: SpinScenario) -> tuple[tuple[int, int], ...]:
    """Cells whose removal changes the kick trace or the outcome."""
    base = run_spin(scenario)
    assert base.passed, f"{scenario.figure}: {base.reason}"
    blockers = []
    for x, y in sorted(scenario.board.filled_cells()):
        rows = list(scenario.board.rows)
        rows[y] &= ~(1 << x)
        reduced = Board(scenario.board.width, scenario.board.height, tuple(rows))
        probe = SpinScenario(
            scenario.figure, reduced, scenario.start, scenario.actions,
            scenario.expected, scenario.expected_tests, (), scenario.never_up,
        )
        report = run_spin(probe)
        if not (report.passed and report.trace == list(scenario.expected_tests)):
            blockers.append((x, y))
    return tuple(blockers)


def open_earlier_tests(board, start, cw, fired_test, keep=None, protected=frozenset()):
    """Carve every earlier kick-test position down to a single blocking
    cell, so each blocker is individually load-bearing."""
    from srstris.pieces import kick_offsets

    dst = start.orient.cw() if cw else start.orient.ccw()
    offsets = kick_offsets(start.piece, start.orient, dst)
    rows = list(board.rows)
    if keep is None:
        keep = set()
    for k in range(fired_test - 1):
        kx, ky = offsets[k]
        cand = PieceState(start.piece, dst, start.x + 2 * kx, start.y + 2 * ky)
        filled = [
            (x, y) for x, y in cand.cells()
            if 0 <= x < board.width and 0 <= y < board.height and rows[y] >> x & 1
        ]
        if not filled:
            # position fully carved by the maneuver path: re-add one blocker
            candidates = [
                (x, y) for x, y in cand.cells()
                if (x, y) not in protected
                and 0 <= x < board.width and 0 <= y < board.height
            ]
            if not candidates:
                raise SystemExit(f"cannot re-block kick test {k + 1} at {cand}")
            x, y = candidates[0]
            rows[y] |= 1 << x
            keep.add((x, y))
            continue
        kept = next((c for c in filled if c in keep), filled[0])
        keep.add(kept)
        for x, y in filled:
            if (x, y) != kept and (x, y) not in keep:
                rows[y] &= ~(1 << x)
    return Board(board.width, board.height, tuple(rows))


def carved_spin(figure, piece, from_orient, cw, test_index, size=9,
                extra_holes=(), actions_prefix=(), never_up=False):
    """One-rotation scenario: dense board minus the start and landing cells."""
    cx = cy = size // 2
    start = state_at(piece, from_orient, cx, cy)
    from srstris.pieces import kick_offsets

    dst = from_orient.cw() if cw else from_orient.ccw()
    kx, ky = kick_offsets(piece, from_orient, dst)[test_index - 1]
    target = PieceState(piece, dst, start.x + 2 * kx, start.y + 2 * ky)
    holes = set(start.cells()) | set(target.cells()) | set(extra_holes)
    board = dense_minus(size, size, holes)
    board = open_earlier_tests(board, start, cw, test_index)
    scenario = SpinScenario(
        figure=figure,
        board=board,
        start=start,
        actions=tuple(actions_prefix) + (("cw" if cw else "ccw"),),
        expected=target,
        expected_tests=(test_index,),
        blockers=(),
        never_up=never_up,
    )
    report = run_spin(scenario)
    if not report.passed:
        raise SystemExit(f"{figure}: intended test {test_index} did not fire: {report.reason} {report.trace}")
    scenario.blockers = compute_blockers(scenario)
    return scenario


def chained_spin(figure, piece, steps, size=11, extra_holes=()):
    """Multi-rotation descent: steps = [(orient, cw, test), ...] applied from
    the first state; all intermediate landings are carved."""
    from srstris.pieces import kick_offsets

    cx, cy = size // 2, size - 3
    cur = state_at(piece, steps[0][0], cx, cy)
    states = [cur]
    actions = []
    tests = []
    for orient, cw, test in steps:
        assert cur.orient is orient
        dst = orient.cw() if cw else orient.ccw()
        kx, ky = kick_offsets(piece, orient, dst)[test - 1]
        cur = PieceState(piece, dst, cur.x + 2 * kx, cur.y + 2 * ky)
        states.append(cur)
        actions.append("cw" if cw else "ccw")
        tests.append(test)
    holes = set(extra_holes)
    for st in states:
        holes |= set(st.cells())
    board = dense_minus(size, size, holes)
    cur2 = states[0]
    keep: set[tuple[int, int]] = set()
    protected = frozenset(c for st in states for c in st.cells())
    for (orient, cw, test) in steps:
        board = open_earlier_tests(board, cur2, cw, test, keep, protected)
        from srstris.pieces import kick_offsets as _ko

        dst = orient.cw() if cw else orient.ccw()
        kx, ky = _ko(piece, orient, dst)[test - 1]
        cur2 = PieceState(piece, dst, cur2.x + 2 * kx, cur2.y + 2 * ky)
    scenario = SpinScenario(
        figure=figure, board=board, start=states[0], actions=tuple(actions),
        expected=states[-1], expected_tests=tuple(tests), blockers=(),
    )
    report = run_spin(scenario)
    if not report.passed:
        raise SystemExit(f"{figure}: chain failed: {report.reason} trace={report.trace}")
    scenario.blockers = compute_blockers(scenario)
    return scenario


def srs_example_spin():
    # J rotated counter-clockwise: test 1 blocked by one square, test 2 lands
    board = Board.from_cells(
        6, 6,
        {(x, 0) for x in range(6)} | {(1, 2)},
    )
    start = state_at(P.J, OR, 2, 2)
    target = state_at(P.J, O0, 3, 2)
    scenario = SpinScenario(
        figure="srs-example", board=board, start=start, actions=("ccw",),
        expected=target, expected_tests=(2,), blockers=(),
    )
    report = run_spin(scenario)
    assert report.passed, report
    scenario.blockers = compute_blockers(scenario)
    return scenario


def i_spin():
    # vertical I in a slot over a floor channel: either rotation drops the
    # piece into the channel; no rotation can raise the center
    width = height = 9
    holes = {(4, y) for y in range(2, 8)} | {(x, 2) for x in range(1, 8)}
    board = dense_minus(width, height, holes)
    start = PieceState(P.I, OR, 2 * 4 - 1, 2 * 2 + 3)  # column 4, rows 2..5
    res = rotate(board, start, True)
    assert res is not None and res.state.y < start.y, res
    scenario = SpinScenario(
        figure="i-spin", board=board, start=start, actions=("cw",),
        expected=res.state, expected_tests=(res.test,), blockers=(),
        never_up=True,
    )
    report = run_spin(scenario)
    assert report.passed, report
    scenario.blockers = compute_blockers(scenario)
    return scenario


def build_spins():
    scenarios = [
        srs_example_spin(),
        i_spin(),
        carved_spin("j-spin-1", P.J, O0, True, 4),
        carved_spin("j-spin-2", P.J, OR, True, 3),
        carved_spin("j-spin-3", P.J, OL, False, 3),
        carved_spin("j-spin-4", P.J, OR, False, 3),
        carved_spin("j-spin-5", P.J, O2, False, 5),
        chained_spin("j-spin-long-1", P.J, [(OR, True, 3), (O2, True, 4)]),
        carved_spin("s-spin-1", P.S, O0, True, 4),
        carved_spin("s-spin-2", P.S, OR, True, 3),
        chained_spin("s-spin-long-1", P.S, [(O0, True, 4), (OR, True, 3)]),
        chained_spin("s-spin-long-2", P.S, [(OR, True, 3), (O2, True, 4)]),
        carved_spin("t-spin", P.T, OR, True, 3),
    ]
    root = fixtures_root() / "spins"
    root.mkdir(parents=True, exist_ok=True)
    for sc in scenarios:
        bad = validate_blockers(sc)
        assert not bad, f"{sc.figure}: inert blockers {bad}"
        (root / f"{sc.figure}.txt").write_text(serialize_spin(sc))
        print(f"spin {sc.figure}: tests {list(sc.expected_tests)}, "
              f"{len(sc.blockers)} blockers")


# -- clogs -------------------------------------------------------------------


SECTION_PAIR = {
    "oj": "OJ", "os": "OS", "ot-prime": "OT", "ot-body": "OT", "ot-neck": "OT",
    "st": "ST", "sz-blockers": "SZ", "sz-fill": "SZ",
    "jz-blockers": "JZ", "jt-blockers": "JT", "jz-fill": "JZ",
    "js-prime": "JS", "js-fill": "JS",
    "jl-prime": "JL", "jl-fill": "JL", "jl-close": "JL",
}

# which piece kind the section's improper placements should involve
SECTION_PIECE = {
    "oj": P.J, "os": P.S, "ot-prime": P.O, "ot-body": P.T, "ot-neck": P.T,
    "st": P.S, "sz-blockers": P.Z, "sz-fill": P.S,
    "jz-blockers": P.Z, "jt-blockers": P.T, "jz-fill": P.J,
    "js-prime": P.S, "js-fill": P.J,
    "jl-prime": P.L, "jl-fill": P.J, "jl-close": P.J,
}


def truncated_tower(pair: str, want_piece: PieceType, depth: int = 4):
    """Top `depth` pocket levels of the n=3 construction, re-based to row 0,
    chosen so the deviating piece kind appears and the bottom level has an
    in-level catch (not O or I)."""
    inst3 = ThreePartitionInstance((5, 6, 7))
    full = tower.compile_pair(pair, inst3)
    layout = tower._layout(full.sequence)
    seq = list(full.sequence)
    n_levels = len(layout.levels)
    for start in range(0, n_levels - depth):
        window = layout.levels[start : start + depth]
        pieces = [piece for _, _, piece in window]
        if pieces[0] is not want_piece:
            continue
        if pieces[-1] in (P.O, P.I):
            continue
        base_row = window[-1][1]
        top_row = window[0][1] + tower.POCKETS[window[0][2]][0]
        rows = full.board.rows[base_row:top_row]
        board = Board(full.board.width, top_row - base_row, rows)
        suffix = PieceSequence(seq[start : start + depth])
        levels = tuple(
            (bx, br - base_row, piece) for bx, br, piece in window
        )
        return board, suffix, levels
    raise SystemExit(f"{pair}: no usable truncation window for {want_piece}")


def proper_script(levels):
    out = []
    for band_x0, base_row, piece in levels:
        _, hole, _ = tower.POCKETS[piece]
        cells = [(band_x0 + dx, base_row + dy) for dx, dy in hole]
        from srstris.gadgets.base import state_for_cells

        out.append(state_for_cells(piece, cells))
    return out


def make_clog_instance(board, suffix, section, letter):
    meta = ReductionMeta(
        construction=f"clog-{section}-{letter}",
        source=f"truncated {SECTION_PAIR[section]} neck, verified budget",
    )
    return Instance(board, suffix, Objective.CLEAR, GravityMode.STANDARD, meta)


def find_impossible_target(board, piece, mode) -> PieceState | None:
    reachable = {s.cell_key() for s in reachable_placements(board, piece, mode)}
    for orient in Orientation:
        offs = OFFSETS[piece, orient]
        parity = 1 if piece in (P.I, P.O) else 0
        for cy in range(board.height):
            for cx in range(board.width):
                st = PieceState(piece, orient, 2 * cx + parity, 2 * cy + parity)
                if collides(board, st):
                    continue
                if not is_supported(board, st):
                    continue
                if max(y for _, y in st.cells()) >= board.height:
                    continue
                if st.cell_key() not in reachable:
                    return st
    return None


def build_clogs():
    root = fixtures_root() / "clogs"
    root.mkdir(parents=True, exist_ok=True)
    manifest = []
    budget = Budget(max_nodes=2_000_000)
    for section, letter_count in CLOG_SECTIONS.items():
        pair = SECTION_PAIR[section]
        piece = SECTION_PIECE[section]
        board, suffix, levels = truncated_tower(pair, piece)
        script = proper_script(levels)
        # control: the proper play must clear the truncation
        ctl = make_clog_instance(board, suffix, section, "control")
        res = solve(ctl, budget=budget)
        assert res.decision == "yes", f"{section}: control not solvable"
        path = f"{section}/control.txt"
        (root / section).mkdir(exist_ok=True)
        (root / path).write_text(serialize(ctl))
        manifest.append({"section": section, "letter": "control",
                         "path": path, "claim": "control"})
        letters = [chr(ord("a") + i) for i in range(letter_count)]
        variants = []  # (board after the improper lock, remaining pieces, note)

        def harvest(pre_board, pre_suffix, proper_state):
            proper_key = proper_state.cell_key()
            found = []
            for cand in reachable_placements(pre_board, pre_suffix[0], GravityMode.STANDARD):
                if cand.cell_key() == proper_key:
                    continue
                try:
                    after, _ = lock_and_clear(pre_board, cand)
                except OverflowLock:
                    continue
                rest = PieceSequence(pre_suffix[1:])
                verdict = solve(
                    Instance(after, rest, Objective.CLEAR, GravityMode.STANDARD),
                    budget=budget,
                )
                if verdict.decision == "no":
                    note = f"improper {cand.piece} at {sorted(cand.cells())}"
                    found.append((after, rest, note))
            return found

        variants.extend(harvest(board, suffix, script[0]))
        if len(variants) < letter_count:
            after0, _ = lock_and_clear(board, script[0])
            variants.extend(harvest(after0, PieceSequence(suffix[1:]), script[1]))
        for i, letter in enumerate(letters):
            if (section, letter) in IMPOSSIBLE_LETTERS:
                probe_board = board
                target = None
                other = {pc for pc in suffix if pc is not piece}
                for probe_piece in (piece, *other):
                    target = find_impossible_target(probe_board, probe_piece,
                                                    GravityMode.STANDARD)
                    if target is None:
                        # bury a spot under the first proper placement
                        buried, _ = lock_and_clear(board, script[0])
                        target = find_impossible_target(buried, probe_piece,
                                                        GravityMode.STANDARD)
                        if target is not None:
                            probe_board = buried
                    if target is not None:
                        break
                assert target is not None, f"{section}: no impossible placement found"
                inst = make_clog_instance(probe_board, suffix, section, letter)
                path = f"{section}/{letter}.txt"
                (root / path).write_text(serialize(inst))
                manifest.append({
                    "section": section, "letter": letter, "path": path,
                    "claim": "impossible",
                    "target": f"{target.piece} {target.orient.label()} {target.x} {target.y}",
                })
                continue
            if i >= len(variants):
                raise SystemExit(
                    f"{section}: only {len(variants)} clog variants, need {letter_count}"
                )
            after, rest, note = variants[i]
            inst = Instance(after, rest, Objective.CLEAR, GravityMode.STANDARD,
                            ReductionMeta(f"clog-{section}-{letter}", source=note))
            path = f"{section}/{letter}.txt"
            (root / path).write_text(serialize(inst))
            manifest.append({"section": section, "letter": letter, "path": path,
                             "claim": "clog"})
        print(f"clogs {section}: {letter_count} letters + control")
    (root / "manifest.json").write_text(json.dumps(manifest, indent=1))


if __name__ == "__main__":
    build_spins()
    build_clogs()
    print("fixtures written to", fixtures_root())
