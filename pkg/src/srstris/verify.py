"""Executable spin and clog scenarios.

A spin scenario pins down one kick maneuver: a fixture board, a starting
state, an action list, the expected final state, and the set of blocker
cells that force the interesting kick test.  ``run_spin`` replays the
actions and records which kick test fired at every rotation; the scenario
fails if the trace or the final state deviates.  Blocker cells are
validated by removal: erasing any one of them must change some fired test.

A clog scenario is a truncated board after an improper placement, plus the
piece budget that remains for the enclosing segment.  ``run_clog`` asks the
exhaustive solver whether the local objective (clearing the truncated board)
is still achievable: the expected verdict for a clog is proven-unsolvable.
Impossible-placement scenarios instead assert a target placement is not in
the reachability relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .board import Board
from .engine import (
    GravityMode,
    PieceState,
    collides,
    reachable_placements,
    rotate,
    shift,
)
from .model import Instance, ParseError, parse
from .pieces import MIRROR_ORIENT, MIRROR_PIECE, Orientation, PieceType
from .solver import Budget, solve

SPIN_FIGURES = (
    "srs-example",
    "i-spin",
    "j-spin-1",
    "j-spin-2",
    "j-spin-3",
    "j-spin-4",
    "j-spin-5",
    "j-spin-long-1",
    "s-spin-1",
    "s-spin-2",
    "s-spin-long-1",
    "s-spin-long-2",
    "t-spin",
)

CLOG_SECTIONS = {
    "oj": 11,       # letters a..k, k is the impossible placement
    "os": 5,
    "ot-prime": 3,
    "ot-body": 3,
    "ot-neck": 9,
    "st": 4,
    "sz-blockers": 5,
    "sz-fill": 9,
    "jz-blockers": 7,
    "jt-blockers": 9,
    "jz-fill": 12,
    "js-prime": 6,  # letter f is the impossible placement
    "js-fill": 13,
    "jl-prime": 15,
    "jl-fill": 13,
    "jl-close": 7,
}

IMPOSSIBLE_LETTERS = {("oj", "k"), ("js-prime", "f")}

_ORIENT_BY_LABEL = {o.label(): o for o in Orientation}
_ACTIONS = ("left", "right", "down", "cw", "ccw")


@dataclass
class SpinScenario:
    figure: str
    board: Board
    start: PieceState
    actions: tuple[str, ...]
    expected: PieceState
    expected_tests: tuple[int, ...]
    blockers: tuple[tuple[int, int], ...]
    never_up: bool = False  # additionally assert no rotation raises the center


@dataclass
class SpinReport:
    figure: str
    passed: bool
    trace: list[int] = field(default_factory=list)
    reason: str = ""


def _apply(board: Board, state: PieceState, action: str):
    if action == "left":
        return shift(board, state, -1, 0), None
    if action == "right":
        return shift(board, state, 1, 0), None
    if action == "down":
        return shift(board, state, 0, -1), None
    if action in ("cw", "ccw"):
        res = rotate(board, state, action == "cw")
        if res is None:
            return None, None
        return res.state, res.test
    raise ValueError(f"unknown action {action!r}")


def run_spin(s: SpinScenario) -> SpinReport:
    if collides(s.board, s.start):
        return SpinReport(s.figure, False, reason="start state collides")
    cur = s.start
    trace: list[int] = []
    for action in s.actions:
        cur, test = _apply(s.board, cur, action)
        if cur is None:
            return SpinReport(s.figure, False, trace, f"action {action!r} rejected")
        if test is not None:
            trace.append(test)
    if cur.cell_key() != s.expected.cell_key():
        return SpinReport(s.figure, False, trace, "final state differs")
    if tuple(trace) != s.expected_tests:
        return SpinReport(s.figure, False, trace, f"trace {trace} != {list(s.expected_tests)}")
    if s.never_up and not _never_upward(s.board, s.start):
        return SpinReport(s.figure, False, trace, "a rotation raised the center")
    return SpinReport(s.figure, True, trace)


def _never_upward(board: Board, start: PieceState) -> bool:
    for cw in (True, False):
        res = rotate(board, start, cw)
        if res is not None and res.state.y > start.y:
            return False
    return True


def validate_blockers(s: SpinScenario) -> list[tuple[int, int]]:
    """Blocker cells whose removal does NOT alter the kick trace (should be
    empty for a well-formed fixture)."""
    base = run_spin(s)
    assert base.passed, f"{s.figure}: fixture does not pass as stated"
    bad = []
    for cell in s.blockers:
        rows = list(s.board.rows)
        x, y = cell
        rows[y] &= ~(1 << x)
        reduced = Board(s.board.width, s.board.height, tuple(rows))
        report = run_spin(
            SpinScenario(
                s.figure, reduced, s.start, s.actions, s.expected,
                s.expected_tests, (), s.never_up,
            )
        )
        if report.passed and report.trace == list(s.expected_tests):
            bad.append(cell)
    return bad


def mirror_spin(s: SpinScenario) -> SpinScenario:
    """The vertically mirrored scenario (valid for non-I pieces)."""
    assert s.start.piece is not PieceType.I
    w = s.board.width

    def flip_state(st: PieceState) -> PieceState:
        return PieceState(
            MIRROR_PIECE[st.piece], MIRROR_ORIENT[st.orient], 2 * w - 2 - st.x, st.y
        )

    swap = {"left": "right", "right": "left", "cw": "ccw", "ccw": "cw", "down": "down"}
    return SpinScenario(
        figure=s.figure + "-mirror",
        board=s.board.mirrored(),
        start=flip_state(s.start),
        actions=tuple(swap[a] for a in s.actions),
        expected=flip_state(s.expected),
        expected_tests=s.expected_tests,
        blockers=tuple((w - 1 - x, y) for x, y in s.blockers),
        never_up=s.never_up,
    )


# -- fixture files ---------------------------------------------------------------


def serialize_spin(s: SpinScenario) -> str:
    lines = ["# srstris spin fixture v1"]
    lines.append(f"figure: {s.figure}")
    lines.append(f"piece: {s.start.piece}")
    lines.append(f"start: {s.start.orient.label()} {s.start.x} {s.start.y}")
    lines.append(f"actions: {','.join(s.actions)}")
    lines.append(f"expected: {s.expected.orient.label()} {s.expected.x} {s.expected.y}")
    lines.append(f"expected_tests: {','.join(map(str, s.expected_tests))}")
    lines.append("blockers: " + " ".join(f"{x}:{y}" for x, y in s.blockers))
    lines.append(f"never_up: {'true' if s.never_up else 'false'}")
    lines.append(f"width: {s.board.width}")
    lines.append(f"height: {s.board.height}")
    lines.append("rows:")
    lines.append(s.board.render())
    return "\n".join(lines) + "\n"


def parse_spin(text: str) -> SpinScenario:
    fields: dict[str, str] = {}
    art: list[str] = []
    in_rows = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if in_rows:
            if line:
                art.append(line)
            continue
        if not line or line.startswith("#"):
            continue
        if line == "rows:":
            in_rows = True
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno)
        key, _, value = line.partition(":")
        fields[key.strip()] = value.strip()
    piece = PieceType(fields["piece"])
    so, sx, sy = fields["start"].split()
    eo, ex, ey = fields["expected"].split()
    blockers = tuple(
        tuple(map(int, cell.split(":"))) for cell in fields["blockers"].split()
    ) if fields.get("blockers") else ()
    board = Board.from_strings(art, width=int(fields["width"]))
    return SpinScenario(
        figure=fields["figure"],
        board=board,
        start=PieceState(piece, _ORIENT_BY_LABEL[so], int(sx), int(sy)),
        actions=tuple(a for a in fields["actions"].split(",") if a),
        expected=PieceState(piece, _ORIENT_BY_LABEL[eo], int(ex), int(ey)),
        expected_tests=tuple(
            int(v) for v in fields["expected_tests"].split(",") if v
        ),
        blockers=blockers,
        never_up=fields.get("never_up") == "true",
    )


# -- clogs ------------------------------------------------------------------------


@dataclass
class ClogScenario:
    section: str
    letter: str
    instance: Instance          # truncated board + remaining piece budget
    claim: str                  # "clog" | "impossible" | "control"
    target: PieceState | None = None  # for impossible-placement checks
    max_nodes: int = 2_000_000


@dataclass
class ClogReport:
    section: str
    letter: str
    verdict: str  # proven-unsolvable | impossible-confirmed | counterexample | budget-exhausted
    nodes: int = 0

    @property
    def ok(self) -> bool:
        return self.verdict in ("proven-unsolvable", "impossible-confirmed", "counterexample")


def run_clog(c: ClogScenario) -> ClogReport:
    if c.claim == "impossible":
        assert c.target is not None
        keys = {s.cell_key() for s in reachable_placements(
            c.instance.board, c.target.piece, c.instance.mode)}
        if c.target.cell_key() in keys:
            return ClogReport(c.section, c.letter, "counterexample")
        return ClogReport(c.section, c.letter, "impossible-confirmed")
    res = solve(c.instance, budget=Budget(max_nodes=c.max_nodes))
    if res.decision == "no":
        return ClogReport(c.section, c.letter, "proven-unsolvable", res.stats.nodes)
    if res.decision == "yes":
        return ClogReport(c.section, c.letter, "counterexample", res.stats.nodes)
    return ClogReport(c.section, c.letter, "budget-exhausted", res.stats.nodes)


def fixtures_root() -> Path:
    return Path(__file__).parent / "fixtures"


def load_spin_fixtures() -> dict[str, SpinScenario]:
    root = fixtures_root() / "spins"
    out = {}
    for path in sorted(root.glob("*.txt")):
        scenario = parse_spin(path.read_text())
        out[scenario.figure] = scenario
    return out


def load_clog_fixtures() -> list[ClogScenario]:
    import json

    root = fixtures_root() / "clogs"
    manifest = json.loads((root / "manifest.json").read_text())
    out = []
    for entry in manifest:
        inst = parse((root / entry["path"]).read_text())
        target = None
        if entry.get("target"):
            piece, orient, x, y = entry["target"].split()
            target = PieceState(
                PieceType(piece), _ORIENT_BY_LABEL[orient], int(x), int(y)
            )
        out.append(
            ClogScenario(
                section=entry["section"],
                letter=entry["letter"],
                instance=inst,
                claim=entry["claim"],
                target=target,
                max_nodes=entry.get("max_nodes", 2_000_000),
            )
        )
    return out
