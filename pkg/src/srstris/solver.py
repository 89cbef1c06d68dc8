"""Exhaustive decision, counting and witness replay for Tetris instances.

Search is depth-first over (board, sequence index) with memoization keyed on
the exact row bitmasks; Python dicts compare keys in full, so memo hits are
collision-safe by construction.  Solutions are ordered lists of final
placements, and placements are identified by their occupied cells, so
transposed move paths to the same placement list are never double counted
(``reachable_placements`` already deduplicates states by cell set).

``naive_count`` is a deliberately separate brute-force enumerator (no memo,
no pruning) used as the oracle in tests; keep it independent of ``solve``.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

from .board import Board, OverflowLock
from .engine import (
    GravityMode,
    PieceState,
    SpawnBlocked,
    hard_drop,
    is_supported,
    lock_and_clear,
    reachable_placements,
    rotate,
    shift,
    spawn_state,
)
from .model import Instance, Objective
from .pieces import Orientation, PieceType


@dataclass
class Budget:
    max_nodes: int = 10**8
    max_seconds: float = 300.0


class BudgetExceeded(Exception):
    pass


@dataclass
class SearchStats:
    nodes: int = 0
    memo_hits: int = 0
    seconds: float = 0.0


@dataclass
class SearchResult:
    decision: str  # "yes" | "no" | "exhausted"
    count: int | None = None
    witness: list[PieceState] | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    def __post_init__(self):
        if self.count is not None:
            assert (self.count > 0) == (self.decision == "yes")


class _Search:
    def __init__(self, inst: Instance, want_count: bool, budget: Budget):
        self.seq = inst.sequence
        self.mode = inst.mode
        self.objective = inst.objective
        self.width = inst.board.width
        self.want_count = want_count
        self.budget = budget
        self.memo: dict[tuple, int | bool] = {}
        self.stats = SearchStats()
        self.deadline = time.monotonic() + budget.max_seconds
        self.witness: list[PieceState] = []

    def _tick(self):
        self.stats.nodes += 1
        if self.stats.nodes > self.budget.max_nodes:
            raise BudgetExceeded("node budget")
        if self.stats.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget")

    def _success(self, board: Board, index: int) -> bool:
        if index < len(self.seq):
            return False
        if self.objective is Objective.CLEAR:
            return board.is_empty()
        return True

    def _clear_feasible(self, board: Board, index: int) -> bool:
        # a clearing completion removes whole rows, so the final cell count
        # obeys cells + 4*remaining == width * rows_cleared
        remaining = len(self.seq) - index
        return (board.cell_count() + 4 * remaining) % self.width == 0

    def count_from(self, board: Board, index: int) -> int:
        self._tick()
        if index >= len(self.seq):
            return 1 if self._success(board, index) else 0
        if self.objective is Objective.CLEAR and not self._clear_feasible(board, index):
            return 0
        key = (board.rows, index)
        hit = self.memo.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        total = 0
        try:
            placements = reachable_placements(board, self.seq[index], self.mode)
        except SpawnBlocked:
            placements = []
        for placement in placements:
            try:
                nxt, _ = lock_and_clear(board, placement)
            except OverflowLock:
                continue
            total += self.count_from(nxt, index + 1)
        self.memo[key] = total
        return total

    def decide_from(self, board: Board, index: int) -> bool:
        self._tick()
        if index >= len(self.seq):
            return self._success(board, index)
        if self.objective is Objective.CLEAR and not self._clear_feasible(board, index):
            return False
        key = (board.rows, index)
        hit = self.memo.get(key)
        if hit is not None:
            self.stats.memo_hits += 1
            return hit
        try:
            placements = reachable_placements(board, self.seq[index], self.mode)
        except SpawnBlocked:
            placements = []
        for placement in placements:
            try:
                nxt, _ = lock_and_clear(board, placement)
            except OverflowLock:
                continue
            self.witness.append(placement)
            if self.decide_from(nxt, index + 1):
                self.memo[key] = True
                return True
            self.witness.pop()
        self.memo[key] = False
        return False


def solve(inst: Instance, want_count: bool = False, budget: Budget | None = None) -> SearchResult:
    budget = budget or Budget()
    search = _Search(inst, want_count, budget)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, len(inst.sequence) * 4 + 1000))
    t0 = time.monotonic()
    try:
        if want_count:
            count = search.count_from(inst.board, 0)
            search.stats.seconds = time.monotonic() - t0
            return SearchResult(
                decision="yes" if count > 0 else "no", count=count, stats=search.stats
            )
        found = search.decide_from(inst.board, 0)
        search.stats.seconds = time.monotonic() - t0
        return SearchResult(
            decision="yes" if found else "no",
            witness=list(search.witness) if found else None,
            stats=search.stats,
        )
    except BudgetExceeded:
        search.stats.seconds = time.monotonic() - t0
        return SearchResult(decision="exhausted", stats=search.stats)
    finally:
        sys.setrecursionlimit(old_limit)


def naive_count(inst: Instance) -> int:
    """Brute-force solution counter: plain recursion, no memo, no pruning."""

    seq = inst.sequence

    def rec(board: Board, index: int) -> int:
        if index == len(seq):
            if inst.objective is Objective.CLEAR:
                return 1 if board.is_empty() else 0
            return 1
        total = 0
        try:
            placements = reachable_placements(board, seq[index], inst.mode)
        except SpawnBlocked:
            return 0
        for placement in placements:
            try:
                nxt, _ = lock_and_clear(board, placement)
            except OverflowLock:
                continue
            total += rec(nxt, index + 1)
        return total

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, len(seq) * 4 + 1000))
    try:
        return rec(inst.board, 0)
    finally:
        sys.setrecursionlimit(old_limit)


# -- replay -------------------------------------------------------------------


class UnreachablePlacement(Exception):
    def __init__(self, index: int, state: PieceState):
        super().__init__(f"piece {index}: placement {state} not reachable")
        self.index = index
        self.state = state


@dataclass
class ReplayOutcome:
    status: str  # "cleared" | "survived" | "failed"
    failed_index: int | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status in ("cleared", "survived")


def _placement_reachable(board: Board, target: PieceState, mode: GravityMode) -> bool:
    """Early-exit reachability check for one placement.

    Straight-line tries first (rotate at spawn altitude, shift, drop) cover
    almost every witness step cheaply; the full closure is the fallback that
    decides the spins.
    """
    target_key = target.cell_key()
    piece = target.piece
    try:
        start = spawn_state(board, piece)
    except SpawnBlocked:
        return False
    # fast path (legal in standard and hard-drop play): orient at spawn
    # altitude, slide to the target column, hard drop
    if mode is not GravityMode.TWENTY_G:
        by_orient = {
            Orientation.SPAWN: (),
            Orientation.R: (True,),
            Orientation.L: (False,),
            Orientation.TWO: (True, True),
        }
        prefixes = [by_orient[target.orient]]
        prefixes += [p for p in ((), (True,), (False,), (True, True), (False, False))
                     if p != prefixes[0]]
        for spins in prefixes:
            st0 = start
            ok = True
            for cw in spins:
                res = rotate(board, st0, cw)
                if res is None:
                    ok = False
                    break
                st0 = res.state
            if not ok:
                continue
            # kicks may land the piece a column away from its approach slot
            for offset in (0, -1, 1):
                st = st0
                dx = (target.x - st.x) // 2 + offset
                step = 1 if dx > 0 else -1
                blocked = False
                for _ in range(abs(dx)):
                    nxt = shift(board, st, step, 0)
                    if nxt is None:
                        blocked = True
                        break
                    st = nxt
                if blocked:
                    continue
                dropped = hard_drop(board, st)
                if dropped.cell_key() == target_key:
                    return True
                # one tuck rotation after the drop (standard play only)
                if mode is GravityMode.STANDARD:
                    for cw in (True, False):
                        res = rotate(board, dropped, cw)
                        if res is not None and res.state.cell_key() == target_key:
                            return True
    # full check against the mode's placement relation
    for st in reachable_placements(board, piece, mode):
        if st.cell_key() == target_key:
            return True
    return False


def replay(inst: Instance, script: list[PieceState]) -> ReplayOutcome:
    """Validate and apply a witness script placement by placement."""
    if len(script) != len(inst.sequence):
        return ReplayOutcome("failed", 0, "script length does not match sequence")
    board = inst.board
    for i, (piece, target) in enumerate(zip(inst.sequence, script)):
        if target.piece is not piece:
            return ReplayOutcome("failed", i, f"expected {piece}, script has {target.piece}")
        if not is_supported(board, target):
            return ReplayOutcome("failed", i, "placement not supported")
        if not _placement_reachable(board, target, inst.mode):
            return ReplayOutcome("failed", i, "placement not reachable")
        try:
            board, _ = lock_and_clear(board, target)
        except OverflowLock:
            return ReplayOutcome("failed", i, "overflow lock")
    if inst.objective is Objective.CLEAR:
        if board.is_empty():
            return ReplayOutcome("cleared")
        return ReplayOutcome("failed", len(script) - 1, "board not empty after last piece")
    return ReplayOutcome("survived")


# -- rectangle-filling oracle --------------------------------------------------

_F4_CACHE: dict[tuple[PieceType, int, int], int] = {}


def count_rectangle_fillings(
    piece: PieceType, width: int = 4, m: int | None = None, budget: Budget | None = None
) -> int:
    """Ways to place m pieces in a width x m well, ending with the well empty.

    Line clears apply during play as usual; any placement locking above the
    well is a loss for that branch.  Memoized: the values feed blowup
    resolution.
    """
    assert m is not None and m >= 0
    key = (piece, width, m)
    if key in _F4_CACHE:
        return _F4_CACHE[key]
    if m == 0:
        _F4_CACHE[key] = 1
        return 1
    from .model import PieceSequence

    inst = Instance(
        board=Board.empty(width, m),
        sequence=PieceSequence([piece] * m),
        objective=Objective.CLEAR,
        mode=GravityMode.STANDARD,
    )
    res = solve(inst, want_count=True, budget=budget or Budget())
    if res.decision == "exhausted":
        raise BudgetExceeded(f"f4({piece},{width},{m})")
    _F4_CACHE[key] = res.count or 0
    return _F4_CACHE[key]
