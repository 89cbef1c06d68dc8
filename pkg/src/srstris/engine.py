"""Deterministic SRS mechanics: movement, rotation with kicks, locking and
placement reachability under the three gravity models.

All operations are pure functions over immutable values.  A move that would
collide returns ``None`` rather than raising: rejection is a normal game
event that callers branch on.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

from .board import Board, OverflowLock
from .pieces import OFFSETS, Orientation, PieceType, kick_offsets


class GravityMode(str, Enum):
    STANDARD = "standard"
    HARD_DROP_ONLY = "harddrop"
    TWENTY_G = "20g"

    def __str__(self) -> str:
        return self.value


class SpawnBlocked(Exception):
    """The spawn position collides with the stack (survival loss)."""


@dataclass(frozen=True, order=True)
class PieceState:
    piece: PieceType
    orient: Orientation
    x: int  # half-cell units
    y: int

    def cells(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            ((self.x + dx) >> 1, (self.y + dy) >> 1)
            for dx, dy in OFFSETS[self.piece, self.orient]
        )

    def cell_key(self) -> frozenset[tuple[int, int]]:
        """Placement identity: the set of occupied cells.

        Solutions are distinguished by final placements, so states that cover
        the same cells (every O orientation, the two half-turn aliases of
        I/S/Z) must collapse to one key.
        """
        return frozenset(self.cells())

    def translated(self, dx_cells: int, dy_cells: int) -> "PieceState":
        return PieceState(self.piece, self.orient, self.x + 2 * dx_cells, self.y + 2 * dy_cells)


class RotationResult(NamedTuple):
    state: PieceState
    test: int  # 1-based index into the kick table row


def occupied_cells(state: PieceState) -> set[tuple[int, int]]:
    cells = set(state.cells())
    assert len(cells) == 4
    return cells


def collides(board: Board, state: PieceState) -> bool:
    w = board.width
    h = board.height
    rows = board.rows
    for dx, dy in OFFSETS[state.piece, state.orient]:
        x = (state.x + dx) >> 1
        y = (state.y + dy) >> 1
        if x < 0 or x >= w or y < 0:
            return True
        if y < h and rows[y] >> x & 1:
            return True
    return False


def shift(board: Board, state: PieceState, dx: int, dy: int) -> PieceState | None:
    moved = state.translated(dx, dy)
    return None if collides(board, moved) else moved


def rotate(board: Board, state: PieceState, cw: bool) -> RotationResult | None:
    """Apply the pure rotation, then the five kick tests in table order."""
    dst = state.orient.cw() if cw else state.orient.ccw()
    for i, (kx, ky) in enumerate(kick_offsets(state.piece, state.orient, dst), start=1):
        cand = PieceState(state.piece, dst, state.x + 2 * kx, state.y + 2 * ky)
        if not collides(board, cand):
            return RotationResult(cand, i)
    return None


def attempt_rotation(board: Board, state: PieceState, cw: bool) -> PieceState | None:
    res = rotate(board, state, cw)
    return res.state if res is not None else None


def hard_drop(board: Board, state: PieceState) -> PieceState:
    cur = state
    while True:
        nxt = shift(board, cur, 0, -1)
        if nxt is None:
            return cur
        cur = nxt


def is_supported(board: Board, state: PieceState) -> bool:
    return shift(board, state, 0, -1) is None


def lock_and_clear(board: Board, state: PieceState) -> tuple[Board, int]:
    """Write the piece into the board and remove any completed rows.

    Raises OverflowLock when a cell lands at or above the ceiling: that is
    the loss condition, checked before line clears.
    """
    new_rows = list(board.rows)
    for x, y in state.cells():
        if y >= board.height:
            raise OverflowLock(f"cell {(x, y)} locked at or above row {board.height}")
        new_rows[y] |= 1 << x
    full = board.full_row_mask()
    kept = [r for r in new_rows if r != full]
    cleared = board.height - len(kept)
    kept.extend([0] * cleared)
    return Board(board.width, board.height, tuple(kept)), cleared


def spawn_state(board: Board, piece: PieceType) -> PieceState:
    """Spawn in default orientation, horizontally centered with left bias,
    lowest occupied cell in the first hidden row (y == height)."""
    offs = OFFSETS[piece, Orientation.SPAWN]
    min_dx = min(dx for dx, _ in offs)
    max_dx = max(dx for dx, _ in offs)
    piece_w = (max_dx - min_dx) // 2 + 1
    left_col = (board.width - piece_w) // 2
    min_dy = min(dy for _, dy in offs)
    st = PieceState(piece, Orientation.SPAWN, 2 * left_col - min_dx, 2 * board.height - min_dy)
    assert min(cy for _, cy in st.cells()) == board.height
    if collides(board, st):
        raise SpawnBlocked(str(piece))
    return st


_MOVES_LATERAL = ((-1, 0), (1, 0))
_MOVE_DOWN = (0, -1)


def _closure(board: Board, start: PieceState, allow_down: bool) -> list[PieceState]:
    """All states reachable from spawn by shifts and (kicked) rotations."""
    seen = {start}
    stack = [start]
    rotatable = start.piece is not PieceType.O
    while stack:
        cur = stack.pop()
        nbrs = []
        for dx, dy in _MOVES_LATERAL:
            nxt = shift(board, cur, dx, dy)
            if nxt is not None:
                nbrs.append(nxt)
        if allow_down:
            nxt = shift(board, cur, *_MOVE_DOWN)
            if nxt is not None:
                nbrs.append(nxt)
        if rotatable:
            for cw in (True, False):
                res = rotate(board, cur, cw)
                if res is not None:
                    nbrs.append(res.state)
        for nxt in nbrs:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return list(seen)


def _dedupe(states: Iterable[PieceState]) -> list[PieceState]:
    by_cells: dict[frozenset, PieceState] = {}
    for st in states:
        key = st.cell_key()
        prev = by_cells.get(key)
        if prev is None or st < prev:
            by_cells[key] = st
    return sorted(by_cells.values())


def reachable_placements(board: Board, piece: PieceType, mode: GravityMode) -> list[PieceState]:
    """Every state the piece can lock in, deduplicated by occupied cells.

    standard   free maneuvering, may lock at any supported state;
    harddrop   lateral moves and rotations, then one terminal drop;
    20g        every action is followed immediately by a maximal drop.
    """
    start = spawn_state(board, piece)
    if mode is GravityMode.STANDARD:
        return _dedupe(s for s in _closure(board, start, allow_down=True) if is_supported(board, s))
    if mode is GravityMode.HARD_DROP_ONLY:
        return _dedupe(hard_drop(board, s) for s in _closure(board, start, allow_down=False))
    # 20G: the piece falls maximally after spawning and after every action.
    start = hard_drop(board, start)
    seen = {start}
    stack = [start]
    rotatable = piece is not PieceType.O
    while stack:
        cur = stack.pop()
        cands = []
        for dx, dy in _MOVES_LATERAL:
            nxt = shift(board, cur, dx, dy)
            if nxt is not None:
                cands.append(nxt)
        if rotatable:
            for cw in (True, False):
                res = rotate(board, cur, cw)
                if res is not None:
                    cands.append(res.state)
        for nxt in cands:
            nxt = hard_drop(board, nxt)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return _dedupe(seen)


def reachable_cell_keys(board: Board, piece: PieceType, mode: GravityMode) -> set[frozenset]:
    return {s.cell_key() for s in reachable_placements(board, piece, mode)}
