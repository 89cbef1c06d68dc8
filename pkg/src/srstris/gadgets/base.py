"""Shared machinery for building reduction boards and their witnesses.

Boards are painted cell-by-cell into a mutable grid, then frozen.  Witnesses
are generated by *playing the engine forward*: each intended placement is
located on the live board (so line clears and row shifts are always
accounted for), checked for reachability, then locked.  A generator bug
therefore surfaces immediately as an unreachable or unsupported placement
rather than as a silently wrong script.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..board import Board, OverflowLock
from ..engine import (
    GravityMode,
    PieceState,
    collides,
    hard_drop,
    is_supported,
    lock_and_clear,
    reachable_placements,
    spawn_state,
)
from ..model import Instance
from ..pieces import OFFSETS, Orientation, PieceType
from ..solver import _placement_reachable


class UnsupportedPair(Exception):
    pass


class InvalidInstance(Exception):
    pass


class InvalidPartition(Exception):
    pass


class WitnessBug(Exception):
    """Internal consistency failure while generating a witness."""


class GridPainter:
    """Mutable cell grid with bottom-up row indexing; freeze() -> Board."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.cells: set[tuple[int, int]] = set()

    def fill(self, x: int, y: int):
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise InvalidInstance(f"cell {(x, y)} outside {self.width}x{self.height}")
        self.cells.add((x, y))

    def carve(self, x: int, y: int):
        self.cells.discard((x, y))

    def fill_rect(self, x0: int, y0: int, x1: int, y1: int):
        """Fill [x0, x1) x [y0, y1)."""
        for x in range(x0, x1):
            for y in range(y0, y1):
                self.fill(x, y)

    def fill_col(self, x: int, y0: int, y1: int):
        self.fill_rect(x, y0, x + 1, y1)

    def fill_row(self, y: int, x0: int, x1: int):
        self.fill_rect(x0, y, x1, y + 1)

    def freeze(self) -> Board:
        return Board.from_cells(self.width, self.height, self.cells)


def states_for_cells(piece: PieceType, cells) -> list[PieceState]:
    """All piece states whose occupied cells equal the given four cells."""
    want = sorted(cells)
    if len(want) != 4:
        raise ValueError("a placement covers exactly four cells")
    out = []
    for orient in Orientation:
        offs = OFFSETS[piece, orient]
        dx0, dy0 = offs[0]
        x = 2 * want[0][0] - dx0
        y = 2 * want[0][1] - dy0
        st = PieceState(piece, orient, x, y)
        if sorted(st.cells()) == want:
            out.append(st)
    return out


def state_for_cells(piece: PieceType, cells) -> PieceState:
    states = states_for_cells(piece, cells)
    if not states:
        raise WitnessBug(f"no {piece} state covers {sorted(cells)}")
    return states[0]


def drop_cells(board: Board, piece: PieceType, orient: Orientation, left_col: int):
    """Cells a piece ends on when hard-dropped from above the stack with its
    leftmost occupied column at ``left_col``."""
    offs = OFFSETS[piece, orient]
    min_dx = min(dx for dx, _ in offs)
    min_dy = min(dy for _, dy in offs)
    st = PieceState(piece, orient, 2 * left_col - min_dx, 2 * (board.height + 4) - min_dy)
    if collides(board, st):
        raise WitnessBug(f"drop entry blocked for {piece} at column {left_col}")
    return hard_drop(board, st).cells()


@dataclass
class Player:
    """Applies intended placements to a live board, recording the script."""

    instance: Instance
    check_reachability: bool = True
    board: Board = field(init=False)
    script: list[PieceState] = field(init=False, default_factory=list)
    cleared_rows: int = field(init=False, default=0)

    def __post_init__(self):
        self.board = self.instance.board

    @property
    def cursor(self) -> int:
        return len(self.script)

    def expect(self, piece: PieceType):
        if self.cursor >= len(self.instance.sequence):
            raise WitnessBug("sequence exhausted")
        actual = self.instance.sequence[self.cursor]
        if actual is not piece:
            raise WitnessBug(
                f"piece {self.cursor}: sequence has {actual}, witness wants {piece}"
            )

    def place_cells(self, piece: PieceType, cells) -> PieceState:
        self.expect(piece)
        st = state_for_cells(piece, cells)
        if not is_supported(self.board, st):
            raise WitnessBug(f"piece {self.cursor}: {sorted(cells)} unsupported\n{self.board.render()}")
        if self.check_reachability and not _placement_reachable(
            self.board, st, self.instance.mode
        ):
            raise WitnessBug(
                f"piece {self.cursor} ({piece}): {sorted(cells)} not reachable under "
                f"{self.instance.mode}\n{self.board.render()}"
            )
        try:
            self.board, cleared = lock_and_clear(self.board, st)
        except OverflowLock as exc:
            raise WitnessBug(f"piece {self.cursor}: {exc}") from exc
        self.cleared_rows += cleared
        self.script.append(st)
        return st

    def drop(self, piece: PieceType, orient: Orientation, left_col: int) -> PieceState:
        return self.place_cells(piece, drop_cells(self.board, piece, orient, left_col))

    def column_height(self, x: int) -> int:
        for y in range(self.board.height - 1, -1, -1):
            if self.board.filled(x, y):
                return y + 1
        return 0

    def top_hole(self, x: int) -> int:
        """Highest empty cell of column x below its fill top (or the floor)."""
        h = self.column_height(x)
        for y in range(h - 1, -1, -1):
            if not self.board.filled(x, y):
                return y
        return 0

    def finish(self) -> list[PieceState]:
        if self.cursor != len(self.instance.sequence):
            raise WitnessBug(
                f"witness covers {self.cursor} of {len(self.instance.sequence)} pieces"
            )
        return list(self.script)


def find_placement_covering(
    board: Board, piece: PieceType, mode: GravityMode, cells
) -> PieceState | None:
    """Search the reachable placements for one covering the given cells."""
    want = frozenset(cells)
    for st in reachable_placements(board, piece, mode):
        if st.cell_key() == want:
            return st
    return None
