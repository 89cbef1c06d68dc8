"""Playfield representation.

Rows are integer bitmasks, row 0 at the bottom, bit x set when column x is
filled.  Boards are immutable values; engine operations hand back new boards.
Cells at or above ``height`` belong to the hidden spawn zone: they are always
empty and locking there loses the game.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class OverflowLock(Exception):
    """A piece locked with a cell at or above the board ceiling."""


@dataclass(frozen=True)
class Board:
    width: int
    height: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("board dimensions must be positive")
        if len(self.rows) != self.height:
            raise ValueError("row count does not match height")
        full = (1 << self.width) - 1
        if any(r & ~full for r in self.rows):
            raise ValueError("filled cell outside board bounds")

    @classmethod
    def empty(cls, width: int, height: int) -> "Board":
        return cls(width, height, (0,) * height)

    @classmethod
    def from_cells(cls, width: int, height: int, cells: Iterable[tuple[int, int]]) -> "Board":
        rows = [0] * height
        for x, y in cells:
            if not (0 <= x < width and 0 <= y < height):
                raise ValueError(f"cell {(x, y)} outside {width}x{height} board")
            rows[y] |= 1 << x
        return cls(width, height, tuple(rows))

    @classmethod
    def from_strings(cls, lines: list[str], width: int | None = None) -> "Board":
        """Build from '.'/'#' art given top row first (as humans draw it)."""
        w = width if width is not None else max(len(ln) for ln in lines)
        rows = []
        for ln in reversed(lines):
            if len(ln) > w:
                raise ValueError("row longer than width")
            mask = 0
            for x, ch in enumerate(ln):
                if ch == "#":
                    mask |= 1 << x
                elif ch != ".":
                    raise ValueError(f"bad cell char {ch!r}")
            rows.append(mask)
        return cls(w, len(rows), tuple(rows))

    def filled(self, x: int, y: int) -> bool:
        if y >= self.height:
            return False
        return bool(self.rows[y] >> x & 1)

    def cell_count(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def is_empty(self) -> bool:
        return not any(self.rows)

    def full_row_mask(self) -> int:
        return (1 << self.width) - 1

    def filled_cells(self) -> Iterator[tuple[int, int]]:
        for y, row in enumerate(self.rows):
            while row:
                x = (row & -row).bit_length() - 1
                yield (x, y)
                row &= row - 1

    def mirrored(self) -> "Board":
        w = self.width
        out = []
        for row in self.rows:
            m = 0
            for x in range(w):
                if row >> x & 1:
                    m |= 1 << (w - 1 - x)
            out.append(m)
        return Board(w, self.height, tuple(out))

    def render(self, top_row: int | None = None) -> str:
        """ASCII art, top row first (debugging and fixtures)."""
        top = self.height if top_row is None else top_row
        lines = []
        for y in range(top - 1, -1, -1):
            row = self.rows[y] if y < self.height else 0
            lines.append("".join("#" if row >> x & 1 else "." for x in range(self.width)))
        return "\n".join(lines)
