"""Tetromino geometry and SRS wall-kick data.

Coordinates use a half-cell lattice so the two rotation-center conventions
(cell center for J/L/S/T/Z, box corner for I/O) share one integer
representation.  The center of grid cell ``(cx, cy)`` sits at half-cell point
``(2*cx, 2*cy)``; points with odd coordinates are cell corners.  A piece's
occupied cells are derived from half-cell offsets of their centers relative
to the rotation center, so J/L/S/T/Z carry even offsets and I/O odd ones.

Positive x is rightwards, positive y upwards; orientations are the four
clockwise steps 0, R, 2, L.
"""

from __future__ import annotations

from enum import Enum, IntEnum


class PieceType(str, Enum):
    I = "I"
    O = "O"
    T = "T"
    S = "S"
    Z = "Z"
    J = "J"
    L = "L"

    def __str__(self) -> str:
        return self.value


class Orientation(IntEnum):
    SPAWN = 0
    R = 1
    TWO = 2
    L = 3

    def cw(self) -> "Orientation":
        return Orientation((self + 1) % 4)

    def ccw(self) -> "Orientation":
        return Orientation((self + 3) % 4)

    def label(self) -> str:
        return ("0", "R", "2", "L")[self]


# Mirror partners under reflection through a vertical axis.
MIRROR_PIECE = {
    PieceType.I: PieceType.I,
    PieceType.O: PieceType.O,
    PieceType.T: PieceType.T,
    PieceType.S: PieceType.Z,
    PieceType.Z: PieceType.S,
    PieceType.J: PieceType.L,
    PieceType.L: PieceType.J,
}

# Reflection swaps the sense of rotation: 0 and 2 are self-mirrored, R <-> L.
MIRROR_ORIENT = {
    Orientation.SPAWN: Orientation.SPAWN,
    Orientation.R: Orientation.L,
    Orientation.TWO: Orientation.TWO,
    Orientation.L: Orientation.R,
}

_SPAWN_OFFSETS = {
    # half-cell offsets of the four cell centers in the default orientation
    PieceType.I: ((-3, 1), (-1, 1), (1, 1), (3, 1)),
    PieceType.O: ((-1, 1), (1, 1), (-1, -1), (1, -1)),
    PieceType.T: ((0, 2), (-2, 0), (0, 0), (2, 0)),
    PieceType.S: ((0, 2), (2, 2), (-2, 0), (0, 0)),
    PieceType.Z: ((-2, 2), (0, 2), (0, 0), (2, 0)),
    PieceType.J: ((-2, 2), (-2, 0), (0, 0), (2, 0)),
    PieceType.L: ((2, 2), (-2, 0), (0, 0), (2, 0)),
}


def _cw(offsets):
    return tuple(sorted((y, -x) for x, y in offsets))


def _build_offsets():
    table = {}
    for piece, spawn in _SPAWN_OFFSETS.items():
        cur = tuple(sorted(spawn))
        for orient in Orientation:
            table[piece, orient] = cur
            cur = _cw(cur)
    return table


# (piece, orientation) -> sorted tuple of half-cell offsets of cell centers.
OFFSETS = _build_offsets()

# O is rotation-invariant by construction; assert rather than special-case.
assert all(
    OFFSETS[PieceType.O, o] == OFFSETS[PieceType.O, Orientation.SPAWN]
    for o in Orientation
)


# SRS kick data for J, L, S, T and Z: translations of the rotation center in
# whole cells, ordered test 1 through test 5.
KICKS_JLSTZ = {
    (Orientation.SPAWN, Orientation.R): ((0, 0), (-1, 0), (-1, 1), (0, -2), (-1, -2)),
    (Orientation.R, Orientation.SPAWN): ((0, 0), (1, 0), (1, -1), (0, 2), (1, 2)),
    (Orientation.R, Orientation.TWO): ((0, 0), (1, 0), (1, -1), (0, 2), (1, 2)),
    (Orientation.TWO, Orientation.R): ((0, 0), (-1, 0), (-1, 1), (0, -2), (-1, -2)),
    (Orientation.TWO, Orientation.L): ((0, 0), (1, 0), (1, 1), (0, -2), (1, -2)),
    (Orientation.L, Orientation.TWO): ((0, 0), (-1, 0), (-1, -1), (0, 2), (-1, 2)),
    (Orientation.L, Orientation.SPAWN): ((0, 0), (-1, 0), (-1, -1), (0, 2), (-1, 2)),
    (Orientation.SPAWN, Orientation.L): ((0, 0), (1, 0), (1, 1), (0, -2), (1, -2)),
}

# SRS kick data for I pieces.
KICKS_I = {
    (Orientation.SPAWN, Orientation.R): ((0, 0), (-2, 0), (1, 0), (-2, -1), (1, 2)),
    (Orientation.R, Orientation.SPAWN): ((0, 0), (2, 0), (-1, 0), (2, 1), (-1, -2)),
    (Orientation.R, Orientation.TWO): ((0, 0), (-1, 0), (2, 0), (-1, 2), (2, -1)),
    (Orientation.TWO, Orientation.R): ((0, 0), (1, 0), (-2, 0), (1, -2), (-2, 1)),
    (Orientation.TWO, Orientation.L): ((0, 0), (2, 0), (-1, 0), (2, 1), (-1, -2)),
    (Orientation.L, Orientation.TWO): ((0, 0), (-2, 0), (1, 0), (-2, -1), (1, 2)),
    (Orientation.L, Orientation.SPAWN): ((0, 0), (1, 0), (-2, 0), (1, -2), (-2, 1)),
    (Orientation.SPAWN, Orientation.L): ((0, 0), (-1, 0), (2, 0), (-1, 2), (2, -1)),
}

_NO_KICK = ((0, 0),) * 5


def kick_offsets(piece: PieceType, src: Orientation, dst: Orientation):
    """Ordered kick tests for a 90-degree transition, as cell translations.

    O rotation is a no-op, so its table degenerates to five null tests.
    180-degree transitions are not modeled and are rejected.
    """
    if (src - dst) % 4 == 2 or src == dst:
        raise ValueError(f"unsupported rotation {src.label()}->{dst.label()}")
    if piece is PieceType.O:
        return _NO_KICK
    if piece is PieceType.I:
        return KICKS_I[src, dst]
    return KICKS_JLSTZ[src, dst]
