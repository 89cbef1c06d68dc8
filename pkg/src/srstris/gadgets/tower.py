"""Pocket-tower constructions for the non-I piece pairs.

The paper sequence for each pair is kept verbatim; the board is a tower of
piece-shaped pockets, one level per sequence piece, laid bottom-up in
reverse sequence order.  Each piece drops into the topmost remaining pocket,
completing that level's rows, which clear immediately and expose the next
level.  Pocket hole/prefill patterns alternate between a left and a right
band so that every pocket's floor is solid; all placements are plain drops.

Levels sit at fixed absolute rows for their whole lifetime (clears only ever
remove rows above them), so witness targets are computed once, statically.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from ..chain import ThreePartitionInstance
from ..engine import GravityMode, PieceState
from ..model import (
    Blowup,
    Instance,
    Objective,
    PieceSequence,
    ReductionMeta,
    mirror_instance,
)
from ..pieces import MIRROR_ORIENT, MIRROR_PIECE, PieceType
from .base import GridPainter, InvalidInstance, Player, UnsupportedPair, state_for_cells
from .ifamily import validate_partition

P = PieceType

BASE_PAIRS = ("OJ", "OS", "OT", "ST", "SZ", "JZ", "JT", "JS", "JL")
MIRRORS = {"OL": "OJ", "OZ": "OS", "TZ": "ST", "LS": "JZ", "LT": "JT", "LZ": "JS"}

BAND_WIDTH = 4

# per piece: (level height, hole cells, prefill cells) within a 4-wide band,
# rows counted from the level base
POCKETS = {
    P.O: (2, ((0, 0), (1, 0), (0, 1), (1, 1)), ((2, 0), (3, 0), (2, 1), (3, 1))),
    P.I: (4, ((0, 0), (0, 1), (0, 2), (0, 3)),
          tuple((c, r) for c in (1, 2, 3) for r in range(4))),
    P.J: (3, ((0, 0), (0, 1), (0, 2), (1, 2)),
          ((1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2))),
    P.L: (3, ((1, 0), (1, 1), (1, 2), (0, 2)),
          ((0, 0), (0, 1), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2))),
    # S and Z pockets are entered by a kick off the one-cell shelf beside
    # the hole (drop beside, rotate in); plain drops cannot seal an S shape
    P.S: (2, ((1, 0), (2, 0), (2, 1), (3, 1)), ((0, 0), (0, 1), (1, 1), (3, 0))),
    P.Z: (2, ((2, 0), (1, 0), (1, 1), (0, 1)), ((3, 0), (3, 1), (2, 1), (0, 0))),
    P.T: (2, ((0, 1), (1, 1), (2, 1), (1, 0)), ((0, 0), (2, 0), (3, 0), (3, 1))),
}


def fill_multiplier(pair: str, n: int) -> int:
    return {
        "OJ": 8 * n, "OS": 4 * n, "OT": 4 * n, "ST": 4 * n, "SZ": 1,
        "JZ": 6 * n, "JT": 6 * n, "JS": 6 * n, "JL": 8 * n,
    }[pair]


def build_sequence(pair: str, inst: ThreePartitionInstance) -> PieceSequence:
    """The per-element and finale piece formulas, exactly as stated."""
    n, t = inst.n, inst.t
    k = n // 3
    mu = fill_multiplier(pair, n)
    segs: list[tuple[PieceType, int]] = []
    for ai in inst.a:
        fills = mu * ai
        if pair == "OJ":
            segs += [(P.O, n - 1), (P.J, fills), (P.O, 1), (P.J, k)]
        elif pair == "OS":
            segs += [(P.O, k - 1), (P.S, fills), (P.O, 1), (P.S, k)]
        elif pair == "OT":
            segs += [(P.O, k - 1), (P.T, fills), (P.O, 1), (P.T, k), (P.O, k)]
        elif pair == "ST":
            segs += [(P.T, k - 1), (P.S, fills), (P.T, 1), (P.S, k)]
        elif pair == "SZ":
            segs += [(P.Z, k - 1), (P.S, fills), (P.Z, 1)]
        elif pair == "JZ":
            segs += [(P.Z, 2 * n // 3 - 2), (P.J, fills), (P.Z, 2), (P.J, 2 * n // 3)]
        elif pair == "JT":
            segs += [(P.T, 2 * n // 3 - 2), (P.J, fills), (P.T, 2), (P.J, 2 * n // 3)]
        elif pair == "JS":
            segs += [(P.S, k - 1), (P.J, fills), (P.S, 1), (P.J, 4 * n // 3)]
        elif pair == "JL":
            segs += [(P.L, 2 * n // 3 - 2), (P.J, fills), (P.L, 2), (P.J, k), (P.L, n)]
        else:
            raise UnsupportedPair(pair)
    if pair == "OJ":
        segs += [(P.J, 8 * n * t - 2)]
    elif pair == "OS":
        segs += [(P.O, k), (P.S, k)]
    elif pair == "OT":
        segs += [(P.T, 8 * n * t - 2)]
    elif pair == "ST":
        segs += [(P.T, k), (P.S, k)]
    elif pair == "SZ":
        segs += [(P.Z, k + 2 * n * (n + 1) // 3)]
    elif pair in ("JZ", "JT", "JS"):
        segs += [(P.J, 6 * n * t - 2)]
    elif pair == "JL":
        segs += [(P.J, 8 * n * t - 2)]
    return PieceSequence.from_segments(segs)


def blowup_formula(pair: str, n: int, t: int) -> Blowup:
    """Solution-count multipliers as stated per construction."""
    k = n // 3
    f = factorial
    if pair == "OJ":
        return Blowup(f(k) * (f(k) ** 3 * f(k - 1)) ** n, ((P.J, 4, 8 * n * t, k),))
    if pair == "OS":
        return Blowup(f(k) * (f(k - 1) * f(k)) ** n * f(k) ** 2)
    if pair == "OT":
        return Blowup(f(k) * (f(k - 1) * f(k) ** 2) ** n)
    if pair == "ST":
        return Blowup(f(k) * f(k - 1) ** n * f(k) ** (n + 2))
    if pair == "SZ":
        return Blowup(f(k) * f(k - 1) ** n * f(k) ** (2 * n + 3))
    if pair in ("JZ", "JT"):
        num = f(2 * n // 3 - 2) * f(k) ** 2
        den = 2 ** (k - 1)
        assert num % den == 0
        return Blowup(f(k) * (num // den) ** n, ((P.J, 4, 6 * n * t, k),))
    if pair == "JS":
        return Blowup(f(k) * (f(k - 1) * f(k) ** 4) ** n, ((P.J, 4, 6 * n * t, k),))
    if pair == "JL":
        num = f(2 * n // 3 - 2) * f(2 * n // 3) * f(k) ** 2
        den = 2 ** (2 * n // 3 - 1)
        assert num % den == 0
        return Blowup(f(k) * (num // den) ** n, ((P.J, 4, 8 * n * t, k),))
    raise UnsupportedPair(pair)


@dataclass(frozen=True)
class TowerLayout:
    width: int
    # one (band_x0, base_row, piece) triple per sequence piece
    levels: tuple[tuple[int, int, PieceType], ...]
    height: int


def _layout(sequence: PieceSequence) -> TowerLayout:
    width = 3 + 2 * BAND_WIDTH
    levels = []
    base = 0
    # the last piece consumes the bottom level, the first the top one
    for i, piece in enumerate(reversed(sequence)):
        band_x0 = 1 if i % 2 == 0 else 2 + BAND_WIDTH
        h = POCKETS[piece][0]
        levels.append((band_x0, base, piece))
        base += h
    return TowerLayout(width, tuple(reversed(levels)), base)


def _paint(layout: TowerLayout) -> GridPainter:
    grid = GridPainter(layout.width, layout.height)
    grid.fill_col(0, 0, layout.height)
    grid.fill_col(1 + BAND_WIDTH, 0, layout.height)
    grid.fill_col(layout.width - 1, 0, layout.height)
    for band_x0, base, piece in layout.levels:
        h, _, prefill = POCKETS[piece]
        other_x0 = 2 + BAND_WIDTH if band_x0 == 1 else 1
        for dx, dy in prefill:
            grid.fill(band_x0 + dx, base + dy)
        for c in range(other_x0, other_x0 + BAND_WIDTH):
            grid.fill_col(c, base, base + h)
    return grid


def compile_pair(pair: str, inst: ThreePartitionInstance,
                 mode: GravityMode = GravityMode.STANDARD) -> Instance:
    base = MIRRORS.get(pair, pair)
    if base not in BASE_PAIRS:
        raise UnsupportedPair(pair)
    if mode is not GravityMode.STANDARD:
        raise InvalidInstance(f"{pair} is only claimed under standard gravity")
    sequence = build_sequence(base, inst)
    layout = _layout(sequence)
    board = _paint(layout).freeze()
    meta = ReductionMeta(
        construction=base,
        source=f"3partition a={','.join(map(str, inst.a))}",
        blowup=blowup_formula(base, inst.n, inst.t),
        relaxed=inst.relaxed,
    )
    out = Instance(board, sequence, Objective.CLEAR, GravityMode.STANDARD, meta)
    if pair != base:
        out = mirror_instance(out)
    return out


def _mirror_state(st: PieceState, width: int) -> PieceState:
    return PieceState(
        MIRROR_PIECE[st.piece], MIRROR_ORIENT[st.orient], 2 * width - 2 - st.x, st.y
    )


def witness_for_pair(pair: str, inst: ThreePartitionInstance, partition
                     ) -> tuple[Instance, list[PieceState]]:
    base = MIRRORS.get(pair, pair)
    validate_partition(inst, partition)
    base_inst = compile_pair(base, inst)
    layout = _layout(base_inst.sequence)
    player = Player(base_inst)
    for band_x0, base_row, piece in layout.levels:
        _, hole, _ = POCKETS[piece]
        cells = [(band_x0 + dx, base_row + dy) for dx, dy in hole]
        player.place_cells(piece, cells)
    script = player.finish()
    if not player.board.is_empty():
        raise InvalidInstance("witness did not clear the board\n" + player.board.render(12))
    out = base_inst
    if pair != base:
        out = mirror_instance(base_inst)
        script = [_mirror_state(st, base_inst.board.width) for st in script]
    return out, script
