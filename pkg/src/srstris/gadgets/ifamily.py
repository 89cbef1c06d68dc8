"""Bottle constructions for the pairs {I,P}: P in J, L, O, S, T, Z.

Shape of every bottle: a one-cell-wide body shaft (the bottle body) holding
t units of 4*mu cells each, under a neck of n blocker levels.  Each level is
a pocket shaped exactly like the partner piece: filling it seals the shaft,
and the level's rows clear once every bottle's pocket at that height is
filled.  Levels are consumed top-down (bottom-up for the featureless {I,O}
neck, where the blocking O simply rests on the shaft ledge).

Filling I pieces drop vertically through the open pocket column into the
body; the {I,S}/{I,Z} pockets are reachable only by a kick (the S piece
rotates in off a one-cell shelf), which is why those two variants exist only
under standard gravity.  The J and Z variants are emitted by mirroring.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from ..chain import ThreePartitionInstance
from ..engine import GravityMode, Orientation, PieceState
from ..model import Blowup, Instance, Objective, PieceSequence, ReductionMeta, mirror_instance
from ..pieces import PieceType
from .base import GridPainter, InvalidInstance, InvalidPartition, Player, UnsupportedPair


@dataclass(frozen=True)
class NeckTemplate:
    partner: PieceType
    neck_width: int
    level_rows: int
    shaft: int  # through-column index within the neck
    hole: tuple[tuple[int, int], ...]  # (col, row) offsets within a level
    prefill: tuple[tuple[int, int], ...]


TEMPLATES = {
    "IL": NeckTemplate(
        PieceType.L, 2, 3, shaft=1,
        hole=((1, 0), (1, 1), (1, 2), (0, 2)),
        prefill=((0, 0), (0, 1)),
    ),
    "IT": NeckTemplate(
        PieceType.T, 3, 2, shaft=1,
        hole=((0, 1), (1, 1), (2, 1), (1, 0)),
        prefill=((0, 0), (2, 0)),
    ),
    "IS": NeckTemplate(
        PieceType.S, 4, 2, shaft=2,
        hole=((1, 0), (2, 0), (2, 1), (3, 1)),
        prefill=((0, 0), (0, 1), (1, 1), (3, 0)),
    ),
    "IO": NeckTemplate(
        PieceType.O, 2, 2, shaft=1,
        hole=(),  # featureless: the O rests on the shaft ledge
        prefill=(),
    ),
}

MIRRORED_PAIRS = {"IJ": "IL", "IZ": "IS"}

# which pairs the reduction also supports under restricted gravity
HARD_DROP_PAIRS = {"IJ", "IL", "IO", "IT"}
TWENTY_G_PAIRS = {"IJ", "IL"}


def blowup(n: int) -> Blowup:
    return Blowup(factorial(n // 3) * factorial(n // 3 - 1) ** n)


def fill_multiplier(n: int, relaxed_multiplier: int | None) -> int:
    # strict construction uses 2n filling pieces per unit (unit area 8n)
    return relaxed_multiplier if relaxed_multiplier is not None else 2 * n


@dataclass
class Layout:
    template: NeckTemplate
    n: int
    t: int
    mu: int

    @property
    def body_height(self) -> int:
        return 4 * self.mu * self.t

    @property
    def neck_height(self) -> int:
        return self.template.level_rows * self.n

    @property
    def height(self) -> int:
        return self.body_height + self.neck_height

    def bottle_left(self, j: int) -> int:
        return 1 + j * (self.template.neck_width + 1)

    def shaft_col(self, j: int) -> int:
        return self.bottle_left(j) + self.template.shaft

    def width(self, bottles: int) -> int:
        return 1 + bottles * (self.template.neck_width + 1)

    def check(self, relaxed: bool):
        unit_area = 4 * self.mu
        neck_area = 4 * self.n if self.template.hole else 4 * self.n  # n pockets of 4 cells
        if not relaxed:
            assert unit_area == 8 * self.n, "strict unit is an 8n-cell rectangle"
            assert neck_area == 4 * self.n, "strict neck is 4n cells of pockets"
            assert unit_area > neck_area // self.n * 1, "unit exceeds one top segment"
            assert unit_area > 4, "unit strictly exceeds pocket size"


def _base_pair(pair: str) -> tuple[str, bool]:
    if pair in TEMPLATES:
        return pair, False
    if pair in MIRRORED_PAIRS:
        return MIRRORED_PAIRS[pair], True
    raise UnsupportedPair(pair)


def allowed_modes(pair: str) -> set[GravityMode]:
    modes = {GravityMode.STANDARD}
    if pair in HARD_DROP_PAIRS:
        modes.add(GravityMode.HARD_DROP_ONLY)
    if pair in TWENTY_G_PAIRS:
        modes.add(GravityMode.TWENTY_G)
    return modes


def compile_pair(
    pair: str,
    inst: ThreePartitionInstance,
    mode: GravityMode = GravityMode.STANDARD,
    relaxed_multiplier: int | None = None,
) -> Instance:
    base, mirrored = _base_pair(pair)
    if mode not in allowed_modes(pair):
        raise InvalidInstance(f"{pair} is not claimed under {mode}")
    if relaxed_multiplier is not None and not inst.relaxed:
        raise InvalidInstance("custom fill multiplier requires a relaxed instance")
    tpl = TEMPLATES[base]
    n, t = inst.n, inst.t
    mu = fill_multiplier(n, relaxed_multiplier)
    layout = Layout(tpl, n, t, mu)
    layout.check(inst.relaxed)
    bottles = n // 3
    width = layout.width(bottles)
    grid = GridPainter(width, layout.height)

    # outer and separator walls, full height
    for j in range(bottles + 1):
        x = 0 if j == 0 else layout.bottle_left(j - 1) + tpl.neck_width
        grid.fill_col(x, 0, layout.height)
    for j in range(bottles):
        left = layout.bottle_left(j)
        shaft = layout.shaft_col(j)
        # body: everything but the shaft column
        for c in range(left, left + tpl.neck_width):
            if c != shaft:
                grid.fill_col(c, 0, layout.body_height)
        # neck levels
        for lvl in range(n):
            base_row = layout.body_height + lvl * tpl.level_rows
            for dx, dy in tpl.prefill:
                grid.fill(left + dx, base_row + dy)

    board = grid.freeze()
    segments = []
    for ai in inst.a:
        segments.append((tpl.partner, bottles - 1))
        segments.append((PieceType.I, mu * ai))
        segments.append((tpl.partner, 1))
    sequence = PieceSequence.from_segments(segments)
    meta = ReductionMeta(
        construction=base,
        source=f"3partition a={','.join(map(str, inst.a))}",
        blowup=blowup(n),
        relaxed=inst.relaxed or relaxed_multiplier is not None,
    )
    out = Instance(board, sequence, Objective.CLEAR, mode, meta)
    if mirrored:
        out = mirror_instance(out, allow_i_asymmetry=True)
    return out


def _structure_top(board) -> int:
    for y in range(board.height - 1, -1, -1):
        if board.rows[y]:
            return y + 1
    return 0


def _hole_cells(player: Player, layout: Layout, j: int) -> list[tuple[int, int]]:
    tpl = layout.template
    left = layout.bottle_left(j)
    if tpl.hole:
        top = _structure_top(player.board)
        base_row = top - tpl.level_rows
        return [(left + dx, base_row + dy) for dx, dy in tpl.hole]
    # {I,O}: the blocking O rests on the bottle's ledge (wall column top)
    ledge = player.column_height(left)
    return [(left, ledge), (left + 1, ledge), (left, ledge + 1), (left + 1, ledge + 1)]


def witness_for_pair(
    pair: str,
    inst: ThreePartitionInstance,
    partition,
    mode: GravityMode = GravityMode.STANDARD,
    relaxed_multiplier: int | None = None,
) -> tuple[Instance, list[PieceState]]:
    base, mirrored = _base_pair(pair)
    groups = validate_partition(inst, partition)
    tpl = TEMPLATES[base]
    n, t = inst.n, inst.t
    mu = fill_multiplier(n, relaxed_multiplier)
    layout = Layout(tpl, n, t, mu)
    base_inst = compile_pair(base, inst, mode=mode, relaxed_multiplier=relaxed_multiplier)
    player = Player(base_inst)
    bottle_of = {}
    for j, group in enumerate(groups):
        for idx in group:
            bottle_of[idx] = j
    bottles = n // 3
    for i in range(n):
        target = bottle_of[i]
        for j in range(bottles):
            if j != target:
                player.place_cells(tpl.partner, _hole_cells(player, layout, j))
        for _ in range(mu * inst.a[i]):
            player.drop(PieceType.I, Orientation.R, layout.shaft_col(target))
        player.place_cells(tpl.partner, _hole_cells(player, layout, target))
    script = player.finish()
    if not player.board.is_empty():
        raise InvalidInstance("witness did not clear the board")
    final = base_inst
    if mirrored:
        final = mirror_instance(base_inst, allow_i_asymmetry=True)
        script = [_mirror_state(st, base_inst.board.width) for st in script]
    return final, script


def _mirror_state(st: PieceState, width: int) -> PieceState:
    from ..pieces import MIRROR_ORIENT, MIRROR_PIECE

    return PieceState(
        MIRROR_PIECE[st.piece], MIRROR_ORIENT[st.orient], 2 * width - 2 - st.x, st.y
    )


def validate_partition(inst: ThreePartitionInstance, partition) -> list[tuple[int, ...]]:
    groups = [tuple(g) for g in partition]
    flat = sorted(i for g in groups for i in g)
    if flat != list(range(inst.n)):
        raise InvalidPartition("groups must cover each element index exactly once")
    if any(len(g) != 3 for g in groups):
        raise InvalidPartition("every group must have exactly three elements")
    for g in groups:
        if sum(inst.a[i] for i in g) != inst.t:
            raise InvalidPartition(f"group {g} does not sum to t={inst.t}")
    return groups
