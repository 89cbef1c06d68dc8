"""Survival construction for {I,O} under hard-drop-only / 20G, and its
clearing extension with T pieces.

Board layout, left to right: a solid outer column, the reserve column (a
deep bucket sealed by a single square at the top), then alternating
separator and bucket columns, and a final solid column that makes the width
even.  The two rows above the structure
are the staging area: each round's O pieces tile them completely except for
a 2x2 gap over the chosen bucket, the I pieces drop through the gap, and the
closing O seals the gap, clearing both rows and resetting the board.

The reserve is sealed from above for I/O traffic; its rows complete (and
auto-clear) only when every bucket is full, which reopens it exactly when
the clearing finale needs it.  One sealed hole in the right filler
column makes the total area divisible by the width and leaves the clearing
finale a T-shaped corner to finish in.
"""

from __future__ import annotations

from math import factorial

from ..chain import ThreePartitionInstance
from ..engine import GravityMode, Orientation, PieceState
from ..model import Blowup, Instance, Objective, PieceSequence, ReductionMeta
from ..pieces import PieceType
from .base import GridPainter, InvalidInstance, Player, WitnessBug
from .ifamily import validate_partition
from .search import search_clear


def board_width(n: int) -> int:
    return 2 * n // 3 + 4


def bucket_col(j: int) -> int:
    return 3 + 2 * j


def build_board(inst: ThreePartitionInstance):
    n, t = inst.n, inst.t
    w = board_width(n)
    h = 4 * t + 2
    grid = GridPainter(w, h)
    grid.fill_col(0, 0, 4 * t)
    # reserve column: sealed from above by a single square; its rows keep
    # every structure row incomplete until the buckets are full, so the
    # staging area above the structure never grows past two rows
    grid.fill(1, 4 * t - 1)
    # separators and the right-edge filler column; the filler carries one
    # sealed hole that balances the clearing finale's area
    for x in range(2, w, 2):
        grid.fill_col(x, 0, 4 * t)
    grid.fill_col(w - 1, 0, 4 * t)
    grid.carve(w - 1, 4 * t - 2)
    return grid.freeze()


def survival_sequence(inst: ThreePartitionInstance) -> PieceSequence:
    n = inst.n
    segments = []
    for ai in inst.a:
        segments.append((PieceType.O, n // 3 + 1))
        segments.append((PieceType.I, ai))
        segments.append((PieceType.O, 1))
    return PieceSequence.from_segments(segments)


FINALE_MODES = (GravityMode.HARD_DROP_ONLY, GravityMode.TWENTY_G)


def compile_survival(inst: ThreePartitionInstance, mode: GravityMode) -> Instance:
    if mode not in FINALE_MODES:
        raise InvalidInstance("survival construction targets harddrop or 20g")
    meta = ReductionMeta(
        construction="survival-IO",
        source=f"3partition a={','.join(map(str, inst.a))}",
        blowup=Blowup(1),  # decision-level reduction; no monious claim
        relaxed=inst.relaxed,
    )
    return Instance(build_board(inst), survival_sequence(inst), Objective.SURVIVE, mode, meta)


def compile_survival_clearing(inst: ThreePartitionInstance, mode: GravityMode) -> Instance:
    base = compile_survival(inst, mode)
    n, t = inst.n, inst.t
    finale = PieceSequence.from_segments(
        [
            (PieceType.T, 1),
            (PieceType.I, t),
            (PieceType.O, 2 * n // 3),
            (PieceType.T, 3),
        ]
    )
    meta = ReductionMeta(
        construction="survival-clearing-IOT",
        source=base.meta.source,
        blowup=Blowup(1),
        relaxed=inst.relaxed,
    )
    return Instance(
        base.board,
        PieceSequence(tuple(base.sequence) + tuple(finale)),
        Objective.CLEAR,
        mode,
        meta,
    )


def _staging_rows(player: Player) -> int:
    # structure top: separators always reach it
    return player.column_height(2)


def _play_survival_rounds(player: Player, inst: ThreePartitionInstance, partition):
    groups = validate_partition(inst, partition)
    bottle_of = {}
    for j, group in enumerate(groups):
        for idx in group:
            bottle_of[idx] = j
    n = inst.n
    pairs = board_width(n) // 2
    for i in range(n):
        chosen = bottle_of[i]
        chosen_pair = (bucket_col(chosen) - 1) // 2
        for p in range(pairs):
            if p == chosen_pair:
                continue
            # the blocker row can auto-clear mid-round, shifting the staging
            # rows, so recompute the structure top for every O
            x, base = 2 * p, _staging_rows(player)
            player.place_cells(
                PieceType.O,
                [(x, base), (x + 1, base), (x, base + 1), (x + 1, base + 1)],
            )
        for _ in range(inst.a[i]):
            player.drop(PieceType.I, Orientation.R, bucket_col(chosen))
        x, base = 2 * chosen_pair, _staging_rows(player)
        player.place_cells(
            PieceType.O,
            [(x, base), (x + 1, base), (x, base + 1), (x + 1, base + 1)],
        )


def witness_survival(
    inst: ThreePartitionInstance, partition, mode: GravityMode
) -> tuple[Instance, list[PieceState]]:
    out = compile_survival(inst, mode)
    player = Player(out)
    _play_survival_rounds(player, inst, partition)
    return out, player.finish()


def witness_survival_clearing(
    inst: ThreePartitionInstance, partition, mode: GravityMode
) -> tuple[Instance, list[PieceState]]:
    out = compile_survival_clearing(inst, mode)
    player = Player(out)
    _play_survival_rounds(player, inst, partition)
    finale = tuple(out.sequence)[player.cursor :]
    # the finale line is mode-independent here; searching under hard-drop
    # converges much faster and place_cells re-validates each placement under
    # the instance's actual mode
    tail = search_clear(player.board, finale, GravityMode.HARD_DROP_ONLY, node_cap=1_500_000)
    if tail is None:
        raise WitnessBug("no clearing line for the finale\n" + player.board.render())
    for st in tail:
        player.place_cells(st.piece, st.cells())
    if not player.board.is_empty():
        raise WitnessBug("finale did not clear the board")
    return out, player.finish()
