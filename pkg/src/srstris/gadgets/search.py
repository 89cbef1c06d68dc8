"""Best-first witness search for the hand-over-hand endgame phases.

The exact solver deliberately has no heuristics; witness generation for
finale sequences wants them.  This depth-first search orders placements by
rows cleared (then by how low the piece sits) and returns the first
placement list that empties the board, with a node cap so a wrong gadget
design fails fast instead of hanging.
"""

from __future__ import annotations

from ..board import Board, OverflowLock
from ..engine import GravityMode, PieceState, SpawnBlocked, lock_and_clear, reachable_placements


def search_clear(
    board: Board,
    sequence,
    mode: GravityMode,
    node_cap: int = 200_000,
) -> list[PieceState] | None:
    nodes = 0
    seq = tuple(sequence)
    width = board.width
    memo_dead: set[tuple] = set()

    def rec(b: Board, i: int, acc: list[PieceState]):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise TimeoutError(f"search_clear cap {node_cap} hit")
        if i == len(seq):
            return b.is_empty()
        if (b.cell_count() + 4 * (len(seq) - i)) % width:
            return False
        key = (b.rows, i)
        if key in memo_dead:
            return False
        try:
            options = reachable_placements(b, seq[i], mode)
        except SpawnBlocked:
            options = []
        scored = []
        for st in options:
            try:
                nb, cleared = lock_and_clear(b, st)
            except OverflowLock:
                continue
            height_sum = sum(y for _, y in st.cells())
            scored.append((-cleared, height_sum, st, nb))
        scored.sort(key=lambda item: (item[0], item[1]))
        for _, _, st, nb in scored:
            acc.append(st)
            if rec(nb, i + 1, acc):
                return True
            acc.pop()
        memo_dead.add(key)
        return False

    acc: list[PieceState] = []
    if rec(board, 0, acc):
        return acc
    return None
