import random

import pytest

from srstris.board import Board
from srstris.engine import GravityMode, PieceState, hard_drop, spawn_state
from srstris.model import Instance, Objective, PieceSequence
from srstris.solver import (
    Budget,
    ReplayOutcome,
    count_rectangle_fillings,
    naive_count,
    replay,
    solve,
)
from srstris.pieces import Orientation, PieceType


def make(board, seq, objective=Objective.CLEAR, mode=GravityMode.STANDARD):
    return Instance(board, PieceSequence.parse(seq), objective, mode)


def test_single_i_clears_4x4():
    inst = make(Board.empty(4, 4), "I")
    res = solve(inst, want_count=True)
    assert res.decision == "yes"
    # only the horizontal placement clears; the four vertical ones leave cells
    assert res.count == 1
    assert naive_count(inst) == 1


def test_empty_sequence_vacuous_clear():
    inst = make(Board.empty(4, 4), "")
    res = solve(inst, want_count=True)
    assert res.decision == "yes" and res.count == 1
    inst2 = make(Board.from_cells(4, 4, [(0, 0)]), "")
    res2 = solve(inst2, want_count=True)
    assert res2.decision == "no" and res2.count == 0


def test_budget_exhausted_is_distinct():
    inst = make(Board.empty(4, 8), "J*6")
    res = solve(inst, want_count=True, budget=Budget(max_nodes=10))
    assert res.decision == "exhausted"
    assert res.count is None


def test_decision_witness_replays():
    inst = make(Board.empty(4, 4), "O,O,O,O")
    res = solve(inst)
    assert res.decision == "yes"
    assert replay(inst, res.witness).status == "cleared"


def test_replay_rejects_perturbed_witness():
    inst = make(Board.empty(4, 4), "I")
    res = solve(inst)
    target = res.witness[0]
    shifted = PieceState(target.piece, target.orient, target.x + 2, target.y)
    out = replay(inst, [shifted])
    assert not out.ok


def test_replay_checks_piece_types():
    inst = make(Board.empty(4, 4), "I")
    out = replay(inst, [PieceState(PieceType.O, Orientation.SPAWN, 3, 3)])
    assert out.status == "failed" and out.failed_index == 0


def test_survive_objective_counts_all_safe_paths():
    # a single O on a wide empty board: every placement survives
    inst = make(Board.empty(6, 6), "O", objective=Objective.SURVIVE)
    res = solve(inst, want_count=True)
    assert res.decision == "yes"
    assert res.count == 5


def test_memo_matches_naive_on_seeded_boards():
    rng = random.Random(7)
    for _ in range(6):
        w = rng.randint(3, 5)
        h = rng.randint(4, 6)
        cells = {
            (rng.randrange(w), rng.randrange(2)) for _ in range(rng.randint(0, 4))
        }
        board = Board.from_cells(w, h, cells)
        seq = "".join(rng.choice("IOTSZJL") for _ in range(3))
        for mode in GravityMode:
            inst = Instance(
                board, PieceSequence(seq), Objective.CLEAR, mode
            )
            assert solve(inst, want_count=True).count == naive_count(inst)


def test_f4_j_base_cases():
    assert count_rectangle_fillings(PieceType.J, 4, 0) == 1
    # one J never occupies four cells of a single row
    assert count_rectangle_fillings(PieceType.J, 4, 1) == 0


def test_f4_matches_naive_small():
    for m in (1, 2, 3):
        inst = make(Board.empty(4, m), f"J*{m}")
        assert count_rectangle_fillings(PieceType.J, 4, m) == naive_count(inst)


def test_f4_is_memoized():
    a = count_rectangle_fillings(PieceType.J, 4, 2)
    b = count_rectangle_fillings(PieceType.J, 4, 2)
    assert a == b


def test_determinism_across_runs():
    inst = make(Board.empty(5, 6), "T,S,Z")
    first = solve(inst, want_count=True)
    second = solve(inst, want_count=True)
    assert first.decision == second.decision and first.count == second.count
