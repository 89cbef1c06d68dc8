import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srstris.board import Board, OverflowLock
from srstris.engine import (
    GravityMode,
    PieceState,
    attempt_rotation,
    collides,
    hard_drop,
    is_supported,
    lock_and_clear,
    occupied_cells,
    reachable_cell_keys,
    reachable_placements,
    rotate,
    shift,
    spawn_state,
)
from srstris.pieces import MIRROR_ORIENT, MIRROR_PIECE, Orientation, PieceType


def state_at(piece, orient, cx, cy):
    """Build a state whose rotation center sits at cell (cx, cy) for JLSTZ,
    or at the corner above-right of that cell for I/O."""
    parity = 1 if piece in (PieceType.I, PieceType.O) else 0
    return PieceState(piece, orient, 2 * cx + parity, 2 * cy + parity)


def test_t_spawn_shape():
    st_ = state_at(PieceType.T, Orientation.SPAWN, 4, 4)
    assert occupied_cells(st_) == {(3, 4), (4, 4), (5, 4), (4, 5)}


def test_o_rotation_identity_cells():
    a = state_at(PieceType.O, Orientation.SPAWN, 4, 4)
    b = state_at(PieceType.O, Orientation.R, 4, 4)
    assert occupied_cells(a) == occupied_cells(b)


def test_rotate_4x_cw_restores_cells():
    board = Board.empty(10, 20)
    st_ = state_at(PieceType.J, Orientation.SPAWN, 4, 10)
    cur = st_
    for _ in range(4):
        cur = attempt_rotation(board, cur, cw=True)
        assert cur is not None
    assert occupied_cells(cur) == occupied_cells(st_)


def test_unobstructed_rotation_uses_test_1():
    board = Board.empty(10, 20)
    st_ = state_at(PieceType.S, Orientation.SPAWN, 4, 10)
    res = rotate(board, st_, cw=True)
    assert res is not None and res.test == 1


def test_o_rotation_succeeds_in_place():
    board = Board.empty(4, 4)
    st_ = state_at(PieceType.O, Orientation.SPAWN, 1, 1)
    res = rotate(board, st_, cw=True)
    assert res is not None and res.test == 1
    assert occupied_cells(res.state) == occupied_cells(st_)


def test_shift_left_blocked_by_wall():
    board = Board.empty(10, 20)
    st_ = state_at(PieceType.T, Orientation.SPAWN, 1, 5)
    assert shift(board, st_, -1, 0) is None
    assert shift(board, st_, 1, 0) is not None


def test_shift_down_blocked_by_filled_cell():
    board = Board.from_cells(10, 20, [(4, 3)])
    st_ = state_at(PieceType.T, Orientation.SPAWN, 4, 4)
    assert shift(board, st_, 0, -1) is None


def test_free_shift_moves_two_half_cells():
    board = Board.empty(10, 20)
    st_ = state_at(PieceType.T, Orientation.SPAWN, 4, 4)
    moved = shift(board, st_, 1, 0)
    assert moved.x == st_.x + 2


def test_hard_drop_supported_unchanged():
    board = Board.from_cells(10, 20, [(3, 0), (4, 0), (5, 0)])
    st_ = state_at(PieceType.T, Orientation.SPAWN, 4, 1)
    assert hard_drop(board, st_) == st_


def test_hard_drop_vertical_i_free_fall():
    board = Board.empty(10, 20)
    st_ = state_at(PieceType.I, Orientation.R, 4, 15)
    dropped = hard_drop(board, st_)
    assert occupied_cells(dropped) == {(5, 0), (5, 1), (5, 2), (5, 3)}


def test_hard_drop_o_rests_on_shadowed_cell():
    board = Board.from_cells(10, 20, [(4, 2)])
    st_ = state_at(PieceType.O, Orientation.SPAWN, 4, 15)
    dropped = hard_drop(board, st_)
    assert occupied_cells(dropped) == {(4, 3), (5, 3), (4, 4), (5, 4)}


def test_lock_and_clear_single_row():
    board = Board.from_strings(["#########."], width=10)
    board = Board(10, 6, board.rows + (0,) * 5)
    st_ = hard_drop(board, state_at(PieceType.I, Orientation.R, 8, 4))
    assert occupied_cells(st_) == {(9, 0), (9, 1), (9, 2), (9, 3)}
    new, cleared = lock_and_clear(board, st_)
    assert cleared == 1
    assert new.cell_count() == board.cell_count() + 4 - 1 * 10
    # the three cells above the cleared row shifted down by one
    assert new.filled(9, 0) and new.filled(9, 1) and new.filled(9, 2)


def test_lock_no_clear_is_union():
    board = Board.empty(10, 20)
    st_ = hard_drop(board, state_at(PieceType.T, Orientation.SPAWN, 4, 10))
    new, cleared = lock_and_clear(board, st_)
    assert cleared == 0
    assert new.cell_count() == 4


def test_lock_partial_clear_keeps_other_cells():
    # 4-wide board prefilled except a one-row gap; horizontal I completes
    # exactly that row
    board = Board.from_strings(
        [
            "#..#",
            "....",
            "#..#",
        ]
    )
    st_ = state_at(PieceType.I, Orientation.SPAWN, 1, 0)
    assert occupied_cells(st_) == {(0, 1), (1, 1), (2, 1), (3, 1)}
    new, cleared = lock_and_clear(board, st_)
    assert cleared == 1
    assert new.cell_count() == 4
    assert new.filled(0, 0) and new.filled(3, 0) and new.filled(0, 1) and new.filled(3, 1)


def test_overflow_lock_raises():
    board = Board.empty(4, 4)
    st_ = state_at(PieceType.O, Orientation.SPAWN, 1, 4)
    with pytest.raises(OverflowLock):
        lock_and_clear(board, st_)


def test_spawn_centering_left_bias():
    board = Board.empty(10, 20)
    for piece, cols in [
        (PieceType.I, {3, 4, 5, 6}),
        (PieceType.O, {4, 5}),
        (PieceType.T, {3, 4, 5}),
    ]:
        cells = occupied_cells(spawn_state(board, piece))
        assert {x for x, _ in cells} == cols
        assert min(y for _, y in cells) == 20


def test_reachable_o_on_empty_4wide_harddrop():
    board = Board.empty(4, 8)
    places = reachable_placements(board, PieceType.O, GravityMode.HARD_DROP_ONLY)
    assert len(places) == 3
    lefts = sorted(min(x for x, _ in p.cells()) for p in places)
    assert lefts == [0, 1, 2]


def test_reachable_i_on_empty_4wide_harddrop():
    board = Board.empty(4, 8)
    places = reachable_placements(board, PieceType.I, GravityMode.HARD_DROP_ONLY)
    # 4 vertical columns plus 1 horizontal
    assert len(places) == 5


def test_harddrop_placements_subset_of_standard():
    board = Board.from_strings(
        [
            "........",
            "...##...",
            "....#...",
            "##..##..",
        ]
    )
    for piece in PieceType:
        hd = reachable_cell_keys(board, piece, GravityMode.HARD_DROP_ONLY)
        std = reachable_cell_keys(board, piece, GravityMode.STANDARD)
        assert hd <= std


def _mirror_state(st_, width):
    # reflect a state through the board's vertical axis
    piece = MIRROR_PIECE[st_.piece]
    orient = MIRROR_ORIENT[st_.orient]
    return PieceState(piece, orient, 2 * width - 2 - st_.x, st_.y)


@settings(max_examples=120, deadline=None)
@given(
    piece=st.sampled_from(list(PieceType)),
    orient=st.sampled_from(list(Orientation)),
    cx=st.integers(1, 6),
    cy=st.integers(1, 6),
    cw=st.booleans(),
    cells=st.sets(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=14),
)
def test_mirror_commutes_with_rotation(piece, orient, cx, cy, cw, cells):
    # reflecting board and state and flipping the rotation direction mirrors
    # the outcome, for every non-I piece
    if piece is PieceType.I:
        return
    board = Board.from_cells(8, 8, cells)
    st_ = state_at(piece, orient, cx, cy)
    if collides(board, st_):
        return
    mirrored_board = board.mirrored()
    mirrored_state = _mirror_state(st_, board.width)
    res = rotate(board, st_, cw)
    mres = rotate(mirrored_board, mirrored_state, not cw)
    if res is None:
        assert mres is None
    else:
        assert mres is not None
        assert mres.test == res.test
        assert mres.state == _mirror_state(res.state, board.width)


@settings(max_examples=120, deadline=None)
@given(
    piece=st.sampled_from(list(PieceType)),
    orient=st.sampled_from(list(Orientation)),
    cx=st.integers(1, 6),
    cy=st.integers(1, 6),
    cw=st.booleans(),
    cells=st.sets(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=16),
)
def test_rotation_never_teleports(piece, orient, cx, cy, cw, cells):
    # the result center differs from the pure-rotation center by exactly one
    # table offset
    board = Board.from_cells(8, 8, cells)
    st_ = state_at(piece, orient, cx, cy)
    if collides(board, st_):
        return
    res = rotate(board, st_, cw)
    if res is None:
        return
    from srstris.pieces import kick_offsets

    dst = orient.cw() if cw else orient.ccw()
    offsets = kick_offsets(piece, orient, dst)
    dx = (res.state.x - st_.x) // 2
    dy = (res.state.y - st_.y) // 2
    assert (dx, dy) == offsets[res.test - 1]


@settings(max_examples=80, deadline=None)
@given(
    piece=st.sampled_from(list(PieceType)),
    cells=st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=12),
)
def test_lock_conserves_cells(piece, cells):
    board = Board.from_cells(6, 10, cells)
    placements = reachable_placements(board, piece, GravityMode.STANDARD)
    if not placements:
        return
    st_ = placements[0]
    new, cleared = lock_and_clear(board, st_)
    assert new.cell_count() == board.cell_count() + 4 - cleared * board.width


def test_placements_dedupe_by_cells():
    # all four O orientations are one placement, not four
    board = Board.empty(4, 6)
    places = reachable_placements(board, PieceType.O, GravityMode.STANDARD)
    keys = [p.cell_key() for p in places]
    assert len(keys) == len(set(keys))


def test_hd_monotonicity_counterexample():
    # Removing filled cells CAN remove a hard-drop placement: an O resting on
    # a lone cell falls further once the cell is gone.  Documented engine
    # behavior; the monotone variant only holds for the pre-drop choice set.
    fuller = Board.from_cells(4, 6, [(0, 0)])
    emptier = Board.empty(4, 6)
    full_keys = reachable_cell_keys(fuller, PieceType.O, GravityMode.HARD_DROP_ONLY)
    empty_keys = reachable_cell_keys(emptier, PieceType.O, GravityMode.HARD_DROP_ONLY)
    perched = frozenset({(0, 1), (1, 1), (0, 2), (1, 2)})
    assert perched in full_keys
    assert perched not in empty_keys
