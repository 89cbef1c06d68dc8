import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srstris.board import Board
from srstris.engine import GravityMode
from srstris.model import (
    AsymmetryWarning,
    Blowup,
    Instance,
    Objective,
    ParseError,
    PieceSequence,
    ReductionMeta,
    ValidationError,
    mirror_instance,
    parse,
    parse_witness,
    serialize,
    serialize_witness,
)
from srstris.engine import PieceState
from srstris.pieces import Orientation, PieceType


def test_sequence_run_length_expansion():
    seq = PieceSequence.parse("I*36")
    assert len(seq) == 36
    assert all(p is PieceType.I for p in seq)


def test_sequence_round_trip():
    seq = PieceSequence.parse("L,I*3,L,O*2")
    assert seq.tokens() == "L,I*3,L,O*2"
    assert PieceSequence.parse(seq.tokens()) == seq


def test_sequence_rejects_junk():
    with pytest.raises(ValidationError):
        PieceSequence.parse("I,X*2")


def test_instance_round_trip():
    inst = Instance(
        board=Board.from_strings(["....", "#..#", "####"][:2] + ["#..#"]),
        sequence=PieceSequence.parse("O"),
        objective=Objective.CLEAR,
        mode=GravityMode.STANDARD,
        meta=ReductionMeta("IL", "a=5,6,7", Blowup(1), relaxed=True),
    )
    assert parse(serialize(inst)) == inst


def test_parse_reports_line_numbers():
    text = "width: 4\nheight: 2\nobjective: clear\nmode: standard\nrows:\n....\n..x.\n"
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line == 7
    assert err.value.column == 3


def test_parse_rejects_wrong_row_count():
    text = "width: 4\nheight: 3\nobjective: clear\nmode: standard\nrows:\n....\n....\n"
    with pytest.raises(ParseError):
        parse(text)


def test_blowup_format_round_trip():
    b = Blowup(24, ((PieceType.J, 4, 432, 1),))
    assert Blowup.parse(b.format()) == b
    assert b.resolve({(PieceType.J, 4, 432): 7}) == 24 * 7


def test_blowup_requires_table_entry():
    from srstris.model import MissingF4

    b = Blowup(1, ((PieceType.J, 4, 8, 2),))
    with pytest.raises(MissingF4):
        b.resolve({})


def test_mirror_requires_flag_for_i():
    inst = Instance(
        board=Board.empty(4, 4),
        sequence=PieceSequence.parse("I"),
        objective=Objective.CLEAR,
        mode=GravityMode.STANDARD,
    )
    with pytest.raises(AsymmetryWarning):
        mirror_instance(inst)
    mirror_instance(inst, allow_i_asymmetry=True)


boards = st.builds(
    lambda w, cells: Board.from_cells(w, 6, {(x % w, y) for x, y in cells}),
    st.integers(2, 7),
    st.sets(st.tuples(st.integers(0, 6), st.integers(0, 5)), max_size=12),
)
sequences = st.lists(st.sampled_from("OTSZJL"), max_size=6).map(PieceSequence)


@settings(max_examples=100, deadline=None)
@given(board=boards, seq=sequences)
def test_mirror_is_involution(board, seq):
    inst = Instance(board, seq, Objective.CLEAR, GravityMode.STANDARD)
    assert mirror_instance(mirror_instance(inst)) == inst


@settings(max_examples=100, deadline=None)
@given(board=boards, seq=sequences)
def test_serialization_round_trip_property(board, seq):
    inst = Instance(board, seq, Objective.SURVIVE, GravityMode.HARD_DROP_ONLY)
    text = serialize(inst)
    assert parse(text) == inst
    # byte-deterministic for equal instances
    assert serialize(parse(text)) == text


def test_witness_round_trip():
    script = [
        PieceState(PieceType.J, Orientation.R, 4, 6),
        PieceState(PieceType.O, Orientation.SPAWN, 3, 3),
    ]
    assert parse_witness(serialize_witness(script)) == script
