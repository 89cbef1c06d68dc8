import pytest
from fastapi.testclient import TestClient

from srstris.board import Board
from srstris.engine import GravityMode
from srstris.model import Instance, Objective, PieceSequence, serialize
from srstris.service import Session, create_app, derive


@pytest.fixture()
def client():
    return TestClient(create_app())


def make_doc(board, seq, objective=Objective.CLEAR, mode=GravityMode.STANDARD):
    return serialize(Instance(board, PieceSequence.parse(seq), objective, mode))


def start_session(client, doc):
    iid = client.post("/instances", json={"document": doc}).json()["instance_id"]
    return client.post("/sessions", json={"instance_id": iid}).json()


def ws_drive(client, sid, inputs):
    responses = []
    with client.websocket_connect(f"/session/{sid}") as ws:
        responses.append(ws.receive_json())
        for entry in inputs:
            ws.send_json({"v": 1, "op": "input", "input": entry})
            responses.append(ws.receive_json())
    return responses


def test_upload_rejects_bad_document(client):
    res = client.post("/instances", json={"document": "width: x"})
    assert res.status_code == 422


def test_session_lifecycle_and_clear(client):
    doc = make_doc(Board.from_strings(["#..#", "#..#"]), "O")
    state = start_session(client, doc)
    sid = state["session"]
    assert state["status"] == "playing"
    responses = ws_drive(client, sid, ["hard_drop"])
    final = responses[-1]
    assert final["status"] == "cleared"
    assert final["cleared_rows"] == 2
    assert final["rows"] == ["....", "...."]


def test_soft_drop_rejected_in_harddrop_mode(client):
    doc = make_doc(Board.empty(6, 8), "T", mode=GravityMode.HARD_DROP_ONLY)
    state = start_session(client, doc)
    responses = ws_drive(client, state["session"], ["soft_drop"])
    assert responses[-1]["error"] == "mode forbids soft drop"
    assert responses[-1]["log_length"] == 0


def test_kick_test_reported_for_figure_two_scenario(client):
    # J rotated counter-clockwise against a single blocking square: test 1
    # fails, test 2 lands
    board = Board.from_cells(6, 6, {(x, 0) for x in range(6)} | {(1, 2)})
    doc = make_doc(board, "J")
    state = start_session(client, doc)
    inputs = ["rotate_cw"] + ["soft_drop"] * 4 + ["rotate_ccw"]
    responses = ws_drive(client, state["session"], inputs)
    assert all("error" not in r for r in responses[1:]), responses[-1].get("error")
    assert responses[-1]["kick_test"] == 2


def test_completing_row_shifts_stack(client):
    board = Board.from_strings(
        [
            "#..#",
            "####" .replace("#", "#"),
        ][:1] + ["#..#"]
    )
    doc = make_doc(Board.from_strings(["....", "#..#", "#..#"]), "O,O")
    state = start_session(client, doc)
    responses = ws_drive(client, state["session"], ["hard_drop"])
    mid = responses[-1]
    assert mid["cleared_rows"] == 2
    assert mid["status"] == "playing"


def test_lock_requires_support_in_standard(client):
    doc = make_doc(Board.empty(5, 6), "T")
    state = start_session(client, doc)
    responses = ws_drive(client, state["session"], ["lock"])
    assert responses[-1]["error"] == "piece is not supported"


def test_undo_pops_one_input(client):
    doc = make_doc(Board.empty(5, 8), "T,T,T")
    state = start_session(client, doc)
    sid = state["session"]
    with client.websocket_connect(f"/session/{sid}") as ws:
        ws.receive_json()
        ws.send_json({"op": "input", "input": "left"})
        after_left = ws.receive_json()
        ws.send_json({"op": "undo"})
        after_undo = ws.receive_json()
    assert after_left["log_length"] == 1
    assert after_undo["log_length"] == 0
    assert after_undo["active"]["x"] == state["active"]["x"]


def test_undo_supports_depth_of_fifty(client):
    doc = make_doc(Board.empty(60, 8), "I")
    state = start_session(client, doc)
    sid = state["session"]
    with client.websocket_connect(f"/session/{sid}") as ws:
        ws.receive_json()
        for _ in range(25):
            ws.send_json({"op": "input", "input": "left"})
            ws.receive_json()
        for _ in range(25):
            ws.send_json({"op": "input", "input": "right"})
            ws.receive_json()
        last = None
        for _ in range(50):
            ws.send_json({"op": "undo"})
            last = ws.receive_json()
    assert last["log_length"] == 0


def test_protocol_round_trip_reproduces_state(client):
    # the accepted-input log replayed through a fresh engine is byte-identical
    doc = make_doc(Board.empty(6, 8), "T,S,Z,O")
    state = start_session(client, doc)
    sid = state["session"]
    inputs = ["left", "rotate_cw", "hard_drop", "right", "hard_drop", "rotate_ccw", "hard_drop"]
    ws_drive(client, sid, inputs)
    final = client.get(f"/session/{sid}/state").json()
    from srstris.model import parse

    fresh = Session(sid, parse(doc), list(inputs))
    assert fresh.payload() == final


def test_twenty_g_auto_drop(client):
    doc = make_doc(Board.empty(6, 8), "O,O", mode=GravityMode.TWENTY_G)
    state = start_session(client, doc)
    # the active piece spawns already dropped to the floor
    assert min(y for _, y in state["active"]["cells"]) == 0
    responses = ws_drive(client, state["session"], ["left"])
    assert min(y for _, y in responses[-1]["active"]["cells"]) == 0


def test_sessions_are_isolated(client):
    doc = make_doc(Board.empty(5, 6), "T")
    a = start_session(client, doc)
    b = start_session(client, doc)
    ws_drive(client, a["session"], ["left"])
    state_b = client.get(f"/session/{b['session']}/state").json()
    assert state_b["log_length"] == 0
