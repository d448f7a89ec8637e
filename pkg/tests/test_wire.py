"""Wire schema: canonical encoding, decode validation, and round-trip
identity for every command and server message variant."""

from __future__ import annotations

import pytest

from conftest import scenario_path
from swarmsteer.engine import Engine
from swarmsteer.wire import (
    COMMAND_TYPES,
    WIRE_VERSION,
    WireError,
    ack_message,
    command_from_message,
    command_message,
    decode,
    encode,
    frame_message,
    reject_message,
    scene_message,
)
from swarmsteer.world import load_scenario

COMMANDS = [
    {"kind": "set_path", "points": [[0.0, 0.0], [50.0, 10.0], [100.0, 0.0]]},
    {"kind": "clear_path"},
    {"kind": "select_robot", "id": 1},
    {"kind": "pause"},
    {"kind": "resume"},
    {"kind": "set_weight", "name": "w1", "value": 0.25},
]


@pytest.mark.parametrize("cmd", COMMANDS, ids=[c["kind"] for c in COMMANDS])
def test_command_round_trip_identity(cmd):
    msg = command_message(7, cmd)
    assert msg["type"] in COMMAND_TYPES
    decoded = decode(encode(msg))
    assert decoded == msg
    seq, cmd2 = command_from_message(decoded)
    assert seq == 7
    assert cmd2 == cmd


def test_encoding_is_canonical():
    msg = {"v": WIRE_VERSION, "type": "ack", "seq": 3, "tick": 9}
    text = encode(msg)
    assert text == '{"seq":3,"tick":9,"type":"ack","v":1}'
    # Key order of the input dict does not matter.
    assert encode({"tick": 9, "v": WIRE_VERSION, "seq": 3, "type": "ack"}) == text


def test_decode_rejects_garbage():
    with pytest.raises(WireError):
        decode("not json")
    with pytest.raises(WireError):
        decode("[1,2,3]")
    with pytest.raises(WireError):
        decode('{"v":99,"type":"ack"}')
    with pytest.raises(WireError):
        decode('{"v":1}')


def test_command_message_validates_fields():
    with pytest.raises(WireError):
        command_message(1, {"kind": "warp"})
    with pytest.raises(WireError):
        command_message(1, {"kind": "select_robot"})  # missing id
    with pytest.raises(WireError):
        command_from_message({"v": 1, "type": "cmd.select_robot", "id": 0})  # no seq


def test_scene_and_frame_round_trip():
    engine = Engine(load_scenario(scenario_path("case3_obstacles.json")))
    scene = scene_message(engine.world)
    assert decode(encode(scene)) == scene
    assert {o["kind"] for o in scene["obstacles"]} == {"disk", "bar"}

    rec = engine.tick([{"kind": "set_path", "points": [[0, 0], [50, 0], [100, 20]]},
                       {"kind": "select_robot", "id": 0}])
    frame = frame_message(engine, rec)
    assert decode(encode(frame)) == frame
    assert frame["path_id"] == rec.path_id and frame["path"] is not None
    assert frame["robots"][0]["psi"] == 1


def test_ack_and_reject_round_trip():
    for msg in (ack_message(4, 100), reject_message(5, "bad seq"), reject_message(None, "x")):
        assert decode(encode(msg)) == msg
