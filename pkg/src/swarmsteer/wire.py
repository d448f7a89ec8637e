"""Versioned JSON wire schema shared by the gateway and the browser console.

Every message is a JSON object with a schema version ``v`` and a ``type``
tag: ``scene``, ``frame``, ``cmd.set_path``, ``cmd.clear_path``,
``cmd.select_robot``, ``cmd.pause``, ``cmd.resume``, ``cmd.set_weight``,
``ack``, ``reject``.  Commands additionally carry a per-connection
strictly increasing ``seq``.  Encoding is canonical (sorted keys, no
whitespace) so byte comparisons are meaningful in tests.
"""

from __future__ import annotations

import json

from .fields import BarObstacle, DiskObstacle

WIRE_VERSION = 1

COMMAND_TYPES = (
    "cmd.set_path",
    "cmd.clear_path",
    "cmd.select_robot",
    "cmd.pause",
    "cmd.resume",
    "cmd.set_weight",
)
_COMMAND_FIELDS = {
    "cmd.set_path": ("points",),
    "cmd.clear_path": (),
    "cmd.select_robot": ("id",),
    "cmd.pause": (),
    "cmd.resume": (),
    "cmd.set_weight": ("name", "value"),
}


class WireError(ValueError):
    """Malformed or version-mismatched wire message."""


def encode(msg: dict) -> str:
    return json.dumps(msg, sort_keys=True, separators=(",", ":"))


def decode(text: str) -> dict:
    try:
        msg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WireError(f"not valid JSON: {exc}") from exc
    if not isinstance(msg, dict):
        raise WireError("message must be a JSON object")
    if msg.get("v") != WIRE_VERSION:
        raise WireError(f"schema version mismatch: got {msg.get('v')!r}, "
                        f"want {WIRE_VERSION}")
    if "type" not in msg:
        raise WireError("missing type tag")
    return msg


# -- server -> client -----------------------------------------------------

def scene_message(world) -> dict:
    obstacles = []
    for ob in world.obstacles:
        if isinstance(ob, DiskObstacle):
            obstacles.append({"kind": "disk", "pos": list(ob.center),
                              "size": ob.body_radius,
                              "repulse": ob.repulse_radius,
                              "reactive": ob.reactive_radius})
        elif isinstance(ob, BarObstacle):
            obstacles.append({"kind": "bar", "pos": list(ob.center),
                              "extent": [ob.half_length, ob.half_width],
                              "heading": ob.heading,
                              "repulse": ob.repulse_width,
                              "reactive": ob.reactive_width})
    return {
        "v": WIRE_VERSION,
        "type": "scene",
        "dt": world.dt,
        "robots": [{"id": r.id, "pos": list(r.position)} for r in world.robots],
        "fires": [{"id": f.id, "pos": list(f.position), "radius": f.radius,
                   "growth": f.growth} for f in world.fires],
        "obstacles": obstacles,
        "edges": [list(e) for e in world.edges],
        "weights": {"w0": world.weights.w0, "w1": world.weights.w1,
                    "w2": world.weights.w2, "w3": world.weights.w3,
                    "eps": world.weights.eps, "C": world.weights.C,
                    "ks": world.weights.ks, "kf": world.weights.kf},
        "safety": {"Rr": world.safety.robot_distance,
                   "Ro": world.safety.obstacle_distance},
    }


def frame_message(engine, record) -> dict:
    w = engine.world
    path = None
    if engine.path is not None:
        path = [list(p) for p in engine.path.points.tolist()]
    return {
        "v": WIRE_VERSION,
        "type": "frame",
        "tick": record.tick,
        "clock": record.clock,
        "paused": engine.paused,
        "path": path,
        "path_id": record.path_id,
        "robots": [
            {
                "id": i,
                "pos": record.positions[i].tolist(),
                "vel": record.v_safe[i].tolist(),
                "target": record.targets[i],
                "psi": record.psi[i],
                "lam": float(record.lam[i]),
            }
            for i in range(record.positions.shape[0])
        ],
        "fires": [
            {"id": f.id, "radius": record.fire_radii[j],
             "extinguished": f.extinguished}
            for j, f in enumerate(w.fires)
        ],
        "consensus_error": record.consensus_error,
    }


def ack_message(seq: int, tick: int) -> dict:
    return {"v": WIRE_VERSION, "type": "ack", "seq": seq, "tick": tick}


def reject_message(seq, reason: str) -> dict:
    return {"v": WIRE_VERSION, "type": "reject", "seq": seq, "reason": reason}


# -- client -> server -----------------------------------------------------

def command_message(seq: int, cmd: dict) -> dict:
    kind = cmd.get("kind")
    mtype = f"cmd.{kind}"
    if mtype not in _COMMAND_FIELDS:
        raise WireError(f"unknown command kind {kind!r}")
    msg = {"v": WIRE_VERSION, "type": mtype, "seq": seq}
    for key in _COMMAND_FIELDS[mtype]:
        if key not in cmd:
            raise WireError(f"{mtype}: missing field {key!r}")
        msg[key] = cmd[key]
    return msg


def command_from_message(msg: dict) -> tuple[int, dict]:
    mtype = msg["type"]
    if mtype not in _COMMAND_FIELDS:
        raise WireError(f"not a command message: {mtype!r}")
    seq = msg.get("seq")
    if not isinstance(seq, int):
        raise WireError("command missing integer seq")
    cmd = {"kind": mtype[len("cmd."):]}
    for key in _COMMAND_FIELDS[mtype]:
        if key not in msg:
            raise WireError(f"{mtype}: missing field {key!r}")
        cmd[key] = msg[key]
    return seq, cmd
