"""World state, scenario ingestion/validation, fire dynamics, and loss
accounting.

Scenario files are JSON documents with top-level keys ``robots``,
``fires``, ``obstacles``, ``topology``, ``weights``, ``safety``,
``fire_model``, and optional ``human_script``; see
docs/scenario-format.md for the field-by-field schema.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .fields import (
    DEFAULT_ROBOT_RADIUS,
    BarObstacle,
    DiskObstacle,
    bar_obstacle,
    disk_obstacle,
    reactive_cores_distance,
)
from .intention import FusionWeights
from .perception import FireSource, TargetChoice
from .safety import SafetyParams


class ScenarioError(ValueError):
    """Scenario validation failure; the message names the offending
    entity and the invariant it breaks."""


@dataclass
class FireModel:
    work_range: float = 30.0  # robots within this of the fire boundary count
    rate: float = 1.5  # radius shrink per working robot per second
    die_out: float = 6.0  # a worked fire below this radius collapses to embers


@dataclass
class RobotState:
    id: int
    position: np.ndarray
    velocity: np.ndarray
    v_s: np.ndarray
    psi: int = 0
    target: TargetChoice = dc_field(default_factory=TargetChoice.none)
    latched: dict[int, int] = dc_field(default_factory=dict)


@dataclass
class World:
    clock: float
    robots: list[RobotState]
    fires: list[FireSource]
    obstacles: list
    edges: list[tuple[int, int]]
    desired_distances: dict[tuple[int, int], float]
    weights: FusionWeights
    safety: SafetyParams
    fire_model: FireModel
    robot_radius: float
    human_script: list[dict]
    dt: float = 0.02

    def neighbors(self, i: int) -> list[int]:
        out = [b if a == i else a for a, b in self.edges if i in (a, b)]
        out.sort()
        return out

    def max_degree(self) -> int:
        deg = [0] * len(self.robots)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return max(deg) if deg else 0


def _connected(n: int, edges) -> bool:
    if n == 0:
        return True
    seen = {0}
    frontier = [0]
    adj = {i: [] for i in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    while frontier:
        cur = frontier.pop()
        for nxt in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == n


def load_scenario(doc: dict | str | Path) -> World:
    """Build and validate a World from a scenario document or file path."""
    if isinstance(doc, (str, Path)):
        with open(doc, encoding="utf-8") as fh:
            doc = json.load(fh)
    try:
        robots_raw = doc["robots"]
        fires_raw = doc.get("fires", [])
        obstacles_raw = doc.get("obstacles", [])
        topology = doc.get("topology", {"radius": math.inf})
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"malformed scenario document: {exc}") from exc

    robot_radius = float(doc.get("robot_radius", DEFAULT_ROBOT_RADIUS))
    dt = float(doc.get("dt", 0.02))
    if dt <= 0:
        raise ScenarioError("dt must be positive")

    robots = [
        RobotState(
            id=i,
            position=np.asarray(p, dtype=float),
            velocity=np.zeros(2),
            v_s=np.zeros(2),
        )
        for i, p in enumerate(robots_raw)
    ]
    for r in robots:
        if not np.all(np.isfinite(r.position)):
            raise ScenarioError(f"robot {r.id}: non-finite position")

    fires = []
    for i, f in enumerate(fires_raw):
        fire = FireSource(
            id=i,
            position=np.asarray(f["pos"], dtype=float),
            radius=float(f["size"]),
            growth=float(f.get("growth", 1.0)),
        )
        if fire.radius < 0:
            raise ScenarioError(f"fire {i}: negative radius")
        fires.append(fire)

    obstacles = []
    for i, o in enumerate(obstacles_raw):
        kind = o.get("kind", "disk")
        common = dict(
            robot_radius=robot_radius,
            direction=int(o.get("direction", 0)),
            gain=float(o.get("gain", 1.0)),
            l1=float(o.get("l1", 1.0)),
            l2=float(o.get("l2", 1.0)),
        )
        if kind == "disk":
            ob = disk_obstacle(o["pos"], float(o["size"]), **common)
        elif kind == "bar":
            half_length, half_width = (float(x) for x in o["extent"])
            ob = bar_obstacle(
                o["pos"], half_length, half_width, float(o.get("heading", 0.0)), **common
            )
        else:
            raise ScenarioError(f"obstacle {i}: unknown kind {kind!r}")
        obstacles.append(ob)

    for i in range(len(obstacles)):
        for j in range(i + 1, len(obstacles)):
            if reactive_cores_distance(obstacles[i], obstacles[j]) <= 0:
                raise ScenarioError(
                    f"obstacles {i} and {j}: reactive areas overlap; "
                    "reactive areas must be disjoint"
                )

    if isinstance(topology, dict) and "radius" in topology:
        rc = float(topology["radius"])
        edges = [
            (i, j)
            for i in range(len(robots))
            for j in range(i + 1, len(robots))
            if np.hypot(*(robots[i].position - robots[j].position)) <= rc
        ]
    else:
        edges = sorted({(min(a, b), max(a, b)) for a, b in topology})
        for a, b in edges:
            if a == b or not (0 <= a < len(robots)) or not (0 <= b < len(robots)):
                raise ScenarioError(f"topology edge ({a},{b}): invalid robot id")
    if not _connected(len(robots), edges):
        raise ScenarioError("topology: communication graph must be connected")

    weights = FusionWeights(**doc.get("weights", {}))
    deg = [0] * len(robots)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    try:
        weights.validate(max(deg) if deg else 0)
    except ValueError as exc:
        raise ScenarioError(f"weights: {exc}") from exc

    sdoc = doc.get("safety", {})
    safety = SafetyParams(
        robot_distance=float(sdoc.get("Rr", 15.0)),
        obstacle_distance=float(sdoc.get("Ro", 30.0)),
        alpha=float(sdoc.get("alpha", 0.01)),
        beta=float(sdoc.get("beta", 0.01)),
    )
    fdoc = doc.get("fire_model", {})
    fire_model = FireModel(
        work_range=float(fdoc.get("W", 30.0)),
        rate=float(fdoc.get("rho", 1.5)),
        die_out=float(fdoc.get("die_out", 6.0)),
    )

    ddoc = doc.get("desired_distances")
    desired: dict[tuple[int, int], float] = {}
    for a, b in edges:
        desired[(a, b)] = float(
            np.hypot(*(robots[a].position - robots[b].position))
        )
    if ddoc:
        for entry in ddoc:
            a, b, dist = int(entry[0]), int(entry[1]), float(entry[2])
            desired[(min(a, b), max(a, b))] = dist

    # Initial clearances: the barrier certificates assume everything
    # starts strictly inside the safe set.
    for i in range(len(robots)):
        for j in range(i + 1, len(robots)):
            d = float(np.hypot(*(robots[i].position - robots[j].position)))
            if d <= safety.robot_distance:
                raise ScenarioError(
                    f"robots {i} and {j}: initial distance {d:.3f} <= "
                    f"safe distance {safety.robot_distance}"
                )
        for k, ob in enumerate(obstacles):
            core = ob.core_point(robots[i].position)
            d = float(np.hypot(*(robots[i].position - core)))
            if d <= safety.obstacle_distance:
                raise ScenarioError(
                    f"robot {i} vs obstacle {k}: initial clearance {d:.3f} <= "
                    f"safe distance {safety.obstacle_distance}"
                )
        for f in fires:
            if float(np.hypot(*(robots[i].position - f.position))) <= f.radius:
                raise ScenarioError(f"robot {i}: starts inside fire {f.id}")

    script = list(doc.get("human_script", []))
    script.sort(key=lambda c: float(c.get("t", 0.0)))

    return World(
        clock=0.0,
        robots=robots,
        fires=fires,
        obstacles=obstacles,
        edges=edges,
        desired_distances=desired,
        weights=weights,
        safety=safety,
        fire_model=fire_model,
        robot_radius=robot_radius,
        human_script=script,
        dt=dt,
    )


def serialize_scenario(world: World) -> dict:
    """Inverse of load_scenario for the numeric fields (round-trip safe)."""
    obstacles = []
    for ob in world.obstacles:
        if isinstance(ob, DiskObstacle):
            obstacles.append(
                {"kind": "disk", "pos": list(ob.center), "size": ob.body_radius,
                 "direction": ob.direction, "gain": ob.gain, "l1": ob.l1, "l2": ob.l2}
            )
        else:
            obstacles.append(
                {"kind": "bar", "pos": list(ob.center),
                 "extent": [ob.half_length, ob.half_width], "heading": ob.heading,
                 "direction": ob.direction, "gain": ob.gain, "l1": ob.l1, "l2": ob.l2}
            )
    w = world.weights
    return {
        "robots": [list(r.position) for r in world.robots],
        "fires": [
            {"pos": list(f.position), "size": f.radius, "growth": f.growth}
            for f in world.fires
        ],
        "obstacles": obstacles,
        "topology": [list(e) for e in world.edges],
        "desired_distances": [
            [a, b, d] for (a, b), d in sorted(world.desired_distances.items())
        ],
        "weights": {"w0": w.w0, "w1": w.w1, "w2": w.w2, "w3": w.w3,
                    "eps": w.eps, "C": w.C, "ks": w.ks, "kf": w.kf},
        "safety": {"Rr": world.safety.robot_distance, "Ro": world.safety.obstacle_distance,
                   "alpha": world.safety.alpha, "beta": world.safety.beta},
        "fire_model": {"W": world.fire_model.work_range, "rho": world.fire_model.rate,
                       "die_out": world.fire_model.die_out},
        "robot_radius": world.robot_radius,
        "dt": world.dt,
        "human_script": world.human_script,
    }


def step_fires(world: World, dt: float) -> list[int]:
    """Advance fire radii one step; returns ids extinguished this step.

    Each unextinguished fire grows at its own rate and shrinks by the
    extinguish rate per robot working within range of its boundary."""
    events = []
    for fire in world.fires:
        if fire.extinguished:
            continue
        working = sum(
            1
            for r in world.robots
            if float(np.hypot(*(r.position - fire.position))) <= fire.radius + world.fire_model.work_range
        )
        rate = fire.growth - working * world.fire_model.rate
        fire.radius = max(0.0, fire.radius + rate * dt)
        fire.peak_radius = max(fire.peak_radius, fire.radius)
        if working > 0 and fire.radius <= world.fire_model.die_out:
            fire.radius = 0.0
        if fire.radius == 0.0:
            fire.extinguished = True
            events.append(fire.id)
    return events


def loss_areas(world: World) -> list[float]:
    """Damage per fire: the disk area at its largest extent."""
    return [math.pi * f.peak_radius**2 for f in world.fires]


def format_loss_table(columns: dict[str, list[float]]) -> str:
    """Delimited loss report: one row per fire plus a Sum row, one column
    per scenario variant."""
    names = list(columns)
    n_fires = max((len(v) for v in columns.values()), default=0)
    lines = ["\t".join(["loss_area"] + names)]
    for i in range(n_fires):
        row = [f"a(s_{i + 1})"]
        for name in names:
            vals = columns[name]
            row.append(f"{vals[i]:.2f}" if i < len(vals) else "")
        lines.append("\t".join(row))
    sums = [f"{sum(columns[name]):.2f}" for name in names]
    lines.append("\t".join(["Sum"] + sums))
    return "\n".join(lines) + "\n"
