"""Deterministic fixed-step simulation loop.

Pipeline per tick (order is fixed and regression-tested):
apply queued commands -> perception (target selection) -> field evaluation
(target / formation / drawn-path guidance) -> synchronous intention update
-> policy blend -> safety filter -> speed clamp -> Euler integration ->
fire dynamics -> record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import (
    PathError,
    composite_field,
    disk_obstacle,
    eval_field,
    latch_obstacle_direction,
    path_from_polyline,
)
from .intention import blend_ratio, normalize_intention, update_intention
from .perception import formation_field, select_target, target_field
from .safety import filter_velocities
from .world import World, step_fires


class CommandError(ValueError):
    """Rejected operator command (bad target, degenerate path, ...)."""


@dataclass
class TickRecord:
    tick: int
    clock: float
    positions: np.ndarray  # (n, 2)
    v_t: np.ndarray
    v_s: np.ndarray
    v_hat_s: np.ndarray
    v_h: np.ndarray
    v_f: np.ndarray
    v_blend: np.ndarray
    v_safe: np.ndarray
    lam: np.ndarray  # (n,)
    targets: list[int]  # -1 = none
    psi: list[int]
    fire_radii: list[float]
    path_id: int
    consensus_error: float


EXPORT_HEADER = (
    "tick,clock,robot,px,py,vtx,vty,vsx,vsy,vhsx,vhsy,vfx,vfy,"
    "vbx,vby,vx,vy,lambda,target,psi,path_id,consensus_err,fire_radii"
)


def consensus_error(world: World) -> float:
    """Formation disagreement: per-edge distance residuals stacked along
    the edge directions and measured in the Euclidean norm.  Invariant
    under global translation."""
    total = 0.0
    for (a, b), dij in world.desired_distances.items():
        d = float(np.hypot(*(world.robots[a].position - world.robots[b].position)))
        total += (d - dij) ** 2
    return math.sqrt(total)


class Engine:
    def __init__(self, world: World):
        self.world = world
        self.path = None
        self.path_id = -1
        self._path_counter = 0
        self.paused = False
        self.tick_count = 0
        self.records: list[TickRecord] = []
        self.events: list[tuple[float, str, str]] = []

    # -- commands ---------------------------------------------------------

    def apply_command(self, cmd: dict) -> None:
        kind = cmd.get("kind")
        w = self.world
        if kind == "set_path":
            try:
                path = path_from_polyline(
                    cmd["points"],
                    min_spacing=float(cmd.get("min_spacing", 5.0)),
                    gain=float(cmd.get("gain", 0.05)),
                )
            except PathError as exc:
                raise CommandError(f"set_path: {exc}") from exc
            self.path = path
            self._path_counter += 1
            self.path_id = self._path_counter
        elif kind == "clear_path":
            self.path = None
            self.path_id = -1
        elif kind == "select_robot":
            rid = int(cmd["id"])
            if not 0 <= rid < len(w.robots):
                raise CommandError(f"select_robot: no robot {rid}")
            for r in w.robots:
                r.psi = 1 if r.id == rid else 0
        elif kind == "pause":
            self.paused = True
        elif kind == "resume":
            self.paused = False
        elif kind == "set_weight":
            name = cmd["name"]
            if name not in ("w0", "w1", "w2", "w3", "eps", "C", "ks", "kf"):
                raise CommandError(f"set_weight: unknown weight {name!r}")
            old = getattr(w.weights, name)
            setattr(w.weights, name, float(cmd["value"]))
            try:
                w.weights.validate(w.max_degree())
            except ValueError as exc:
                setattr(w.weights, name, old)
                raise CommandError(f"set_weight: {exc}") from exc
        else:
            raise CommandError(f"unknown command kind {kind!r}")

    # -- tick -------------------------------------------------------------

    def _fire_fields(self):
        return [
            disk_obstacle(f.position, f.radius, self.world.robot_radius)
            for f in self.world.fires
            if not f.extinguished and f.radius > 0.0
        ]

    def tick(self, commands=()) -> TickRecord:
        w = self.world
        for cmd in commands:
            self.apply_command(cmd)
        n = len(w.robots)

        if self.paused:
            w.clock += w.dt
            self.tick_count += 1
            zeros = np.zeros((n, 2))
            rec = TickRecord(
                tick=self.tick_count,
                clock=w.clock,
                positions=np.array([r.position for r in w.robots]),
                v_t=zeros,
                v_s=np.array([r.v_s for r in w.robots]),
                v_hat_s=zeros,
                v_h=zeros,
                v_f=zeros,
                v_blend=zeros,
                v_safe=zeros,
                lam=np.zeros(n),
                targets=[r.target.fire_id if r.target.fire_id is not None else -1 for r in w.robots],
                psi=[r.psi for r in w.robots],
                fire_radii=[f.radius for f in w.fires],
                path_id=self.path_id,
                consensus_error=consensus_error(w),
            )
            self.records.append(rec)
            return rec

        fire_fields = self._fire_fields()
        gate_fields = list(w.obstacles) + fire_fields

        # Obstacle traversal directions latch on reactive-area entry and
        # clear on exit, based on the previous tick's velocity.
        for r in w.robots:
            for k, ob in enumerate(w.obstacles):
                phi = eval_field(ob, r.position).value
                if phi < 0.0:
                    if k not in r.latched:
                        r.latched[k] = latch_obstacle_direction(ob, r.position, r.velocity)
                else:
                    r.latched.pop(k, None)

        fires_by_id = {f.id: f for f in w.fires}
        v_t = np.zeros((n, 2))
        v_f = np.zeros((n, 2))
        v_h = np.zeros((n, 2))
        for i, r in enumerate(w.robots):
            r.target = select_target(r.position, w.fires, w.obstacles)
            v_t[i] = target_field(r.position, r.target, fires_by_id, gate_fields)
            nbrs = w.neighbors(r.id)
            v_f[i] = formation_field(
                r.position,
                [w.robots[j].position for j in nbrs],
                [w.desired_distances[(min(r.id, j), max(r.id, j))] for j in nbrs],
                gate_fields,
            )
            if r.psi and self.path is not None:
                v_h[i] = composite_field(self.path, w.obstacles, r.position, r.latched)

        # Synchronous intention update: every robot reads step-k values.
        prev_vs = [r.v_s.copy() for r in w.robots]
        new_vs = []
        for i, r in enumerate(w.robots):
            new_vs.append(
                update_intention(
                    prev_vs[i], v_t[i], v_h[i], r.psi,
                    [prev_vs[j] for j in w.neighbors(r.id)], w.weights,
                )
            )

        v_hat_s = np.zeros((n, 2))
        v_blend = np.zeros((n, 2))
        lam = np.zeros(n)
        for i, r in enumerate(w.robots):
            r.v_s = new_vs[i]
            vs_norm = float(np.hypot(*r.v_s))
            # Intentions inside the dead zone are treated as absent so
            # robots come to rest instead of jittering at full speed.
            if vs_norm > w.weights.eps:
                v_hat_s[i] = normalize_intention(r.v_s, w.weights.C)
            lam[i] = blend_ratio(vs_norm, float(np.hypot(*v_f[i])), w.weights.ks, w.weights.kf)
            v_blend[i] = lam[i] * v_hat_s[i] + (1.0 - lam[i]) * v_f[i]

        safe, events = filter_velocities(
            [r.position for r in w.robots],
            [v_blend[i] for i in range(n)],
            [w.neighbors(i) for i in range(n)],
            w.obstacles,
            w.safety,
        )
        for ev in events:
            self.events.append((w.clock, ev.kind, f"robot {ev.robot} vs {ev.other}"))

        v_safe = np.zeros((n, 2))
        for i, r in enumerate(w.robots):
            v = safe[i]
            speed = float(np.hypot(*v))
            if speed > w.weights.C:
                v = v * (w.weights.C / speed)
            v_safe[i] = v
            r.velocity = v
            r.position = r.position + v * w.dt
            if not np.all(np.isfinite(r.position)):
                raise FloatingPointError(f"robot {r.id}: non-finite position")

        for fid in step_fires(w, w.dt):
            self.events.append((w.clock, "extinguished", f"fire {fid}"))

        w.clock += w.dt
        self.tick_count += 1
        rec = TickRecord(
            tick=self.tick_count,
            clock=w.clock,
            positions=np.array([r.position for r in w.robots]),
            v_t=v_t,
            v_s=np.array([r.v_s for r in w.robots]),
            v_hat_s=v_hat_s,
            v_h=v_h,
            v_f=v_f,
            v_blend=v_blend,
            v_safe=v_safe,
            lam=lam,
            targets=[r.target.fire_id if r.target.fire_id is not None else -1 for r in w.robots],
            psi=[r.psi for r in w.robots],
            fire_radii=[f.radius for f in w.fires],
            path_id=self.path_id,
            consensus_error=consensus_error(w),
        )
        self.records.append(rec)
        return rec

    # -- run --------------------------------------------------------------

    def run(self, duration: float, script=None, stop_when_fires_out: bool = False):
        """Run for ``duration`` seconds, feeding timed commands from the
        merged scenario + extra script.  Identical inputs produce
        identical record streams."""
        merged = sorted(
            list(self.world.human_script) + list(script or []),
            key=lambda c: float(c.get("t", 0.0)),
        )
        idx = 0
        ticks = int(round(duration / self.world.dt))
        for _ in range(ticks):
            due = []
            while idx < len(merged) and float(merged[idx].get("t", 0.0)) <= self.world.clock + 1e-12:
                cmd = dict(merged[idx])
                cmd.pop("t", None)
                due.append(cmd)
                idx += 1
            self.tick(due)
            if stop_when_fires_out and self.world.fires and all(
                f.extinguished for f in self.world.fires
            ):
                break
        return self.records


def export_records(records) -> str:
    """Delimited trajectory export, one row per (tick, robot)."""
    lines = [EXPORT_HEADER]
    for rec in records:
        radii = ";".join(repr(v) for v in rec.fire_radii)
        for i in range(rec.positions.shape[0]):
            row = [
                str(rec.tick),
                repr(rec.clock),
                str(i),
                repr(rec.positions[i, 0]),
                repr(rec.positions[i, 1]),
                repr(rec.v_t[i, 0]),
                repr(rec.v_t[i, 1]),
                repr(rec.v_s[i, 0]),
                repr(rec.v_s[i, 1]),
                repr(rec.v_hat_s[i, 0]),
                repr(rec.v_hat_s[i, 1]),
                repr(rec.v_f[i, 0]),
                repr(rec.v_f[i, 1]),
                repr(rec.v_blend[i, 0]),
                repr(rec.v_blend[i, 1]),
                repr(rec.v_safe[i, 0]),
                repr(rec.v_safe[i, 1]),
                repr(float(rec.lam[i])),
                str(rec.targets[i]),
                str(rec.psi[i]),
                str(rec.path_id),
                repr(rec.consensus_error),
                radii,
            ]
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"


@dataclass
class ProbeReport:
    tail_max_vs: float
    tail_max_vt: float
    tail_max_vh: float
    gamma_t: float
    gamma_h: float
    bound: float
    ratio: float
    bound_holds: bool
    tail_max_consensus: float
    consensus_bounded: bool

    def format(self) -> str:
        lines = [
            f"tail_max_vs\t{self.tail_max_vs:.6g}",
            f"gamma_t\t{self.gamma_t:.6g}",
            f"gamma_h\t{self.gamma_h:.6g}",
            f"bound\t{self.bound:.6g}",
            f"ratio\t{self.ratio:.6g}",
            f"bound_holds\t{self.bound_holds}",
            f"tail_max_consensus\t{self.tail_max_consensus:.6g}",
            f"consensus_bounded\t{self.consensus_bounded}",
        ]
        return "\n".join(lines) + "\n"

    @property
    def ok(self) -> bool:
        return self.bound_holds and self.consensus_bounded


def stability_probe(records, weights, slack: float = 1.05) -> ProbeReport:
    """Check the boundedness guarantees over the tail of a finite run.

    The steady-state intention norm must stay within the analytic gains of
    the input norms (limsup approximated by the tail-half maximum), and
    the consensus error must not grow monotonically over the last quarter.
    """
    if len(records) < 100:
        raise ValueError("stability probe needs at least 100 records")
    tail = records[len(records) // 2 :]

    def stacked(recs, attr, mask_psi=False):
        best = 0.0
        for r in recs:
            arr = getattr(r, attr)
            if mask_psi:
                arr = arr * np.array(r.psi, dtype=float)[:, None]
            best = max(best, float(np.sqrt((arr**2).sum())))
        return best

    max_vs = stacked(tail, "v_s")
    max_vt = stacked(tail, "v_t")
    max_vh = stacked(tail, "v_h")
    gamma_t = 0.5 * math.sqrt(weights.w1 / weights.w0)
    gamma_h = 0.5 * math.sqrt(weights.w3 / weights.w0)
    bound = gamma_t * max_vt + gamma_h * max_vh
    if bound == 0.0:
        ratio = 0.0 if max_vs <= 1e-9 else math.inf
    else:
        ratio = max_vs / bound
    holds = ratio <= slack

    quarter = [r.consensus_error for r in records[3 * len(records) // 4 :]]
    diffs = np.diff(quarter)
    monotone_growth = len(diffs) > 0 and bool(np.all(diffs > 1e-12))
    return ProbeReport(
        tail_max_vs=max_vs,
        tail_max_vt=max_vt,
        tail_max_vh=max_vh,
        gamma_t=gamma_t,
        gamma_h=gamma_h,
        bound=bound,
        ratio=ratio,
        bound_holds=holds,
        tail_max_consensus=max(quarter),
        consensus_bounded=not monotone_growth,
    )
