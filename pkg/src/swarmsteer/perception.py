"""Per-robot perception: fire severity, target selection, and the target
and formation fields.

A fire's severity as seen by a robot is the angular width of its disk
minus the part of that width blotted out by obstacle bodies sitting
between the robot and the fire.  Occlusion is computed with exact angular
interval arithmetic (the tests check it against a ray-casting oracle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fields import BarObstacle, DiskObstacle, zero_in_product

TWO_PI = 2.0 * math.pi


@dataclass
class FireSource:
    id: int
    position: np.ndarray
    radius: float
    growth: float = 1.0
    extinguished: bool = False
    peak_radius: float = field(default=0.0)

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        self.peak_radius = max(self.peak_radius, self.radius)


@dataclass(frozen=True)
class TargetChoice:
    fire_id: int | None
    value: float

    @staticmethod
    def none() -> "TargetChoice":
        return TargetChoice(None, 0.0)


def _wrap(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a + math.pi, TWO_PI)
    if a <= 0.0:
        a += TWO_PI
    return a - math.pi


def _silhouette(ob, p: np.ndarray, ref_angle: float) -> tuple[float, float] | None:
    """Angular interval an obstacle body covers, as offsets from ref_angle."""
    if isinstance(ob, DiskObstacle):
        rel = ob.center - p
        d = math.hypot(rel[0], rel[1])
        if d <= ob.body_radius:
            return (-math.pi, math.pi)
        half = math.asin(min(1.0, ob.body_radius / d))
        mid = _wrap(math.atan2(rel[1], rel[0]) - ref_angle)
        return (mid - half, mid + half)
    # Bar: convex silhouette spanned by the rectangle corners.  Offsets are
    # taken relative to the bar-center direction first so the interval never
    # wraps spuriously.
    relc = ob.center - p
    mid = _wrap(math.atan2(relc[1], relc[0]) - ref_angle)
    lo = hi = 0.0
    for corner in ob.corners():
        rel = corner - p
        off = _wrap(math.atan2(rel[1], rel[0]) - ref_angle - mid)
        lo = min(lo, off)
        hi = max(hi, off)
    return (mid + lo, mid + hi)


def observed_fire_value(robot, fire: FireSource, obstacles) -> float:
    """Visible angular width of the fire disk, >= 0."""
    p = np.asarray(robot, dtype=float)
    rel = fire.position - p
    d = math.hypot(rel[0], rel[1])
    if d <= fire.radius:
        return TWO_PI  # engulfed: the fire fills the view
    half = math.asin(min(1.0, fire.radius / d))
    beta = 2.0 * half
    ref = math.atan2(rel[1], rel[0])

    intervals = []
    for ob in obstacles:
        # Bodies centered at or beyond the fire do not occlude it.
        relo = ob.center - p
        if math.hypot(relo[0], relo[1]) >= d:
            continue
        iv = _silhouette(ob, p, ref)
        if iv is None:
            continue
        lo, hi = max(iv[0], -half), min(iv[1], half)
        if hi > lo:
            intervals.append((lo, hi))
    if not intervals:
        return beta
    intervals.sort()
    alpha = 0.0
    cur_lo, cur_hi = intervals[0]
    for lo, hi in intervals[1:]:
        if lo > cur_hi:
            alpha += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    alpha += cur_hi - cur_lo
    return max(0.0, beta - alpha)


def select_target(robot, fires, obstacles) -> TargetChoice:
    """Most severe visible unextinguished fire; ties break to the lowest
    fire id, and an all-zero view yields no target."""
    best: TargetChoice = TargetChoice.none()
    for fire in fires:
        if fire.extinguished:
            continue
        theta = observed_fire_value(robot, fire, obstacles)
        if theta > best.value or (
            theta == best.value and best.fire_id is not None and theta > 0.0 and fire.id < best.fire_id
        ):
            best = TargetChoice(fire.id, theta)
    return best


def target_field(robot, choice: TargetChoice, fires_by_id, gate_fields) -> np.ndarray:
    """Attraction field toward the chosen fire, faded out inside reactive
    areas; the tangential term is dropped so the robot heads straight in."""
    p = np.asarray(robot, dtype=float)
    if choice.fire_id is None:
        return np.zeros(2)
    fire = fires_by_id[choice.fire_id]
    rel = p - fire.position
    phi = float(rel @ rel) - fire.radius**2
    raw = -choice.value * phi * (2.0 * rel)
    if raw[0] == 0.0 and raw[1] == 0.0:
        return raw
    return zero_in_product(gate_fields, p) * raw


def formation_field(robot, neighbor_positions, desired_distances, gate_fields) -> np.ndarray:
    """Distance-error attraction/repulsion toward each neighbor, faded out
    inside reactive areas.  A coincident neighbor contributes nothing."""
    p = np.asarray(robot, dtype=float)
    total = np.zeros(2)
    for q, dij in zip(neighbor_positions, desired_distances):
        rel = p - np.asarray(q, dtype=float)
        dist = math.hypot(rel[0], rel[1])
        if dist == 0.0:
            continue
        # Signed residual: attract when beyond the desired distance, repel
        # when inside it, with magnitude |dist - d_ij| either way.
        total = total - (dist - dij) * (rel / dist)
    if total[0] == 0.0 and total[1] == 0.0:
        return total
    return zero_in_product(gate_fields, p) * total
