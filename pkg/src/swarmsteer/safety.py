"""Safety barrier certificates: minimally-invasive velocity filtering.

Each robot solves a tiny quadratic program: stay as close as possible to
its desired velocity subject to half-plane constraints derived from
control barrier functions for every neighbor and every nearby obstacle.
The two-variable QP is solved exactly by candidate enumeration (the
desired point, its projections onto violated constraint lines, and all
pairwise line intersections), which is deterministic and easy to check
against a grid-search oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-9


@dataclass(frozen=True)
class LinearConstraint:
    """Half-plane a . v <= b."""

    a: np.ndarray
    b: float


@dataclass(frozen=True)
class SafetyParams:
    robot_distance: float  # minimum inter-robot center distance
    obstacle_distance: float  # minimum robot-to-obstacle-core distance
    # Cubic barrier gains.  These must be small enough that the constraint
    # starts binding more than one Euler step before the boundary, or the
    # discrete update can hop over the region where the barrier acts.
    alpha: float = 0.01
    beta: float = 0.01
    sensing_factor: float = 4.0  # obstacle constraints beyond this * R_o are skipped

    def __post_init__(self):
        if min(self.robot_distance, self.obstacle_distance, self.alpha, self.beta) <= 0:
            raise ValueError("safety parameters must be strictly positive")


@dataclass(frozen=True)
class SafetyEvent:
    kind: str  # "violation" | "infeasible"
    robot: int
    other: str


def robot_pair_constraint(p_i, p_j, params: SafetyParams) -> tuple[LinearConstraint, bool]:
    """Barrier constraint robot i derives against robot j.

    Returns (constraint, violated): when the pair is already closer than
    the safe distance the budget collapses to a hard stop (b = 0)."""
    p_i = np.asarray(p_i, dtype=float)
    p_j = np.asarray(p_j, dtype=float)
    rel = p_i - p_j
    h = float(rel @ rel) - params.robot_distance**2
    if h <= 0.0:
        return LinearConstraint(-rel, 0.0), True
    return LinearConstraint(-rel, (params.alpha / 4.0) * h**3), False


def obstacle_constraint(p_i, p_o, params: SafetyParams) -> tuple[LinearConstraint, bool]:
    """Barrier constraint against an obstacle core point p_o (a disk
    center, or the closest spine point of a bar)."""
    p_i = np.asarray(p_i, dtype=float)
    p_o = np.asarray(p_o, dtype=float)
    rel = p_i - p_o
    h = float(rel @ rel) - params.obstacle_distance**2
    if h <= 0.0:
        return LinearConstraint(-rel, 0.0), True
    return LinearConstraint(-rel, (params.beta / 2.0) * h**3), False


def _feasible(v: np.ndarray, cons) -> bool:
    return all(float(c.a @ v) <= c.b + FEAS_TOL for c in cons)


def solve_qp_2d(v_desired, constraints) -> tuple[np.ndarray, bool]:
    """Exact minimizer of |v - v_desired|^2 over the half-plane
    intersection; (zero, True) when the region is empty.

    Candidates: the desired point, its projection onto each violated
    constraint line, and every pairwise line intersection.  Distance ties
    break lexicographically on (x, y).
    """
    v0 = np.asarray(v_desired, dtype=float)
    if _feasible(v0, constraints):
        return v0, False

    candidates = []
    for c in constraints:
        aa = float(c.a @ c.a)
        if aa == 0.0:
            continue
        slack = float(c.a @ v0) - c.b
        if slack > 0.0:
            candidates.append(v0 - (slack / aa) * c.a)
    n = len(constraints)
    for i in range(n):
        for j in range(i + 1, n):
            a1, a2 = constraints[i].a, constraints[j].a
            det = a1[0] * a2[1] - a1[1] * a2[0]
            if abs(det) < 1e-12:
                continue
            b1, b2 = constraints[i].b, constraints[j].b
            candidates.append(
                np.array([(b1 * a2[1] - b2 * a1[1]) / det, (a1[0] * b2 - a2[0] * b1) / det])
            )

    best = None
    best_key = None
    for v in candidates:
        if not _feasible(v, constraints):
            continue
        d = v - v0
        key = (float(d @ d), float(v[0]), float(v[1]))
        if best_key is None or key < best_key:
            best, best_key = v, key
    if best is None:
        return np.zeros(2), True
    return best, False


def filter_velocities(positions, desired, neighbor_sets, obstacles, params: SafetyParams):
    """Per-robot safe velocities plus any safety events.

    ``obstacles`` yield a core point per robot position (disk center /
    closest spine point); bodies beyond the sensing radius are ignored.
    """
    sensing = params.sensing_factor * params.obstacle_distance
    out = []
    events: list[SafetyEvent] = []
    for i, (p, v) in enumerate(zip(positions, desired)):
        cons = []
        for j in neighbor_sets[i]:
            c, violated = robot_pair_constraint(p, positions[j], params)
            cons.append(c)
            if violated:
                events.append(SafetyEvent("violation", i, f"robot {j}"))
        for k, ob in enumerate(obstacles):
            core = ob.core_point(np.asarray(p, dtype=float))
            if math.hypot(p[0] - core[0], p[1] - core[1]) > sensing:
                continue
            c, violated = obstacle_constraint(p, core, params)
            cons.append(c)
            if violated:
                events.append(SafetyEvent("violation", i, f"obstacle {k}"))
        safe, infeasible = solve_qp_2d(v, cons)
        if infeasible:
            events.append(SafetyEvent("infeasible", i, "qp"))
        out.append(safe)
    return out, events
