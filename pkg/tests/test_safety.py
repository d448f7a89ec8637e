"""Safety filter: exact 2-D QP against a grid-search oracle, barrier
constraint construction, and closed-loop invariance properties."""

from __future__ import annotations

import math

import numpy as np
import pytest

from swarmsteer.safety import (
    LinearConstraint,
    SafetyParams,
    filter_velocities,
    obstacle_constraint,
    robot_pair_constraint,
    solve_qp_2d,
)


def grid_oracle(v0, cons, box=6.0, step=1e-3):
    """Grid-search oracle for min |v - v0|^2 subject to a.v <= b.

    The minimizer is either v0 itself or lies on a constraint boundary,
    so a dense 1-D grid along every boundary line (plus v0) covers it to
    within ``step``.  Independent of the solver's candidate enumeration."""
    best = None
    best_d2 = math.inf

    def consider(pts):
        nonlocal best, best_d2
        pts = np.atleast_2d(pts)
        feas = np.ones(len(pts), dtype=bool)
        for c in cons:
            feas &= pts @ c.a <= c.b + 1e-9
        pts = pts[feas]
        if len(pts) == 0:
            return
        d2 = ((pts - v0) ** 2).sum(axis=1)
        i = int(np.argmin(d2))
        if d2[i] < best_d2:
            best_d2 = float(d2[i])
            best = pts[i]

    consider(np.asarray(v0, float))
    ts = np.arange(-box, box + step / 2, step)
    for c in cons:
        aa = float(c.a @ c.a)
        if aa == 0.0:
            continue
        foot = (c.b / aa) * c.a  # a point on the boundary line
        tangent = np.array([-c.a[1], c.a[0]]) / math.sqrt(aa)
        consider(foot + ts[:, None] * tangent)
    return best


def random_instance(rng):
    """Constraints all satisfied with margin at an interior point, so the
    feasible region contains a ball the coarse grid cannot miss."""
    x0 = rng.uniform(-1, 1, 2)
    cons = []
    for _ in range(rng.integers(1, 9)):
        a = rng.normal(size=2)
        a /= np.hypot(*a)
        slack = rng.uniform(0.08, 1.0)
        cons.append(LinearConstraint(a, float(a @ x0) + slack))
    v0 = rng.uniform(-2, 2, 2)
    return v0, cons


def test_qp_matches_grid_oracle_200_instances():
    rng = np.random.default_rng(23)
    compared = 0
    for _ in range(200):
        v0, cons = random_instance(rng)
        got, infeasible = solve_qp_2d(v0, cons)
        assert not infeasible
        want = grid_oracle(v0, cons)
        assert want is not None
        assert float(np.hypot(*(got - want))) < 2e-3
        compared += 1
    assert compared == 200


def test_feasible_input_is_identity():
    rng = np.random.default_rng(29)
    hits = 0
    for _ in range(500):
        v0, cons = random_instance(rng)
        if all(float(c.a @ v0) <= c.b for c in cons):
            got, infeasible = solve_qp_2d(v0, cons)
            assert not infeasible
            assert got[0] == v0[0] and got[1] == v0[1]  # exact, not approx
            hits += 1
    assert hits > 20


def test_infeasible_region_yields_zero_and_flag():
    cons = [
        LinearConstraint(np.array([1.0, 0.0]), -1.0),
        LinearConstraint(np.array([-1.0, 0.0]), -1.0),
    ]
    v, infeasible = solve_qp_2d(np.array([5.0, 5.0]), cons)
    assert infeasible
    assert np.all(v == 0.0)


def test_tie_breaks_lexicographically():
    # Two symmetric constraints make (0, +y) and (0, -y) equidistant
    # projections; the solver must pick a deterministic representative.
    cons = [LinearConstraint(np.array([1.0, 0.0]), -1.0)]
    v1, _ = solve_qp_2d(np.array([2.0, 0.0]), cons)
    v2, _ = solve_qp_2d(np.array([2.0, 0.0]), cons)
    assert np.all(v1 == v2)


def test_pair_constraint_budget_and_violation():
    params = SafetyParams(robot_distance=15.0, obstacle_distance=30.0)
    c, violated = robot_pair_constraint([0.0, 0.0], [40.0, 0.0], params)
    assert not violated
    h = 40.0**2 - 15.0**2
    assert c.b == pytest.approx(params.alpha / 4.0 * h**3)
    # Overlap: hard stop along the approach direction.
    c2, violated2 = robot_pair_constraint([0.0, 0.0], [10.0, 0.0], params)
    assert violated2 and c2.b == 0.0


def test_obstacle_constraint_budget():
    params = SafetyParams(robot_distance=15.0, obstacle_distance=30.0)
    c, violated = obstacle_constraint([0.0, 0.0], [50.0, 0.0], params)
    h = 50.0**2 - 30.0**2
    assert not violated
    assert c.b == pytest.approx(params.beta / 2.0 * h**3)


def _euler_run(positions, desired_fn, params, obstacles=(), steps=3000, dt=0.02):
    positions = [np.asarray(p, float) for p in positions]
    n = len(positions)
    nbrs = [[j for j in range(n) if j != i] for i in range(n)]
    min_pair = math.inf
    min_clear = math.inf
    for _ in range(steps):
        desired = desired_fn(positions)
        safe, _events = filter_velocities(positions, desired, nbrs, list(obstacles), params)
        positions = [p + v * dt for p, v in zip(positions, safe)]
        for i in range(n):
            for j in range(i + 1, n):
                min_pair = min(min_pair, float(np.hypot(*(positions[i] - positions[j]))))
            for ob in obstacles:
                core = ob.core_point(positions[i])
                min_clear = min(min_clear, float(np.hypot(*(positions[i] - core))))
    return min_pair, min_clear


def test_head_on_robots_never_collide():
    params = SafetyParams(robot_distance=15.0, obstacle_distance=30.0)
    speed = 40.0

    def head_on(ps):
        return [np.array([speed, 0.0]), np.array([-speed, 0.0])]

    min_pair, _ = _euler_run([[-100.0, 0.0], [100.0, 0.1]], head_on, params, steps=1000)
    assert min_pair >= params.robot_distance - 1e-3


def test_robot_driven_at_disk_keeps_clearance():
    from swarmsteer.fields import disk_obstacle

    params = SafetyParams(robot_distance=15.0, obstacle_distance=30.0)
    ob = disk_obstacle((100.0, 0.0), 10.0)

    def charge(ps):
        return [np.array([40.0, 0.0])]

    _, min_clear = _euler_run([[-100.0, 0.2]], charge, params, obstacles=[ob], steps=1500)
    assert min_clear >= params.obstacle_distance - 1e-3


def test_filter_reports_violation_events():
    params = SafetyParams(robot_distance=15.0, obstacle_distance=30.0)
    safe, events = filter_velocities(
        [np.array([0.0, 0.0]), np.array([5.0, 0.0])],
        [np.array([10.0, 0.0]), np.array([-10.0, 0.0])],
        [[1], [0]],
        [],
        params,
    )
    assert any(ev.kind == "violation" for ev in events)
