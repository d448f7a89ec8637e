"""Implicit scalar fields, guiding vector fields, and smooth bump blending.

A desired path or obstacle boundary is the zero level set of a scalar
field phi.  The guiding field

    X(xi) = gamma * E @ grad_phi(xi) - k * phi(xi) * grad_phi(xi)

combines a tangential term (move along the level set) with an orthogonal
term (move toward it); E is the fixed 90-degree rotation.  Obstacles carry
a reactive boundary (phi = 0) and an inner repulsive boundary (phi = c < 0);
zero-in / zero-out bump weights fade the path field out and the obstacle
boundary field in across the annulus between them, producing a composite
field that steers around obstacles without velocity jumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import polyline_signed_distance

ROT90 = np.array([[0.0, -1.0], [1.0, 0.0]])

# Margins used when deriving reactive / repulsive boundaries from a body
# outline.  Expressed as multiples of the robot radius so a robot starts
# reacting three radii out and may never come closer than 1.5 radii.
REACTIVE_MARGIN = 3.0
REPULSIVE_MARGIN = 1.5
DEFAULT_ROBOT_RADIUS = 6.0

DEFAULT_GRAD_STEP = 1e-3


class PathError(ValueError):
    """Raised for degenerate operator-drawn paths."""


def vec(x: float, y: float) -> np.ndarray:
    return np.array([float(x), float(y)])


def hat(v: np.ndarray) -> np.ndarray:
    """Normalize; the zero vector maps to the zero vector."""
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        return np.zeros(2)
    return v / n


@dataclass(frozen=True)
class FieldSample:
    value: float
    gradient: np.ndarray


@dataclass(frozen=True)
class CirclePath:
    """Closed analytic path phi = |xi - center|^2 - radius^2."""

    center: np.ndarray
    radius: float
    direction: int = 1
    gain: float = 1e-4

    def __post_init__(self):
        if self.radius <= 0:
            raise PathError("circle radius must be positive")

    def sample(self, xi: np.ndarray) -> FieldSample:
        d = xi - self.center
        return FieldSample(float(d @ d) - self.radius**2, 2.0 * d)


@dataclass(frozen=True)
class PolylinePath:
    """Arc-length resampled open or closed polyline.

    phi is the signed nearest distance to the polyline, positive on the
    right of the travel direction so that the rotated gradient in the
    guiding field advances along the points in input order.  The gradient
    is estimated by central differences; the nearest point at a cusp is
    resolved to the lowest parameter, so evaluation is total.
    """

    points: np.ndarray  # (n, 2) resampled control points
    closed: bool = False
    direction: int = 1
    gain: float = 0.05
    grad_step: float = DEFAULT_GRAD_STEP

    def value(self, xi: np.ndarray) -> float:
        return -polyline_signed_distance(self.points, self.closed, xi)

    def sample(self, xi: np.ndarray) -> FieldSample:
        h = self.grad_step
        pts, closed = self.points, self.closed
        v = -polyline_signed_distance(pts, closed, xi)
        gx = (
            polyline_signed_distance(pts, closed, xi - (h, 0.0))
            - polyline_signed_distance(pts, closed, xi + (h, 0.0))
        ) / (2.0 * h)
        gy = (
            polyline_signed_distance(pts, closed, xi - (0.0, h))
            - polyline_signed_distance(pts, closed, xi + (0.0, h))
        ) / (2.0 * h)
        return FieldSample(v, np.array([gx, gy]))


@dataclass(frozen=True)
class DiskObstacle:
    """Disk body with normalized field phi = (|xi-c|^2 - rR^2) / rR^2.

    The reactive boundary is phi = 0 (radius ``reactive_radius``) and the
    repulsive boundary phi = ``repulse_level`` sits at ``repulse_radius``.
    """

    center: np.ndarray
    body_radius: float
    reactive_radius: float
    repulse_radius: float
    direction: int = 0  # 0 = auto (latched from velocity), else +/-1
    gain: float = 1.0
    l1: float = 1.0
    l2: float = 1.0

    @property
    def repulse_level(self) -> float:
        return (self.repulse_radius**2 - self.reactive_radius**2) / self.reactive_radius**2

    def sample(self, xi: np.ndarray) -> FieldSample:
        d = xi - self.center
        r2 = self.reactive_radius**2
        return FieldSample((float(d @ d) - r2) / r2, 2.0 * d / r2)

    def body_distance(self, xi: np.ndarray) -> float:
        """Distance from xi to the body outline (negative inside)."""
        return float(np.hypot(*(xi - self.center))) - self.body_radius

    def core_point(self, xi: np.ndarray) -> np.ndarray:
        """Representative point used by the safety filter."""
        return self.center


@dataclass(frozen=True)
class BarObstacle:
    """Rectangular bar; the field is a capsule around the bar's spine.

    phi = (d^2 - wR^2) / wR^2 with d the distance to the spine segment and
    wR the reactive half-width, so level sets are stadiums enclosing the
    rectangle.  (A plain axis-ratio-preserving ellipse cannot place the
    repulsive boundary between the body and the reactive boundary for
    elongated bars, so the capsule form is used for both boundaries.)
    """

    center: np.ndarray
    half_length: float
    half_width: float
    heading: float
    reactive_width: float
    repulse_width: float
    direction: int = 0
    gain: float = 1.0
    l1: float = 1.0
    l2: float = 1.0

    @property
    def spine(self) -> tuple[np.ndarray, np.ndarray]:
        axis = np.array([math.cos(self.heading), math.sin(self.heading)])
        return (self.center - self.half_length * axis, self.center + self.half_length * axis)

    @property
    def repulse_level(self) -> float:
        return (self.repulse_width**2 - self.reactive_width**2) / self.reactive_width**2

    def core_point(self, xi: np.ndarray) -> np.ndarray:
        a, b = self.spine
        ab = b - a
        t = float((xi - a) @ ab) / float(ab @ ab)
        t = min(1.0, max(0.0, t))
        return a + t * ab

    def sample(self, xi: np.ndarray) -> FieldSample:
        cp = self.core_point(xi)
        d = xi - cp
        w2 = self.reactive_width**2
        return FieldSample((float(d @ d) - w2) / w2, 2.0 * d / w2)

    def corners(self) -> np.ndarray:
        axis = np.array([math.cos(self.heading), math.sin(self.heading)])
        norm = np.array([-axis[1], axis[0]])
        l, w = self.half_length, self.half_width
        return np.array(
            [
                self.center + l * axis + w * norm,
                self.center + l * axis - w * norm,
                self.center - l * axis - w * norm,
                self.center - l * axis + w * norm,
            ]
        )

    def body_distance(self, xi: np.ndarray) -> float:
        a, b = self.spine
        ab = b - a
        t = min(1.0, max(0.0, float((xi - a) @ ab) / float(ab @ ab)))
        return float(np.hypot(*(xi - (a + t * ab)))) - self.half_width


ImplicitPath = CirclePath | PolylinePath
ObstacleField = DiskObstacle | BarObstacle


def disk_obstacle(
    center,
    body_radius: float,
    robot_radius: float = DEFAULT_ROBOT_RADIUS,
    direction: int = 0,
    gain: float = 1.0,
    l1: float = 1.0,
    l2: float = 1.0,
) -> DiskObstacle:
    return DiskObstacle(
        center=np.asarray(center, dtype=float),
        body_radius=body_radius,
        reactive_radius=body_radius + REACTIVE_MARGIN * robot_radius,
        repulse_radius=body_radius + REPULSIVE_MARGIN * robot_radius,
        direction=direction,
        gain=gain,
        l1=l1,
        l2=l2,
    )


def bar_obstacle(
    center,
    half_length: float,
    half_width: float,
    heading: float,
    robot_radius: float = DEFAULT_ROBOT_RADIUS,
    direction: int = 0,
    gain: float = 1.0,
    l1: float = 1.0,
    l2: float = 1.0,
) -> BarObstacle:
    return BarObstacle(
        center=np.asarray(center, dtype=float),
        half_length=half_length,
        half_width=half_width,
        heading=heading,
        reactive_width=half_width + REACTIVE_MARGIN * robot_radius,
        repulse_width=half_width + REPULSIVE_MARGIN * robot_radius,
        direction=direction,
        gain=gain,
        l1=l1,
        l2=l2,
    )


def eval_field(f: ImplicitPath | ObstacleField, xi) -> FieldSample:
    return f.sample(np.asarray(xi, dtype=float))


def gvf(f: ImplicitPath | ObstacleField, xi, gamma: int, k: float) -> np.ndarray:
    """Guiding vector field gamma*E*grad - k*phi*grad.

    A zero gradient (e.g. the circle center) yields the zero vector; the
    caller treats that as a degenerate sample.
    """
    s = eval_field(f, xi)
    return gamma * (ROT90 @ s.gradient) - k * s.value * s.gradient


def _bump_split(phi: float, c: float, l1: float, l2: float) -> tuple[float, float]:
    """Return (zero_out, zero_in) weights for a level value phi."""
    if phi <= c:
        return 1.0, 0.0
    if phi >= 0.0:
        return 0.0, 1.0
    f1 = math.exp(l1 / (c - phi))
    f2 = math.exp(l2 / phi)
    tot = f1 + f2
    return f2 / tot, f1 / tot


def bump_zero_out(ob: ObstacleField, xi) -> float:
    """Weight of the obstacle-boundary field: 1 inside the repulsive area,
    0 outside the reactive area, smooth in between."""
    phi = eval_field(ob, xi).value
    return _bump_split(phi, ob.repulse_level, ob.l1, ob.l2)[0]


def bump_zero_in(ob: ObstacleField, xi) -> float:
    """Weight of the path field: 0 inside the repulsive area, 1 outside
    the reactive area; complements bump_zero_out."""
    phi = eval_field(ob, xi).value
    return _bump_split(phi, ob.repulse_level, ob.l1, ob.l2)[1]


def zero_in_product(obstacles, xi) -> float:
    p = 1.0
    for ob in obstacles:
        p *= bump_zero_in(ob, xi)
        if p == 0.0:
            break
    return p


def composite_field(
    path: ImplicitPath | None,
    obstacles,
    xi,
    latched: dict[int, int] | None = None,
) -> np.ndarray:
    """Bump-weighted blend of the path field and obstacle boundary fields.

    ``latched`` maps obstacle index -> traversal direction (+/-1) for
    obstacles whose direction is auto; unlatched obstacles default to +1.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.zeros(2)
    zero_in = 1.0
    for i, ob in enumerate(obstacles):
        phi = eval_field(ob, xi).value
        z, s = _bump_split(phi, ob.repulse_level, ob.l1, ob.l2)
        zero_in *= s
        if z > 0.0:
            gamma = ob.direction
            if gamma == 0:
                gamma = (latched or {}).get(i, 1)
            out = out + z * hat(gvf(ob, xi, gamma, ob.gain))
    if path is not None and zero_in > 0.0:
        out = out + zero_in * hat(gvf(path, xi, path.direction, path.gain))
    return out


def human_intention(path: ImplicitPath | None, obstacles, xi) -> np.ndarray:
    """Zero-in gated path field: the guidance a drawn path contributes
    outside all repulsive areas; the zero vector when no path is active."""
    if path is None:
        return np.zeros(2)
    xi = np.asarray(xi, dtype=float)
    g = zero_in_product(obstacles, xi)
    if g == 0.0:
        return np.zeros(2)
    return g * hat(gvf(path, xi, path.direction, path.gain))


def latch_obstacle_direction(ob: ObstacleField, xi, v_current) -> int:
    """Pick the traversal direction around an obstacle when a robot enters
    its reactive area: configured direction if set, else the sign of the
    tangential component of the current velocity (+1 on ties)."""
    if ob.direction != 0:
        return ob.direction
    g = eval_field(ob, xi).gradient
    tangent = ROT90 @ g
    return 1 if float(tangent @ np.asarray(v_current, dtype=float)) >= 0.0 else -1


def path_from_polyline(points, min_spacing: float = 5.0, gain: float = 0.05) -> PolylinePath:
    """Build a followable path from an operator-drawn point sequence.

    Consecutive points closer than ``min_spacing`` are merged, the stroke
    is resampled to uniform arc length, and a stroke whose endpoints meet
    is treated as a closed loop.  Travel direction is the input order.
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    dedup: list[np.ndarray] = []
    for p in pts:
        if not dedup or np.hypot(*(p - dedup[-1])) >= min_spacing:
            dedup.append(p)
    closed = False
    if len(dedup) >= 3 and np.hypot(*(dedup[-1] - dedup[0])) < min_spacing:
        dedup = dedup[:-1]
        closed = True
    elif len(pts) >= 3 and np.hypot(*(pts[-1] - pts[0])) < min_spacing:
        closed = True
    if len(dedup) < 2:
        raise PathError("degenerate path: need at least 2 points separated by min spacing")

    poly = np.array(dedup)
    segs = np.diff(np.vstack([poly, poly[:1]]) if closed else poly, axis=0)
    seglen = np.hypot(segs[:, 0], segs[:, 1])
    total = float(seglen.sum())
    n = max(2, int(round(total / min_spacing)) + (0 if closed else 1))
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    targets = np.linspace(0.0, total, n, endpoint=not closed)
    out = np.empty((len(targets), 2))
    for k, t in enumerate(targets):
        j = min(int(np.searchsorted(cum, t, side="right")) - 1, len(seglen) - 1)
        frac = (t - cum[j]) / seglen[j] if seglen[j] > 0 else 0.0
        out[k] = poly[j] + frac * segs[j]
    return PolylinePath(points=out, closed=closed, gain=gain)


def reactive_cores_distance(a: ObstacleField, b: ObstacleField) -> float:
    """Distance between reactive areas (negative if they overlap)."""

    def seg_of(ob):
        if isinstance(ob, BarObstacle):
            return ob.spine, ob.reactive_width
        return (ob.center, ob.center), ob.reactive_radius

    (a0, a1), ra = seg_of(a)
    (b0, b1), rb = seg_of(b)
    return _segment_distance(a0, a1, b0, b1) - ra - rb


def _segment_distance(a0, a1, b0, b1) -> float:
    def pt_seg(p, s0, s1):
        d = s1 - s0
        dd = float(d @ d)
        t = 0.0 if dd == 0.0 else min(1.0, max(0.0, float((p - s0) @ d) / dd))
        return float(np.hypot(*(p - (s0 + t * d))))

    cands = [pt_seg(a0, b0, b1), pt_seg(a1, b0, b1), pt_seg(b0, a0, a1), pt_seg(b1, a0, a1)]
    return min(cands)
