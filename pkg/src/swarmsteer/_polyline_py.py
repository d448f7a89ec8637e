"""Pure-NumPy polyline distance kernel (fallback for the C extension)."""

import numpy as np


def polyline_signed_distance(points: np.ndarray, closed: bool, xi) -> float:
    """Signed nearest distance from xi to a polyline.

    Positive on the left of the travel direction.  Ambiguous nearest
    points (cusps, medial axis) resolve to the lowest segment index, which
    np.argmin guarantees.  An open polyline's first and last segments are
    extended to infinity so the field has no circulating end caps and
    guides from anywhere onto the stroke.
    """
    xi = np.asarray(xi, dtype=float)
    pts = points
    if closed:
        a = pts
        b = np.roll(pts, -1, axis=0)
    else:
        a = pts[:-1]
        b = pts[1:]
    d = b - a
    dd = np.einsum("ij,ij->i", d, d)
    dd_safe = np.where(dd == 0.0, 1.0, dd)
    t = np.einsum("ij,ij->i", xi - a, d) / dd_safe
    lo = np.zeros(len(t))
    hi = np.ones(len(t))
    if not closed:
        lo[0] = -np.inf
        hi[-1] = np.inf
    t = np.clip(t, lo, hi)
    proj = a + t[:, None] * d
    off = xi - proj
    dist2 = np.einsum("ij,ij->i", off, off)
    j = int(np.argmin(dist2))
    cross = d[j, 0] * (xi[1] - a[j, 1]) - d[j, 1] * (xi[0] - a[j, 0])
    sign = 1.0 if cross >= 0.0 else -1.0
    return sign * float(np.sqrt(dist2[j]))
