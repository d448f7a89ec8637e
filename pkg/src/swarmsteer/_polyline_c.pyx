# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython polyline distance kernel: the hot inner loop of spline field
evaluation (five distance queries per gradient sample per robot per tick)."""

from libc.math cimport sqrt

import numpy as np
cimport numpy as cnp


def polyline_signed_distance(cnp.ndarray[cnp.float64_t, ndim=2] points, bint closed, xi):
    cdef double px = xi[0]
    cdef double py = xi[1]
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t nseg = n if closed else n - 1
    cdef Py_ssize_t i, j, best = 0
    cdef double ax, ay, bx, by, dx, dy, dd, t, ox, oy, d2
    cdef double best_d2 = 1e300
    cdef double ba_x = 0.0, ba_y = 0.0, bd_x = 1.0, bd_y = 0.0
    for i in range(nseg):
        j = i + 1
        if j == n:
            j = 0
        ax = points[i, 0]; ay = points[i, 1]
        bx = points[j, 0]; by = points[j, 1]
        dx = bx - ax; dy = by - ay
        dd = dx * dx + dy * dy
        if dd == 0.0:
            t = 0.0
        else:
            t = ((px - ax) * dx + (py - ay) * dy) / dd
            # Open polylines extend their first and last segments to
            # infinity so the field has no circulating end caps.
            if t < 0.0 and (closed or i != 0):
                t = 0.0
            elif t > 1.0 and (closed or i != nseg - 1):
                t = 1.0
        ox = px - (ax + t * dx)
        oy = py - (ay + t * dy)
        d2 = ox * ox + oy * oy
        if d2 < best_d2:
            best_d2 = d2
            best = i
            ba_x = ax; ba_y = ay
            bd_x = dx; bd_y = dy
    cdef double cross = bd_x * (py - ba_y) - bd_y * (px - ba_x)
    if cross >= 0.0:
        return sqrt(best_d2)
    return -sqrt(best_d2)
