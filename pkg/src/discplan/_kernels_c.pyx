# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Batch geometry kernels, compiled twin of kernels_py.

Same signatures and semantics as the numpy reference; tests compare the
two backends on random and degenerate inputs. kernels.py picks this module
at import when it has been built.
"""

from libc.math cimport INFINITY, sqrt

import numpy as np

BACKEND = "cython"


cdef inline double _clamp01(double t) nogil:
    if t < 0.0:
        return 0.0
    if t > 1.0:
        return 1.0
    return t


cdef inline double _pt_seg(double px, double py, double ax, double ay,
                           double bx, double by) nogil:
    cdef double vx = bx - ax
    cdef double vy = by - ay
    cdef double wx = px - ax
    cdef double wy = py - ay
    cdef double vv = vx * vx + vy * vy
    cdef double t = 0.0
    cdef double dx, dy
    if vv > 0.0:
        t = _clamp01((wx * vx + wy * vy) / vv)
    dx = wx - t * vx
    dy = wy - t * vy
    return sqrt(dx * dx + dy * dy)


cdef inline double _orient(double ox, double oy, double ax, double ay,
                           double bx, double by) nogil:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def point_dist_to_segs(double px, double py, segs):
    """Distances from one point to each segment row."""
    cdef double[:, ::1] s = np.ascontiguousarray(segs, dtype=np.float64)
    cdef Py_ssize_t n = s.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _pt_seg(px, py, s[i, 0], s[i, 1], s[i, 2], s[i, 3])
    return out_arr


def points_min_dist_to_segs(pts, segs, chunk=4096):
    """For each point, the minimum distance over all segment rows."""
    cdef double[:, ::1] p = np.ascontiguousarray(pts, dtype=np.float64)
    cdef double[:, ::1] s = np.ascontiguousarray(segs, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t m = s.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double best, d
    with nogil:
        for i in range(n):
            best = INFINITY
            for j in range(m):
                d = _pt_seg(p[i, 0], p[i, 1], s[j, 0], s[j, 1],
                            s[j, 2], s[j, 3])
                if d < best:
                    best = d
            out[i] = best
    return out_arr


def segs_min_clearance_batch(queries, segs, chunk=512):
    """For each query segment, the min distance to all segment rows.

    Proper crossings give 0; otherwise the minimum of the four endpoint
    distances, matching the scalar predicate.
    """
    cdef double[:, ::1] q = np.ascontiguousarray(queries, dtype=np.float64)
    cdef double[:, ::1] s = np.ascontiguousarray(segs, dtype=np.float64)
    cdef Py_ssize_t n = q.shape[0]
    cdef Py_ssize_t m = s.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double ax, ay, bx, by, cx1, cy1, cx2, cy2
    cdef double d1, d2, d3, d4, d, best
    with nogil:
        for i in range(n):
            ax = q[i, 0]
            ay = q[i, 1]
            bx = q[i, 2]
            by = q[i, 3]
            best = INFINITY
            for j in range(m):
                cx1 = s[j, 0]
                cy1 = s[j, 1]
                cx2 = s[j, 2]
                cy2 = s[j, 3]
                d1 = _orient(ax, ay, bx, by, cx1, cy1)
                d2 = _orient(ax, ay, bx, by, cx2, cy2)
                d3 = _orient(cx1, cy1, cx2, cy2, ax, ay)
                d4 = _orient(cx1, cy1, cx2, cy2, bx, by)
                if ((d1 > 0.0) != (d2 > 0.0)) and ((d3 > 0.0) != (d4 > 0.0)):
                    best = 0.0
                    break
                d = _pt_seg(ax, ay, cx1, cy1, cx2, cy2)
                if d < best:
                    best = d
                d = _pt_seg(bx, by, cx1, cy1, cx2, cy2)
                if d < best:
                    best = d
                d = _pt_seg(cx1, cy1, ax, ay, bx, by)
                if d < best:
                    best = d
                d = _pt_seg(cx2, cy2, ax, ay, bx, by)
                if d < best:
                    best = d
            out[i] = best
    return out_arr


def points_in_polygon_batch(pts, verts):
    """Even-odd containment test for each point against one polygon."""
    cdef double[:, ::1] p = np.ascontiguousarray(pts, dtype=np.float64)
    cdef double[:, ::1] v = np.ascontiguousarray(verts, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t m = v.shape[0]
    out_arr = np.zeros(n, dtype=np.bool_)
    cdef unsigned char[::1] out = out_arr.view(np.uint8)
    cdef Py_ssize_t i, j, k
    cdef double px, py, x1, y1, x2, y2, dy, xc
    cdef bint inside
    with nogil:
        for i in range(n):
            px = p[i, 0]
            py = p[i, 1]
            inside = 0
            for j in range(m):
                k = j + 1
                if k == m:
                    k = 0
                x1 = v[j, 0]
                y1 = v[j, 1]
                x2 = v[k, 0]
                y2 = v[k, 1]
                if (y1 > py) != (y2 > py):
                    dy = y2 - y1
                    xc = x1 + (py - y1) * (x2 - x1) / dy
                    if px < xc:
                        inside = not inside
            out[i] = inside
    return out_arr


def min_pairwise_dist(positions):
    """positions: (T, R, 2) robot centers per sample; returns per-sample min pair distance."""
    cdef double[:, :, ::1] p = np.ascontiguousarray(positions,
                                                    dtype=np.float64)
    cdef Py_ssize_t t = p.shape[0]
    cdef Py_ssize_t r = p.shape[1]
    out_arr = np.empty(t, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, i, j
    cdef double best, dx, dy, d
    if r < 2:
        out_arr.fill(np.inf)
        return out_arr
    with nogil:
        for k in range(t):
            best = INFINITY
            for i in range(r - 1):
                for j in range(i + 1, r):
                    dx = p[k, i, 0] - p[k, j, 0]
                    dy = p[k, i, 1] - p[k, j, 1]
                    d = dx * dx + dy * dy
                    if d < best:
                        best = d
            out[k] = sqrt(best)
    return out_arr
