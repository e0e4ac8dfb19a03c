"""Batch geometry kernels, numpy implementation.

Segment arrays use shape (N, 4) rows (ax, ay, bx, by); point arrays use
(N, 2). These functions are the hot inner loops of tangent-graph validation
and trajectory checking; a compiled twin with the same signatures may be
selected at import by kernels.py.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def point_dist_to_segs(px: float, py: float, segs: np.ndarray) -> np.ndarray:
    """Distances from one point to each segment row."""
    ax, ay, bx, by = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]
    vx, vy = bx - ax, by - ay
    wx, wy = px - ax, py - ay
    vv = vx * vx + vy * vy
    t = np.divide(wx * vx + wy * vy, vv, out=np.zeros_like(vv), where=vv > 0)
    t = np.clip(t, 0.0, 1.0)
    dx = wx - t * vx
    dy = wy - t * vy
    return np.hypot(dx, dy)


def points_min_dist_to_segs(pts: np.ndarray, segs: np.ndarray,
                            chunk: int = 4096) -> np.ndarray:
    """For each point, the minimum distance over all segment rows."""
    pts = np.asarray(pts, dtype=float)
    out = np.empty(len(pts))
    ax, ay, bx, by = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]
    vx, vy = bx - ax, by - ay
    vv = vx * vx + vy * vy
    vv_safe = np.where(vv > 0, vv, 1.0)
    for lo in range(0, len(pts), chunk):
        p = pts[lo:lo + chunk]
        wx = p[:, 0:1] - ax[None, :]
        wy = p[:, 1:2] - ay[None, :]
        t = np.clip((wx * vx + wy * vy) / vv_safe, 0.0, 1.0)
        dx = wx - t * vx
        dy = wy - t * vy
        out[lo:lo + chunk] = np.sqrt(np.min(dx * dx + dy * dy, axis=1))
    return out


def _orient(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def segs_min_clearance_batch(queries: np.ndarray, segs: np.ndarray,
                             chunk: int = 512) -> np.ndarray:
    """For each query segment, the min distance to all segment rows.

    Proper crossings give 0; otherwise the minimum of the four endpoint
    distances, matching the scalar predicate.
    """
    queries = np.asarray(queries, dtype=float)
    out = np.empty(len(queries))
    cx1, cy1, cx2, cy2 = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]
    for lo in range(0, len(queries), chunk):
        q = queries[lo:lo + chunk]
        ax, ay, bx, by = (q[:, 0:1], q[:, 1:2], q[:, 2:3], q[:, 3:4])
        d1 = _orient(ax, ay, bx, by, cx1[None, :], cy1[None, :])
        d2 = _orient(ax, ay, bx, by, cx2[None, :], cy2[None, :])
        d3 = _orient(cx1[None, :], cy1[None, :], cx2[None, :], cy2[None, :], ax, ay)
        d4 = _orient(cx1[None, :], cy1[None, :], cx2[None, :], cy2[None, :], bx, by)
        crossing = ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0))
        dmin = np.minimum(
            np.minimum(_pt_seg(ax, ay, cx1, cy1, cx2, cy2),
                       _pt_seg(bx, by, cx1, cy1, cx2, cy2)),
            np.minimum(_pt_seg_rev(cx1, cy1, ax, ay, bx, by),
                       _pt_seg_rev(cx2, cy2, ax, ay, bx, by)))
        dmin = np.where(crossing, 0.0, dmin)
        out[lo:lo + chunk] = dmin.min(axis=1)
    return out


def _pt_seg(px, py, ax, ay, bx, by):
    """Point rows (column vectors) against segment rows (row vectors)."""
    vx = (bx - ax)[None, :]
    vy = (by - ay)[None, :]
    wx = px - ax[None, :]
    wy = py - ay[None, :]
    vv = vx * vx + vy * vy
    t = np.clip(np.divide(wx * vx + wy * vy, vv, out=np.zeros_like(wx), where=vv > 0), 0.0, 1.0)
    dx = wx - t * vx
    dy = wy - t * vy
    return np.sqrt(dx * dx + dy * dy)


def _pt_seg_rev(px, py, ax, ay, bx, by):
    """Point rows (row vectors) against segment columns (column vectors)."""
    vx = bx - ax
    vy = by - ay
    wx = px[None, :] - ax
    wy = py[None, :] - ay
    vv = vx * vx + vy * vy
    t = np.clip(np.divide(wx * vx + wy * vy, vv, out=np.zeros_like(wx), where=vv > 0), 0.0, 1.0)
    dx = wx - t * vx
    dy = wy - t * vy
    return np.sqrt(dx * dx + dy * dy)


def points_in_polygon_batch(pts: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Even-odd containment test for each point against one polygon."""
    pts = np.asarray(pts, dtype=float)
    x1 = verts[:, 0]
    y1 = verts[:, 1]
    x2 = np.roll(verts[:, 0], -1)
    y2 = np.roll(verts[:, 1], -1)
    px = pts[:, 0:1]
    py = pts[:, 1:2]
    straddle = (y1[None, :] > py) != (y2[None, :] > py)
    dy = y2 - y1
    dy_safe = np.where(dy == 0, 1.0, dy)
    xc = x1[None, :] + (py - y1[None, :]) * (x2 - x1)[None, :] / dy_safe[None, :]
    hits = straddle & (px < xc)
    return (hits.sum(axis=1) % 2).astype(bool)


def min_pairwise_dist(positions: np.ndarray) -> np.ndarray:
    """positions: (T, R, 2) robot centers per sample; returns per-sample min pair distance."""
    t, r, _ = positions.shape
    if r < 2:
        return np.full(t, np.inf)
    iu, ju = np.triu_indices(r, k=1)
    d = positions[:, iu, :] - positions[:, ju, :]
    return np.sqrt((d * d).sum(axis=2)).min(axis=1)
