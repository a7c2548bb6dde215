"""Numba-compiled inner loops for collision detection and the overlap proxy.

Polygons enter these kernels as a concatenated vertex array ``verts`` of
shape (m, 2) plus an int64 ``offs`` array of ring start offsets (length
rings+1), covering the outer ring and any holes.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def point_in_rings(x: float, y: float, verts: np.ndarray, offs: np.ndarray) -> bool:
    """Even-odd containment test over all rings."""
    inside = False
    for r in range(len(offs) - 1):
        lo, hi = offs[r], offs[r + 1]
        j = hi - 1
        for i in range(lo, hi):
            xi, yi = verts[i, 0], verts[i, 1]
            xj, yj = verts[j, 0], verts[j, 1]
            if (yi > y) != (yj > y):
                xc = xi + (y - yi) * (xj - xi) / (yj - yi)
                if x < xc:
                    inside = not inside
            j = i
    return inside


@njit(cache=True)
def _seg_point_dist2(px, py, ax, ay, bx, by) -> float:
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        ex, ey = px - ax, py - ay
        return ex * ex + ey * ey
    s = ((px - ax) * dx + (py - ay) * dy) / denom
    if s < 0.0:
        s = 0.0
    elif s > 1.0:
        s = 1.0
    ex = px - (ax + s * dx)
    ey = py - (ay + s * dy)
    return ex * ex + ey * ey


@njit(cache=True)
def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


@njit(cache=True)
def edges_cross_or_near(
    averts: np.ndarray,
    aoffs: np.ndarray,
    bverts: np.ndarray,
    boffs: np.ndarray,
    eps: float,
) -> bool:
    """True if any edge pair properly crosses or passes within ``eps``."""
    eps2 = eps * eps
    for ra in range(len(aoffs) - 1):
        alo, ahi = aoffs[ra], aoffs[ra + 1]
        ja = ahi - 1
        for ia in range(alo, ahi):
            p1x, p1y = averts[ja, 0], averts[ja, 1]
            p2x, p2y = averts[ia, 0], averts[ia, 1]
            for rb in range(len(boffs) - 1):
                blo, bhi = boffs[rb], boffs[rb + 1]
                jb = bhi - 1
                for ib in range(blo, bhi):
                    q1x, q1y = bverts[jb, 0], bverts[jb, 1]
                    q2x, q2y = bverts[ib, 0], bverts[ib, 1]
                    d1 = _orient(q1x, q1y, q2x, q2y, p1x, p1y)
                    d2 = _orient(q1x, q1y, q2x, q2y, p2x, p2y)
                    d3 = _orient(p1x, p1y, p2x, p2y, q1x, q1y)
                    d4 = _orient(p1x, p1y, p2x, p2y, q2x, q2y)
                    if ((d1 > 0.0) != (d2 > 0.0)) and ((d3 > 0.0) != (d4 > 0.0)):
                        return True
                    if eps2 > 0.0:
                        if (
                            _seg_point_dist2(p1x, p1y, q1x, q1y, q2x, q2y) < eps2
                            or _seg_point_dist2(p2x, p2y, q1x, q1y, q2x, q2y) < eps2
                            or _seg_point_dist2(q1x, q1y, p1x, p1y, p2x, p2y) < eps2
                            or _seg_point_dist2(q2x, q2y, p1x, p1y, p2x, p2y) < eps2
                        ):
                            return True
                    jb = ib
            ja = ia
    return False


@njit(cache=True)
def poles_overlap(a_xyr: np.ndarray, b_xyr: np.ndarray, margin: float) -> bool:
    """True if any pole pair penetrates deeper than ``margin``."""
    for i in range(len(a_xyr)):
        ax, ay, ar = a_xyr[i, 0], a_xyr[i, 1], a_xyr[i, 2]
        for j in range(len(b_xyr)):
            dx = ax - b_xyr[j, 0]
            dy = ay - b_xyr[j, 1]
            if ar + b_xyr[j, 2] - np.sqrt(dx * dx + dy * dy) > margin:
                return True
    return False


@njit(cache=True)
def proxy_alpha(a_xyr: np.ndarray, b_xyr: np.ndarray, eps: float) -> float:
    """Weighted sum of decayed pole-pair penetration depths.

    Dense double loop over both pole arrays, no early exit: branch-light and
    deterministic.
    """
    alpha = 0.0
    for i in range(len(a_xyr)):
        ax, ay, ar = a_xyr[i, 0], a_xyr[i, 1], a_xyr[i, 2]
        da = 2.0 * ar
        for j in range(len(b_xyr)):
            dx = ax - b_xyr[j, 0]
            dy = ay - b_xyr[j, 1]
            rb = b_xyr[j, 2]
            delta = ar + rb - np.sqrt(dx * dx + dy * dy)
            if delta >= eps:
                dp = delta
            else:
                dp = eps * eps / (-delta + 2.0 * eps)
            db = 2.0 * rb
            alpha += dp * (da if da < db else db)
    return alpha
