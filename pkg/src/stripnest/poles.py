"""Pole-of-inaccessibility computation by quadtree grid refinement.

The first pole is the largest inscribable circle of the polygon. Each
subsequent pole maximizes clearance from both the boundary and all
previously accepted pole discs, so the disc set progressively covers the
interior. Generation stops once the marginal radius drops below a fraction
of the first pole's radius, or after ``n_max`` poles.
"""
from __future__ import annotations

import math

import numpy as np

from .geometry import GeometryError, Pole, PoleSet, Polygon

_SQRT2 = math.sqrt(2.0)
_BATCH = 4096


def _clearance_batch(shape: Polygon, discs_xyr: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Clearance of each point: signed boundary distance, capped by the
    distance to the surface of every accepted disc. Vectorized over points."""
    n = len(pts)
    dist = np.full(n, np.inf)
    inside = np.zeros(n, dtype=bool)
    px = pts[:, 0:1]
    py = pts[:, 1:2]
    for ring in shape.rings:
        a = ring
        b = np.roll(ring, -1, axis=0)
        ab = b - a
        denom = (ab ** 2).sum(axis=1)
        denom[denom == 0] = 1.0
        ap = pts[:, None, :] - a[None, :, :]
        s = np.clip((ap * ab).sum(axis=2) / denom, 0.0, 1.0)
        res = ap - ab[None, :, :] * s[..., None]
        dist = np.minimum(dist, np.sqrt((res ** 2).sum(axis=2)).min(axis=1))

        xs, ys = a[:, 0], a[:, 1]
        xr, yr = b[:, 0], b[:, 1]
        crosses = (ys > py) != (yr > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = xs + (py - ys) * (xr - xs) / (yr - ys)
        inside ^= (np.count_nonzero(crosses & (px < xi), axis=1) % 2).astype(bool)

    clear = np.where(inside, dist, -dist)
    if len(discs_xyr):
        to_disc = np.sqrt(
            ((pts[:, None, :] - discs_xyr[None, :, :2]) ** 2).sum(axis=2)
        ) - discs_xyr[None, :, 2]
        clear = np.minimum(clear, to_disc.min(axis=1))
    return clear


def _max_clearance(shape: Polygon, discs_xyr: np.ndarray, precision: float) -> Pole:
    """Quadtree search for the point of maximum clearance.

    The clearance function is 1-Lipschitz (both boundary distance and
    distance-to-disc-surface are), so ``f(center) + h*sqrt(2)`` bounds the
    best value inside a square cell of half-size ``h``. Whole levels are
    evaluated as one numpy batch; cells whose bound cannot beat the current
    best by more than ``precision`` are pruned.
    """
    minx, miny, maxx, maxy = shape.bbox
    size = min(maxx - minx, maxy - miny)
    if size <= 0:
        raise GeometryError("degenerate polygon: zero-extent bounding box")

    nx = int(math.ceil((maxx - minx) / size))
    ny = int(math.ceil((maxy - miny) / size))
    gx = minx + size * (np.arange(nx) + 0.5)
    gy = miny + size * (np.arange(ny) + 0.5)
    centers = np.stack(
        [np.repeat(gx, ny), np.tile(gy, nx)], axis=1
    )
    half = size / 2.0

    seeds = np.array(
        [shape.outer.mean(axis=0), [(minx + maxx) / 2.0, (miny + maxy) / 2.0]]
    )
    fs = _clearance_batch(shape, discs_xyr, seeds)
    k = int(fs.argmax())
    best_f = float(fs[k])
    best_xy = seeds[k]

    while len(centers):
        if len(centers) > _BATCH:
            f = np.concatenate(
                [
                    _clearance_batch(shape, discs_xyr, centers[i : i + _BATCH])
                    for i in range(0, len(centers), _BATCH)
                ]
            )
        else:
            f = _clearance_batch(shape, discs_xyr, centers)
        k = int(f.argmax())
        if f[k] > best_f:
            best_f = float(f[k])
            best_xy = centers[k].copy()
        keep = f + half * _SQRT2 - best_f > precision
        centers = centers[keep]
        if not len(centers):
            break
        q = half / 2.0
        offsets = np.array([[-q, -q], [q, -q], [-q, q], [q, q]])
        centers = (centers[:, None, :] + offsets[None, :, :]).reshape(-1, 2)
        half = q
    return Pole(float(best_xy[0]), float(best_xy[1]), best_f)


def _clearance(shape: Polygon, discs: list[Pole], x: float, y: float) -> float:
    """Scalar clearance, for spot checks and tests."""
    xyr = np.array([[p.x, p.y, p.radius] for p in discs]).reshape(-1, 3)
    return float(_clearance_batch(shape, xyr, np.array([[x, y]]))[0])


def compute_poles(shape: Polygon, n_max: int = 16, stop_ratio: float = 0.10) -> PoleSet:
    """Compute up to ``n_max`` poles for a polygon.

    Grid tolerance is 1e-3 of the shape diameter; the poles only guide a
    proxy metric and do not need to be exact.
    """
    if not 1 <= n_max <= 16:
        raise GeometryError("n_max must be in [1, 16]")
    if shape.area <= 0:
        raise GeometryError("cannot compute poles of a zero-area polygon")
    precision = 1e-3 * shape.diameter

    discs: list[Pole] = []
    xyr = np.zeros((0, 3))
    first = _max_clearance(shape, xyr, precision)
    if first.radius <= 0:
        raise GeometryError("polygon admits no inscribed circle (degenerate interior)")
    discs.append(first)
    while len(discs) < n_max:
        xyr = np.array([[p.x, p.y, p.radius] for p in discs])
        pole = _max_clearance(shape, xyr, precision)
        if pole.radius < stop_ratio * first.radius:
            break
        discs.append(pole)
    discs.sort(key=lambda p: -p.radius)
    return PoleSet(discs)


def attach_poles(shape: Polygon, n_max: int = 16) -> Polygon:
    """Compute and cache poles on the polygon, returning it for chaining."""
    shape.poles = compute_poles(shape, n_max)
    return shape
