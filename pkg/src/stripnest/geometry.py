"""Exact 2D primitives: polygons, rigid transformations, hulls and diameters.

Everything here is immutable after construction and safe to share between
threads. Vertex data is stored as float64 numpy arrays of shape (n, 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class GeometryError(ValueError):
    """Raised for degenerate or invalid geometric input."""


def _as_ring(points) -> np.ndarray:
    ring = np.asarray(points, dtype=np.float64)
    if ring.ndim != 2 or ring.shape[1] != 2:
        raise GeometryError(f"expected an (n, 2) vertex array, got shape {ring.shape}")
    if not np.isfinite(ring).all():
        raise GeometryError("vertex coordinates must be finite")
    return ring


def dedup_ring(ring: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Drop consecutive (near-)duplicate vertices, including a repeated closing vertex."""
    ring = _as_ring(ring)
    keep = [0]
    for k in range(1, len(ring)):
        if np.hypot(*(ring[k] - ring[keep[-1]])) > tol:
            keep.append(k)
    out = ring[keep]
    if len(out) > 1 and np.hypot(*(out[0] - out[-1])) <= tol:
        out = out[:-1]
    return out


def shoelace_area(ring) -> float:
    """Signed area of a closed ring (positive for counterclockwise winding)."""
    ring = _as_ring(ring)
    x, y = ring[:, 0], ring[:, 1]
    xr, yr = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.dot(x, yr) - np.dot(xr, y))


def convex_hull(points) -> np.ndarray:
    """Convex hull (Andrew's monotone chain), returned counterclockwise.

    Raises GeometryError for fewer than 3 distinct points or a fully
    collinear point set.
    """
    pts = _as_ring(points)
    pts = np.unique(pts, axis=0)
    if len(pts) < 3:
        raise GeometryError("convex hull needs at least 3 distinct points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def half(points_iter):
        chain: list[np.ndarray] = []
        for p in points_iter:
            while len(chain) >= 2:
                o, a = chain[-2], chain[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        raise GeometryError("points are collinear; hull is degenerate")
    return hull


def hull_diameter(hull) -> float:
    """Largest pairwise distance between hull vertices (O(h^2) pair scan)."""
    hull = _as_ring(hull)
    diff = hull[:, None, :] - hull[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=2)).max())


def _segments_properly_intersect(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def ring_self_intersects(ring: np.ndarray) -> bool:
    """True if any two non-adjacent edges of the ring properly cross."""
    n = len(ring)
    for i in range(n):
        a1, a2 = ring[i], ring[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_properly_intersect(a1, a2, ring[j], ring[(j + 1) % n]):
                return True
    return False


@dataclass(frozen=True)
class Transformation:
    """Rigid transform: optional reflection (x -> -x), then rotation, then translation."""

    dx: float = 0.0
    dy: float = 0.0
    theta: float = 0.0
    reflected: bool = False

    def __post_init__(self):
        for v in (self.dx, self.dy, self.theta):
            if not math.isfinite(v):
                raise GeometryError("transformation parameters must be finite")
        object.__setattr__(self, "theta", self.theta % (2.0 * math.pi))

    def matrix(self) -> np.ndarray:
        """2x2 linear part (reflection followed by rotation)."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        rot = np.array([[c, -s], [s, c]])
        if self.reflected:
            rot = rot @ np.array([[-1.0, 0.0], [0.0, 1.0]])
        return rot

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return pts @ self.matrix().T + np.array([self.dx, self.dy])

    def inverse(self) -> "Transformation":
        m_inv = np.linalg.inv(self.matrix())
        d = -m_inv @ np.array([self.dx, self.dy])
        if self.reflected:
            # M = R(theta) F  =>  M^-1 = F R(-theta) = R(theta) F
            theta_inv = self.theta
        else:
            theta_inv = -self.theta
        return Transformation(float(d[0]), float(d[1]), theta_inv, self.reflected)


@dataclass(frozen=True)
class Pole:
    """A disc fully inscribed in a polygon's interior."""

    x: float
    y: float
    radius: float

    @property
    def center(self) -> np.ndarray:
        return np.array([self.x, self.y])


def penetration_depth(a: Pole, b: Pole) -> float:
    """Sum of radii minus center distance; negative when the discs are separated."""
    return a.radius + b.radius - math.hypot(a.x - b.x, a.y - b.y)


class PoleSet:
    """Poles of a polygon, ordered by descending radius (1-16 discs).

    Stored as a flat (k, 3) array [x, y, r] so pole-pair math vectorizes;
    Pole objects are materialized on demand.
    """

    __slots__ = ("xyr", "_poles")

    def __init__(self, poles: list[Pole]):
        self._check_count(len(poles))
        self.xyr = np.array([[p.x, p.y, p.radius] for p in poles])
        self._poles: list[Pole] | None = list(poles)

    @staticmethod
    def _check_count(k: int):
        if k < 1:
            raise GeometryError("a PoleSet needs at least one pole")
        if k > 16:
            raise GeometryError("a PoleSet holds at most 16 poles")

    @classmethod
    def from_xyr(cls, xyr: np.ndarray) -> "PoleSet":
        cls._check_count(len(xyr))
        ps = cls.__new__(cls)
        ps.xyr = xyr
        ps._poles = None
        return ps

    @property
    def poles(self) -> list[Pole]:
        if self._poles is None:
            self._poles = [Pole(float(x), float(y), float(r)) for x, y, r in self.xyr]
        return self._poles

    def __len__(self):
        return len(self.xyr)

    def __iter__(self):
        return iter(self.poles)

    def __getitem__(self, k) -> Pole:
        return self.poles[k]

    def transformed(self, t: Transformation) -> "PoleSet":
        xyr = self.xyr.copy()
        xyr[:, :2] = self.xyr[:, :2] @ t.matrix().T + np.array([t.dx, t.dy])
        return PoleSet.from_xyr(xyr)


class Polygon:
    """A simple polygon with optional holes and cached derived quantities.

    The outer ring is counterclockwise, holes are clockwise. `area`, `hull`,
    `diameter` and `penalty` (sqrt of the hull area) are computed once at
    construction. Poles are attached separately (see stripnest.poles) since
    they require an iterative grid search.
    """

    __slots__ = (
        "outer",
        "holes",
        "area",
        "hull",
        "diameter",
        "penalty",
        "poles",
        "bbox",
        "_all_rings",
        "_kverts",
        "_koffs",
    )

    def __init__(self, outer, holes=(), validate: bool = True):
        outer = dedup_ring(outer)
        holes = [dedup_ring(h) for h in holes]
        if validate:
            if len(outer) < 3:
                raise GeometryError("outer ring needs at least 3 vertices")
            if abs(shoelace_area(outer)) <= 0.0:
                raise GeometryError("polygon has zero area")
            if ring_self_intersects(outer):
                raise GeometryError("outer ring has a self-intersection")
            for h in holes:
                if len(h) < 3:
                    raise GeometryError("hole needs at least 3 vertices")
                if ring_self_intersects(h):
                    raise GeometryError("hole ring has a self-intersection")
        if shoelace_area(outer) < 0:
            outer = outer[::-1].copy()
        holes = [h[::-1].copy() if shoelace_area(h) > 0 else h for h in holes]

        self.outer = outer
        self.holes = holes
        self.area = shoelace_area(outer) + sum(shoelace_area(h) for h in holes)
        self.hull = convex_hull(outer)
        self.diameter = hull_diameter(self.hull)
        self.penalty = math.sqrt(shoelace_area(self.hull))
        self.poles: PoleSet | None = None
        self._all_rings = [outer] + holes
        allv = np.concatenate(self._all_rings)
        # plain floats: bbox comparisons dominate the collision prefilter
        self.bbox = (
            float(allv[:, 0].min()),
            float(allv[:, 1].min()),
            float(allv[:, 0].max()),
            float(allv[:, 1].max()),
        )

    @property
    def rings(self) -> list[np.ndarray]:
        return self._all_rings

    def kernel_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Concatenated ring vertices plus ring offsets, for the numba kernels."""
        try:
            return self._kverts, self._koffs
        except AttributeError:
            verts = np.ascontiguousarray(np.concatenate(self._all_rings))
            offs = np.zeros(len(self._all_rings) + 1, dtype=np.int64)
            np.cumsum([len(r) for r in self._all_rings], out=offs[1:])
            self._kverts, self._koffs = verts, offs
            return verts, offs

    def transform(self, t: Transformation) -> "Polygon":
        """Rigidly transformed copy; area, diameter and penalty are carried over."""
        if t.theta == 0.0 and not t.reflected:
            return self._translated(t.dx, t.dy)
        outer = t.apply(self.outer)
        holes = [t.apply(h) for h in self.holes]
        if t.reflected:
            # reflection reverses winding; restore the convention
            outer = outer[::-1].copy()
            holes = [h[::-1].copy() for h in holes]
        shape = Polygon.__new__(Polygon)
        shape.outer = outer
        shape.holes = holes
        shape.area = self.area
        shape.hull = t.apply(self.hull)[::-1].copy() if t.reflected else t.apply(self.hull)
        shape.diameter = self.diameter
        shape.penalty = self.penalty
        shape.poles = self.poles.transformed(t) if self.poles is not None else None
        shape._all_rings = [outer] + holes
        allv = np.concatenate(shape._all_rings)
        shape.bbox = (
            float(allv[:, 0].min()),
            float(allv[:, 1].min()),
            float(allv[:, 0].max()),
            float(allv[:, 1].max()),
        )
        return shape

    def _translated(self, dx: float, dy: float) -> "Polygon":
        """Pure-translation fast path: array adds only, no matrix products."""
        d = np.array([dx, dy])
        shape = Polygon.__new__(Polygon)
        shape.outer = self.outer + d
        shape.holes = [h + d for h in self.holes]
        shape.area = self.area
        shape.hull = self.hull + d
        shape.diameter = self.diameter
        shape.penalty = self.penalty
        if self.poles is not None:
            xyr = self.poles.xyr.copy()
            xyr[:, :2] += d
            shape.poles = PoleSet.from_xyr(xyr)
        else:
            shape.poles = None
        shape._all_rings = [shape.outer] + shape.holes
        b = self.bbox
        shape.bbox = (b[0] + dx, b[1] + dy, b[2] + dx, b[3] + dy)
        return shape

    def contains_point(self, x: float, y: float) -> bool:
        """Even-odd test over all rings (a point inside a hole is outside)."""
        inside = False
        for ring in self._all_rings:
            xs, ys = ring[:, 0], ring[:, 1]
            xr, yr = np.roll(xs, -1), np.roll(ys, -1)
            crosses = (ys > y) != (yr > y)
            if crosses.any():
                xi = xs[crosses] + (y - ys[crosses]) * (xr[crosses] - xs[crosses]) / (
                    yr[crosses] - ys[crosses]
                )
                inside ^= bool(np.count_nonzero(x < xi) % 2)
        return inside

    def boundary_distance(self, x: float, y: float) -> float:
        """Signed distance to the nearest ring edge (positive inside)."""
        best = math.inf
        p = np.array([x, y])
        for ring in self._all_rings:
            a = ring
            b = np.roll(ring, -1, axis=0)
            ab = b - a
            denom = (ab ** 2).sum(axis=1)
            denom[denom == 0] = 1.0
            s = np.clip(((p - a) * ab).sum(axis=1) / denom, 0.0, 1.0)
            proj = a + ab * s[:, None]
            d = np.sqrt(((proj - p) ** 2).sum(axis=1)).min()
            best = min(best, float(d))
        return best if self.contains_point(x, y) else -best
