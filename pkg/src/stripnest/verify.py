"""Independent feasibility verification.

A deliberately plain O(n^2) checker used as the acceptance gate for solver
output: all-pairs edge-crossing plus containment tests and a per-item strip
containment check. It shares no code with the collision engine -- no
spatial index, no poles, pure numpy.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Polygon


def _ring_edges(shape: Polygon) -> tuple[np.ndarray, np.ndarray]:
    starts, ends = [], []
    for ring in shape.rings:
        starts.append(ring)
        ends.append(np.roll(ring, -1, axis=0))
    return np.concatenate(starts), np.concatenate(ends)


def _edges_properly_cross(a1, a2, b1, b2) -> bool:
    """Any proper crossing between the two edge sets (vectorized orientation test)."""

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (
            q[..., 1] - p[..., 1]
        ) * (r[..., 0] - p[..., 0])

    p1 = a1[:, None, :]
    p2 = a2[:, None, :]
    q1 = b1[None, :, :]
    q2 = b2[None, :, :]
    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return bool((((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0))).any())


def _point_inside(shape: Polygon, x: float, y: float) -> bool:
    inside = False
    for ring in shape.rings:
        xs, ys = ring[:, 0], ring[:, 1]
        xj, yj = np.roll(xs, -1), np.roll(ys, -1)
        crosses = (ys > y) != (yj > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = xs + (y - ys) * (xj - xs) / (yj - ys)
        inside ^= bool(np.count_nonzero(crosses & (x < xc)) % 2)
    return inside


def _interior_point(shape: Polygon) -> tuple[float, float]:
    """A point strictly inside the polygon: an ear-triangle centroid that passes
    the even-odd test, falling back to the outer-ring centroid."""
    ring = shape.outer
    n = len(ring)
    for i in range(n):
        tri = (ring[i - 1] + ring[i] + ring[(i + 1) % n]) / 3.0
        if _point_inside(shape, float(tri[0]), float(tri[1])):
            return float(tri[0]), float(tri[1])
    c = ring.mean(axis=0)
    return float(c[0]), float(c[1])


def shapes_overlap(a: Polygon, b: Polygon) -> bool:
    """True if the interiors of the two polygons intersect."""
    a1, a2 = _ring_edges(a)
    b1, b2 = _ring_edges(b)
    if _edges_properly_cross(a1, a2, b1, b2):
        return True
    # no crossings: either disjoint or one fully contains the other
    pa = _interior_point(a)
    if _point_inside(b, *pa):
        return True
    return _point_inside(a, *_interior_point(b))


@dataclass
class VerificationReport:
    feasible: bool
    density: float
    strip_length: float
    overlap_pairs: list[tuple[str, str]] = field(default_factory=list)
    containment_violations: list[str] = field(default_factory=list)

    def summary(self) -> str:
        if self.feasible:
            return f"OK: feasible, density {self.density:.4f}"
        lines = [f"INFEASIBLE (density {self.density:.4f})"]
        for a, b in self.overlap_pairs:
            lines.append(f"  overlap: {a} <-> {b}")
        for name in self.containment_violations:
            lines.append(f"  outside strip: {name}")
        return "\n".join(lines)


def verify_layout(
    strip_height: float,
    strip_length: float,
    shapes: dict[str, Polygon],
    tol: float | None = None,
) -> VerificationReport:
    """All-pairs overlap check plus per-item strip containment."""
    if tol is None:
        tol = 1e-9 * max(strip_length, strip_height, 1.0)
    names = sorted(shapes)
    overlaps: list[tuple[str, str]] = []
    outside: list[str] = []
    for name in names:
        bbox = shapes[name].bbox
        if bbox[0] < -tol or bbox[1] < -tol or bbox[2] > strip_length + tol or bbox[3] > strip_height + tol:
            outside.append(name)
    for i, na in enumerate(names):
        for nb in names[i + 1 :]:
            if shapes_overlap(shapes[na], shapes[nb]):
                overlaps.append((na, nb))
    total_area = sum(s.area for s in shapes.values())
    density = 100.0 / (strip_height * strip_length) * total_area
    return VerificationReport(
        feasible=not overlaps and not outside,
        density=density,
        strip_length=strip_length,
        overlap_pairs=overlaps,
        containment_violations=outside,
    )
