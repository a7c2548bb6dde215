"""Minimal collision detection engine.

Exposes the two-function interface the search is built on -- collision
queries against the current layout and item moves -- plus snapshot/restore
for backtracking. Detection is a bounding-box prefilter, a pole-pair early
accept, and finally an exact trigonometric test. Entities closer than
``SEPARATION_RATIO`` times their diameter are conservatively reported as
colliding to avoid feasibility flips from floating-point noise.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import Polygon, Transformation

# separation below this fraction of the pair's larger diameter counts as a collision
SEPARATION_RATIO = 1e-10
# pole-pair penetration must exceed this fraction of the diameter for the early accept
_POLE_MARGIN_RATIO = 1e-9
# slack for containment checks, relative to strip dimensions
_CONTAIN_TOL_RATIO = 1e-9

_layout_family = itertools.count()


class CdeError(RuntimeError):
    """Raised on invalid engine operations (containment violations, mismatched snapshots)."""


def shapes_collide(a: Polygon, b: Polygon) -> bool:
    """Exact pairwise test: bbox prefilter, pole early-accept, then edge/containment."""
    max_diam = max(a.diameter, b.diameter)
    eps = SEPARATION_RATIO * max_diam
    if (
        a.bbox[2] + eps < b.bbox[0]
        or b.bbox[2] + eps < a.bbox[0]
        or a.bbox[3] + eps < b.bbox[1]
        or b.bbox[3] + eps < a.bbox[1]
    ):
        return False
    if a.poles is not None and b.poles is not None:
        if _kernels.poles_overlap(a.poles.xyr, b.poles.xyr, _POLE_MARGIN_RATIO * max_diam):
            return True
    averts, aoffs = a.kernel_arrays()
    bverts, boffs = b.kernel_arrays()
    if _kernels.edges_cross_or_near(averts, aoffs, bverts, boffs, eps):
        return True
    # no edge interaction: one shape may still lie fully inside the other
    ax, ay = _representative_point(a)
    if _kernels.point_in_rings(ax, ay, bverts, boffs):
        return True
    bx, by = _representative_point(b)
    return _kernels.point_in_rings(bx, by, averts, aoffs)


def _representative_point(shape: Polygon) -> tuple[float, float]:
    # first pole center is guaranteed interior; fall back to an interior probe
    if shape.poles is not None:
        return float(shape.poles.xyr[0, 0]), float(shape.poles.xyr[0, 1])
    from .poles import _max_clearance  # local import to avoid a cycle

    pole = _max_clearance(shape, [], 1e-3 * shape.diameter)
    return pole.x, pole.y


@dataclass(frozen=True)
class Snapshot:
    """Opaque copy of layout state sufficient for exact restore."""

    family: int
    strip_length: float
    transforms: tuple[tuple[int, Transformation], ...]


class _Placed:
    __slots__ = ("item_id", "base", "t", "shape", "orientations", "allow_reflection")

    def __init__(self, item_id, base, t, orientations, allow_reflection):
        self.item_id = item_id
        self.base: Polygon = base
        self.t: Transformation = t
        self.shape: Polygon = base.transform(t)
        self.orientations = orientations  # tuple of radians, or None for continuous
        self.allow_reflection = allow_reflection

    def clone(self) -> "_Placed":
        c = _Placed.__new__(_Placed)
        c.item_id = self.item_id
        c.base = self.base
        c.t = self.t
        c.shape = self.shape
        c.orientations = self.orientations
        c.allow_reflection = self.allow_reflection
        return c


class Layout:
    """Placement of all items in a strip of fixed height and current length.

    Single-writer: parallel search lanes operate on independent clones.
    """

    def __init__(self, strip_height: float, strip_length: float, cell_size: float | None = None):
        if strip_height <= 0 or strip_length <= 0:
            raise CdeError("strip dimensions must be positive")
        self.strip_height = float(strip_height)
        self.strip_length = float(strip_length)
        self._cell = float(cell_size) if cell_size else max(strip_height, strip_length) / 8.0
        self._items: dict[int, _Placed] = {}
        self._grid: dict[tuple[int, int], list[int]] = {}
        self._item_cells: dict[int, list[tuple[int, int]]] = {}
        self._family = next(_layout_family)

    # -- internal grid bookkeeping -------------------------------------------------

    def _cells_for_bbox(self, bbox) -> list[tuple[int, int]]:
        c = self._cell
        x0, y0 = int(math.floor(bbox[0] / c)), int(math.floor(bbox[1] / c))
        x1, y1 = int(math.floor(bbox[2] / c)), int(math.floor(bbox[3] / c))
        return [(ix, iy) for ix in range(x0, x1 + 1) for iy in range(y0, y1 + 1)]

    def _index_add(self, item_id: int, bbox):
        cells = self._cells_for_bbox(bbox)
        self._item_cells[item_id] = cells
        for key in cells:
            self._grid.setdefault(key, []).append(item_id)

    def _index_remove(self, item_id: int):
        for key in self._item_cells.pop(item_id, ()):
            bucket = self._grid[key]
            bucket.remove(item_id)
            if not bucket:
                del self._grid[key]

    def _contain_tol(self) -> float:
        return _CONTAIN_TOL_RATIO * max(self.strip_length, self.strip_height, 1.0)

    def _check_containment(self, bbox):
        tol = self._contain_tol()
        if bbox[0] < -tol or bbox[1] < -tol:
            raise CdeError(f"shape bbox {bbox} escapes the strip origin")
        if bbox[2] > self.strip_length + tol or bbox[3] > self.strip_height + tol:
            raise CdeError(
                f"shape bbox {bbox} escapes the strip "
                f"[0, {self.strip_length}] x [0, {self.strip_height}]"
            )

    # -- public interface ----------------------------------------------------------

    @property
    def item_ids(self) -> list[int]:
        return sorted(self._items)

    def __len__(self):
        return len(self._items)

    def placement(self, item_id: int) -> Transformation:
        return self._items[item_id].t

    def placed_shape(self, item_id: int) -> Polygon:
        return self._items[item_id].shape

    def item_meta(self, item_id: int):
        p = self._items[item_id]
        return p.base, p.orientations, p.allow_reflection

    def add_item(
        self,
        item_id: int,
        base: Polygon,
        t: Transformation,
        orientations=None,
        allow_reflection: bool = False,
    ):
        if item_id in self._items:
            raise CdeError(f"item {item_id} is already placed")
        placed = _Placed(item_id, base, t, orientations, allow_reflection)
        self._check_containment(placed.shape.bbox)
        self._items[item_id] = placed
        self._index_add(item_id, placed.shape.bbox)

    def collisions(self, shape: Polygon, ignore: int | None = None) -> set[int]:
        """Placed items whose interiors intersect ``shape``, excluding ``ignore``.

        A query with an item's own placed shape (without ``ignore``) reports
        the item itself.
        """
        out: set[int] = set()
        seen: set[int] = set()
        for key in self._cells_for_bbox(shape.bbox):
            for item_id in self._grid.get(key, ()):
                if item_id == ignore or item_id in seen:
                    continue
                seen.add(item_id)
                if shapes_collide(shape, self._items[item_id].shape):
                    out.add(item_id)
        return out

    def move_item(self, item_id: int, t: Transformation):
        """Reposition a placed item; cost is local (grid cells touched), not O(n)."""
        placed = self._items.get(item_id)
        if placed is None:
            raise CdeError(f"item {item_id} is not placed")
        shape = placed.base.transform(t)
        self._check_containment(shape.bbox)
        self._index_remove(item_id)
        placed.t = t
        placed.shape = shape
        self._index_add(item_id, shape.bbox)

    def set_strip_length(self, l_new: float):
        """Shrink/grow the strip; items overhanging the new right edge shift left."""
        if l_new <= 0:
            raise CdeError("strip length must be positive")
        tol = self._contain_tol()
        for placed in self._items.values():
            if placed.shape.bbox[2] - placed.shape.bbox[0] > l_new + tol:
                raise CdeError(
                    f"item {placed.item_id} is wider than the new strip length {l_new}"
                )
        self.strip_length = float(l_new)
        for item_id in self.item_ids:
            placed = self._items[item_id]
            overhang = placed.shape.bbox[2] - l_new
            if overhang > 0:
                t = placed.t
                self.move_item(
                    item_id, Transformation(t.dx - overhang, t.dy, t.theta, t.reflected)
                )

    def snapshot(self) -> Snapshot:
        return Snapshot(
            family=self._family,
            strip_length=self.strip_length,
            transforms=tuple((i, self._items[i].t) for i in self.item_ids),
        )

    def restore(self, snap: Snapshot):
        """Return to a snapshotted state; only items that diverged are touched."""
        if snap.family != self._family:
            raise CdeError("snapshot belongs to a different layout family")
        self.strip_length = snap.strip_length
        for item_id, t in snap.transforms:
            if self._items[item_id].t != t:
                self.move_item(item_id, t)

    def clone(self) -> "Layout":
        c = Layout.__new__(Layout)
        c.strip_height = self.strip_height
        c.strip_length = self.strip_length
        c._cell = self._cell
        c._items = {i: p.clone() for i, p in self._items.items()}
        c._grid = {k: list(v) for k, v in self._grid.items()}
        c._item_cells = {k: list(v) for k, v in self._item_cells.items()}
        c._family = self._family
        return c

    # -- derived queries -----------------------------------------------------------

    def colliding_items(self) -> list[int]:
        """Items whose placed shape collides with at least one other item."""
        return [
            i
            for i in self.item_ids
            if self.collisions(self._items[i].shape, ignore=i)
        ]

    def colliding_pairs(self) -> set[tuple[int, int]]:
        pairs: set[tuple[int, int]] = set()
        for i in self.item_ids:
            for c in self.collisions(self._items[i].shape, ignore=i):
                pairs.add((i, c) if i < c else (c, i))
        return pairs
