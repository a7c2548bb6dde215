"""Continuous-space position search for a single item.

Generates diverse samples across the whole strip plus focused samples near
the item's current position, then refines the most promising, mutually
different candidates by greedy coordinate descent. Every emitted
transformation keeps the item's bounding box inside the strip.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cde import Layout
from .geometry import Transformation


class PlacementError(RuntimeError):
    """Raised when an item fits the strip at no allowed orientation."""


@dataclass(frozen=True)
class SamplerConfig:
    n_diverse: int = 50
    n_focused: int = 25
    n_refine: int = 3
    focus_radius_ratio: float = 0.10
    descent_step_init_ratio: float = 0.025
    descent_shrink: float = 0.5
    descent_step_min_ratio: float = 0.001
    uniqueness_ratio: float = 0.10

    def __post_init__(self):
        if min(self.n_diverse, self.n_focused, self.n_refine) < 1:
            raise ValueError("sample counts must be >= 1")
        for r in (
            self.focus_radius_ratio,
            self.descent_step_init_ratio,
            self.descent_shrink,
            self.descent_step_min_ratio,
            self.uniqueness_ratio,
        ):
            if not 0.0 < r < 1.0:
                raise ValueError("sampler ratios must lie in (0, 1)")


DEFAULT_SAMPLER = SamplerConfig()


@dataclass
class Sample:
    item: int
    t: Transformation
    eval: float


def translation_bounds(base, theta: float, reflected: bool, strip_length: float, strip_height: float):
    """Valid (dx, dy) ranges so the transformed bbox fits the strip, or None.

    Uses the convex hull (same bbox as the full shape) to keep this cheap.
    """
    rot = Transformation(0.0, 0.0, theta, reflected)
    hull = rot.apply(base.hull)
    x0, y0 = hull[:, 0].min(), hull[:, 1].min()
    x1, y1 = hull[:, 0].max(), hull[:, 1].max()
    # tolerance for exact-fit collapse; deliberately independent of the strip
    # length, which may be a huge fits-at-all probe value
    tol = 1e-9 * max(strip_height, base.diameter, 1.0)
    lo = np.array([-x0, -y0])
    hi = np.array([strip_length - x1, strip_height - y1])
    for k in range(2):
        if lo[k] > hi[k]:
            if lo[k] - hi[k] <= tol:
                lo[k] = hi[k] = (lo[k] + hi[k]) / 2.0
            else:
                return None
    return lo, hi


def _clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def _feasible_thetas(base, orientations, reflected, strip_length, strip_height):
    if orientations is not None:
        return [
            th
            for th in orientations
            if translation_bounds(base, th, reflected, strip_length, strip_height) is not None
        ]
    # continuous rotation: probe a coarse fan to detect the fits-nowhere case
    return [
        th
        for th in np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
        if translation_bounds(base, th, reflected, strip_length, strip_height) is not None
    ]


def _different_enough(t: Transformation, chosen: list[Transformation], min_dist: float) -> bool:
    for o in chosen:
        if t.reflected != o.reflected:
            continue
        if abs(t.theta - o.theta) > 1e-12:
            continue
        if math.hypot(t.dx - o.dx, t.dy - o.dy) <= min_dist:
            return False
    return True


def refine(
    start: Sample,
    eval_fn,
    base,
    continuous_rotation: bool,
    strip_length: float,
    strip_height: float,
    cfg: SamplerConfig = DEFAULT_SAMPLER,
) -> Sample:
    """Greedy axis-aligned descent with step halving; never worse than ``start``."""
    diam = base.diameter
    step = cfg.descent_step_init_ratio * diam
    step_min = cfg.descent_step_min_ratio * diam
    best = start
    bounds = translation_bounds(
        base, best.t.theta, best.t.reflected, strip_length, strip_height
    )
    while step >= step_min:
        improved = False
        moves = [(step, 0.0, 0.0), (-step, 0.0, 0.0), (0.0, step, 0.0), (0.0, -step, 0.0)]
        if continuous_rotation:
            dth = 2.0 * math.pi * step / diam
            moves += [(0.0, 0.0, dth), (0.0, 0.0, -dth)]
        for ddx, ddy, dth in moves:
            t = best.t
            theta = (t.theta + dth) % (2.0 * math.pi)
            b = bounds
            if dth != 0.0:
                b = translation_bounds(base, theta, t.reflected, strip_length, strip_height)
                if b is None:
                    continue
            lo, hi = b
            cand = Transformation(
                _clamp(t.dx + ddx, lo[0], hi[0]),
                _clamp(t.dy + ddy, lo[1], hi[1]),
                theta,
                t.reflected,
            )
            if cand == best.t:
                continue
            e = eval_fn(start.item, cand)
            if e < best.eval:
                best = Sample(start.item, cand, e)
                bounds = b if dth != 0.0 else bounds
                improved = True
                break
        if not improved:
            step *= cfg.descent_shrink
    return best


def search_position(
    layout: Layout,
    item: int,
    eval_fn,
    rng: np.random.Generator,
    cfg: SamplerConfig = DEFAULT_SAMPLER,
) -> Transformation:
    """Best transformation found for ``item`` (at worst its current placement)."""
    base, orientations, allow_reflection = layout.item_meta(item)
    current = layout.placement(item)
    diam = base.diameter
    L, H = layout.strip_length, layout.strip_height
    continuous = orientations is None

    reflections = (False, True) if allow_reflection else (current.reflected,)
    theta_menu = {
        refl: _feasible_thetas(base, orientations, refl, L, H) for refl in reflections
    }
    if not any(theta_menu.values()):
        raise PlacementError(f"item {item} fits the strip at no allowed orientation")

    samples: list[Sample] = []

    def draw_theta(refl):
        menu = theta_menu[refl]
        if continuous:
            # menu only proved feasibility somewhere; draw freely and reject
            for _ in range(50):
                th = rng.uniform(0.0, 2.0 * math.pi)
                if translation_bounds(base, th, refl, L, H) is not None:
                    return th
            return menu[rng.integers(len(menu))] if menu else None
        return menu[rng.integers(len(menu))] if menu else None

    # diverse: uniform over the strip
    for _ in range(cfg.n_diverse):
        refl = bool(rng.integers(2)) if allow_reflection else current.reflected
        th = draw_theta(refl)
        if th is None:
            continue
        b = translation_bounds(base, th, refl, L, H)
        if b is None:
            continue
        lo, hi = b
        t = Transformation(rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]), th, refl)
        samples.append(Sample(item, t, eval_fn(item, t)))

    # focused: inside a disc around the current position
    foc_bounds = translation_bounds(base, current.theta, current.reflected, L, H)
    for _ in range(cfg.n_focused):
        r = cfg.focus_radius_ratio * diam * math.sqrt(rng.uniform())
        phi = rng.uniform(0.0, 2.0 * math.pi)
        th, b = current.theta, foc_bounds
        if continuous:
            # rotation jitter reuses the focus ratio, in radians
            th = (current.theta + rng.uniform(-1.0, 1.0) * cfg.focus_radius_ratio) % (
                2.0 * math.pi
            )
            b = translation_bounds(base, th, current.reflected, L, H)
        if b is None:
            continue
        lo, hi = b
        t = Transformation(
            _clamp(current.dx + r * math.cos(phi), lo[0], hi[0]),
            _clamp(current.dy + r * math.sin(phi), lo[1], hi[1]),
            th,
            current.reflected,
        )
        samples.append(Sample(item, t, eval_fn(item, t)))

    # pick up to n_refine promising, mutually different samples
    samples.sort(key=lambda s: s.eval)
    chosen: list[Sample] = []
    for s in samples:
        if len(chosen) >= cfg.n_refine:
            break
        if _different_enough(s.t, [c.t for c in chosen], cfg.uniqueness_ratio * diam):
            chosen.append(s)

    best = Sample(item, current, eval_fn(item, current))
    for s in chosen:
        refined = refine(s, eval_fn, base, continuous, L, H, cfg)
        if refined.eval < best.eval:
            best = refined
    return best.t
