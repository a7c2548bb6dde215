"""Collision severity quantification.

Converts the engine's binary collision verdict into a smooth, strictly
positive severity value: a pole-based overlap proxy with a decaying
penetration depth, scaled by a shape-based penalty.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .cde import Layout
from .geometry import GeometryError, Polygon


@dataclass(frozen=True)
class ProxyConfig:
    """r_epsilon: fraction of the pair's larger diameter used as the decay threshold."""

    r_epsilon: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.r_epsilon < 1.0:
            raise ValueError("r_epsilon must lie in (0, 1)")


DEFAULT_PROXY = ProxyConfig()


def decayed_pd(delta: float, epsilon: float) -> float:
    """Penetration depth continued hyperbolically below ``epsilon``; always > 0."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if delta >= epsilon:
        return delta
    return epsilon * epsilon / (-delta + 2.0 * epsilon)


def overlap_proxy_decay(a: Polygon, b: Polygon, cfg: ProxyConfig = DEFAULT_PROXY) -> float:
    """Sum of decayed pole-pair penetration depths, weighted by the smaller pole diameter."""
    if a.poles is None or b.poles is None or len(a.poles) == 0 or len(b.poles) == 0:
        raise GeometryError("both shapes need a non-empty pole set")
    eps = cfg.r_epsilon * max(a.diameter, b.diameter)
    return float(_kernels.proxy_alpha(a.poles.xyr, b.poles.xyr, eps))


def combined_penalty(a: Polygon, b: Polygon) -> float:
    """Geometric mean of the two per-shape penalties (sqrt of hull area each)."""
    return math.sqrt(a.penalty * b.penalty)


def quantify_collision(a: Polygon, b: Polygon, cfg: ProxyConfig = DEFAULT_PROXY) -> float:
    """Severity of a collision between two shapes: sqrt(proxy) times the pair penalty."""
    return math.sqrt(overlap_proxy_decay(a, b, cfg)) * combined_penalty(a, b)


def evaluate_item_pair(
    layout: Layout, a: int, b: int, cfg: ProxyConfig = DEFAULT_PROXY
) -> float:
    """Severity of the collision between two placed items; 0 when they are separated."""
    shape_a = layout.placed_shape(a)
    shape_b = layout.placed_shape(b)
    if a not in layout.collisions(shape_b, ignore=b):
        return 0.0
    return quantify_collision(shape_a, shape_b, cfg)
