"""Guided local search separation.

Repositions colliding items one by one, guided by dynamic item-pair weights
that escalate on persistent collisions and decay once a pair separates. The
strike-based ``separate`` loop backtracks to the incumbent whenever an
attempt stalls.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .budget import UNLIMITED
from .cde import Layout, Snapshot
from .geometry import Transformation
from .quantify import DEFAULT_PROXY, ProxyConfig, quantify_collision
from .sampler import DEFAULT_SAMPLER, SamplerConfig, search_position


@dataclass(frozen=True)
class GlsConfig:
    m_upper: float = 2.0
    m_lower: float = 1.2
    m_decay: float = 0.95
    n_workers: int = 3

    def __post_init__(self):
        if not self.m_decay < 1.0 < self.m_lower < self.m_upper:
            raise ValueError("need m_decay < 1 < m_lower < m_upper")
        if self.n_workers < 1:
            raise ValueError("n_workers must be >= 1")


DEFAULT_GLS = GlsConfig()


class WeightMatrix:
    """Symmetric per-item-pair weights, floored at 1."""

    def __init__(self, n: int):
        self.n = n
        self.w = np.ones((n, n))

    def get(self, a: int, b: int) -> float:
        return float(self.w[a, b])

    def set(self, a: int, b: int, value: float):
        v = max(1.0, value)
        self.w[a, b] = v
        self.w[b, a] = v

    def reset(self):
        self.w.fill(1.0)


def evaluate_sample(
    layout: Layout,
    weights: WeightMatrix,
    item: int,
    t: Transformation,
    proxy_cfg: ProxyConfig = DEFAULT_PROXY,
) -> float:
    """Weighted severity of the collisions ``item`` would incur at ``t``; 0 iff free."""
    base, _, _ = layout.item_meta(item)
    shape = base.transform(t)
    e = 0.0
    for c in layout.collisions(shape, ignore=item):
        e += weights.get(item, c) * quantify_collision(
            shape, layout.placed_shape(c), proxy_cfg
        )
    return e


def solution_loss(layout: Layout, proxy_cfg: ProxyConfig = DEFAULT_PROXY) -> float:
    """Unweighted sum of pair severities over all colliding pairs; 0 iff feasible."""
    return sum(
        quantify_collision(
            layout.placed_shape(a), layout.placed_shape(b), proxy_cfg
        )
        for a, b in layout.colliding_pairs()
    )


def update_weights(
    layout: Layout,
    weights: WeightMatrix,
    cfg: GlsConfig = DEFAULT_GLS,
    proxy_cfg: ProxyConfig = DEFAULT_PROXY,
):
    """One GLS weight pass: escalate colliding pairs, decay the rest."""
    pair_evals = {
        (a, b): quantify_collision(
            layout.placed_shape(a), layout.placed_shape(b), proxy_cfg
        )
        for a, b in layout.colliding_pairs()
    }
    old = {pair: weights.get(*pair) for pair in pair_evals}
    np.maximum(weights.w * cfg.m_decay, 1.0, out=weights.w)
    if not pair_evals:
        return
    e_max = max(pair_evals.values())
    if e_max <= 0.0:
        return  # defensive: quantify is strictly positive for collisions
    for (a, b), e in pair_evals.items():
        m = cfg.m_lower + (cfg.m_upper - cfg.m_lower) * (e / e_max)
        weights.set(a, b, old[(a, b)] * m)


def move_items(
    layout: Layout,
    weights: WeightMatrix,
    rng: np.random.Generator,
    sampler_cfg: SamplerConfig = DEFAULT_SAMPLER,
    proxy_cfg: ProxyConfig = DEFAULT_PROXY,
):
    """Reposition every currently colliding item once, in a random order."""
    colliding = layout.colliding_items()
    if not colliding:
        return

    def eval_fn(item, t):
        return evaluate_sample(layout, weights, item, t, proxy_cfg)

    for idx in rng.permutation(len(colliding)):
        item = colliding[int(idx)]
        t = search_position(layout, item, eval_fn, rng, sampler_cfg)
        layout.move_item(item, t)


def move_items_multi(
    layout: Layout,
    weights: WeightMatrix,
    rng: np.random.Generator,
    cfg: GlsConfig = DEFAULT_GLS,
    sampler_cfg: SamplerConfig = DEFAULT_SAMPLER,
    proxy_cfg: ProxyConfig = DEFAULT_PROXY,
) -> float:
    """Run ``move_items`` from the same state with n_workers independent orders.

    Keeps the lowest-loss outcome; ties go to the lowest worker index, so the
    result is identical regardless of physical parallelism. Returns the loss
    of the kept state.
    """
    streams = rng.spawn(cfg.n_workers)
    best_e = np.inf
    best_snap: Snapshot | None = None
    for worker_rng in streams:
        lane = layout.clone()
        move_items(lane, weights, worker_rng, sampler_cfg, proxy_cfg)
        e = solution_loss(lane, proxy_cfg)
        if e < best_e:
            best_e = e
            best_snap = lane.snapshot()
    assert best_snap is not None
    layout.restore(best_snap)
    return float(best_e)


def separate(
    layout: Layout,
    weights: WeightMatrix,
    m_max: int,
    n_max: int,
    rng: np.random.Generator,
    cfg: GlsConfig = DEFAULT_GLS,
    sampler_cfg: SamplerConfig = DEFAULT_SAMPLER,
    proxy_cfg: ProxyConfig = DEFAULT_PROXY,
    budget=UNLIMITED,
) -> Snapshot:
    """Strike-based separation loop; returns (and restores) the incumbent snapshot.

    An attempt ends after n_max consecutive non-improving iterations; an
    attempt that never improved the incumbent adds a strike, m_max strikes
    end the search. The result is feasible iff its loss is 0.
    """
    if m_max < 1 or n_max < 1:
        raise ValueError("m_max and n_max must be >= 1")
    s_star = layout.snapshot()
    e_star = solution_loss(layout, proxy_cfg)
    m = 0
    while m < m_max and e_star > 0 and not budget.expired:
        layout.restore(s_star)
        s_init = s_star
        n = 0
        while n < n_max and e_star > 0 and not budget.expired:
            e = move_items_multi(layout, weights, rng, cfg, sampler_cfg, proxy_cfg)
            update_weights(layout, weights, cfg, proxy_cfg)
            n += 1
            budget.tick()
            if e < e_star:
                s_star = layout.snapshot()
                e_star = e
                n = 0
        m += 1
        if s_star != s_init:
            m = 0
    layout.restore(s_star)
    return s_star
