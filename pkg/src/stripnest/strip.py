"""Strip packing driver.

Bottom-left-fill construction, an exploration phase that repeatedly shrinks
the strip and separates (falling back to a pool of near-feasible solutions
with item-swap disruption), and a compression phase with a linearly
decaying shrink ratio.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .budget import IterationBudget, WallClockBudget
from .cde import CdeError, Layout, Snapshot
from .geometry import Polygon, Transformation
from .poles import attach_poles
from .quantify import DEFAULT_PROXY, ProxyConfig
from .sampler import DEFAULT_SAMPLER, SamplerConfig, translation_bounds
from .separator import DEFAULT_GLS, GlsConfig, WeightMatrix, separate, solution_loss
from .verify import VerificationReport, verify_layout


class InstanceError(ValueError):
    """Raised for invalid instances (bad demands, items that fit no orientation)."""


@dataclass(frozen=True)
class ItemSpec:
    """One distinct item shape with demand and allowed transformations.

    ``orientations`` is a tuple of radians, or None for continuous rotation.
    """

    id: str
    shape: Polygon
    demand: int = 1
    orientations: tuple[float, ...] | None = (0.0,)
    allow_reflection: bool = False


@dataclass(frozen=True)
class CopyRef:
    idx: int
    label: str
    spec: ItemSpec


class StripInstance:
    def __init__(self, name: str, strip_height: float, items: list[ItemSpec]):
        if strip_height <= 0:
            raise InstanceError("strip height must be positive")
        if not items:
            raise InstanceError("instance has no items")
        self.name = name
        self.strip_height = float(strip_height)
        self.items = list(items)
        self.copies: list[CopyRef] = []
        huge = 1e18
        for spec in self.items:
            if spec.demand < 1:
                raise InstanceError(f"item {spec.id}: demand must be >= 1")
            if spec.shape.poles is None:
                attach_poles(spec.shape)
            if not self._fits_somehow(spec, huge):
                raise InstanceError(
                    f"item {spec.id} fits the strip at no allowed orientation"
                )
            for k in range(spec.demand):
                label = spec.id if spec.demand == 1 else f"{spec.id}/{k}"
                self.copies.append(CopyRef(len(self.copies), label, spec))
        self.total_item_area = sum(c.spec.shape.area for c in self.copies)

    def _fits_somehow(self, spec: ItemSpec, strip_length: float) -> bool:
        refls = (False, True) if spec.allow_reflection else (False,)
        thetas = (
            spec.orientations
            if spec.orientations is not None
            else np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
        )
        return any(
            translation_bounds(spec.shape, th, r, strip_length, self.strip_height)
            is not None
            for r in refls
            for th in thetas
        )

    def label_of(self, idx: int) -> str:
        return self.copies[idx].label

    def density(self, strip_length: float) -> float:
        return 100.0 / (self.strip_height * strip_length) * self.total_item_area


@dataclass(frozen=True)
class SolverConfig:
    r_x: float = 0.001
    r_c_start: float = 0.0005
    r_c_end: float = 0.00001
    m_x: int = 3
    n_x: int = 200
    m_c: int = 5
    n_c: int = 100
    tl_split: tuple[float, float] = (0.8, 0.2)
    gls: GlsConfig = field(default_factory=GlsConfig)
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    proxy: ProxyConfig = field(default_factory=ProxyConfig)

    def __post_init__(self):
        if not self.r_c_end < self.r_c_start < self.r_x:
            raise ValueError("need r_c_end < r_c_start < r_x")
        if abs(sum(self.tl_split) - 1.0) > 1e-12:
            raise ValueError("tl_split must sum to 1")


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class SolutionRecord:
    instance_name: str
    strip_height: float
    strip_length: float
    placements: tuple[tuple[str, Transformation], ...]
    density: float
    elapsed: float
    seed: int

    def placed_shapes(self, instance: StripInstance) -> dict[str, Polygon]:
        by_label = {c.label: c.spec for c in instance.copies}
        return {label: by_label[label].shape.transform(t) for label, t in self.placements}


def _make_record(instance: StripInstance, layout: Layout, elapsed: float, seed: int):
    return SolutionRecord(
        instance_name=instance.name,
        strip_height=instance.strip_height,
        strip_length=layout.strip_length,
        placements=tuple(
            (instance.label_of(i), layout.placement(i)) for i in layout.item_ids
        ),
        density=instance.density(layout.strip_length),
        elapsed=elapsed,
        seed=seed,
    )


def construct_initial(instance: StripInstance, rng=None) -> Layout:
    """Bottom-left-fill: items in decreasing hull-area order, each at the
    collision-free position minimizing x (ties: minimizing y), sampled on a
    grid of 0.5% of the strip height."""
    h = instance.strip_height
    copies = sorted(
        instance.copies,
        key=lambda c: (-_hull_area(c.spec.shape), c.idx),
    )
    l0 = max(sum(c.spec.shape.diameter for c in copies), h)
    diams = sorted(c.spec.shape.diameter for c in copies)
    cell = diams[len(diams) // 2]
    layout = Layout(h, l0, cell_size=cell)
    step = 0.005 * h

    # placing items only removes space, so for identical copies of a shape the
    # minimal feasible x never decreases; later copies resume where the
    # previous one landed instead of rescanning from the left edge
    warm_x: dict[int, float] = {}
    for ref in copies:
        spec = ref.spec
        refls = (False, True) if spec.allow_reflection else (False,)
        thetas = (
            spec.orientations
            if spec.orientations is not None
            else tuple(np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False))
        )
        best: tuple[float, float, float, bool] | None = None
        for refl in refls:
            for th in thetas:
                b = translation_bounds(spec.shape, th, refl, l0, h)
                if b is None:
                    continue
                lo, hi = b
                # rotate once; each candidate is then a cheap pure translation
                rotated = spec.shape.transform(Transformation(0.0, 0.0, th, refl))
                rot_bottom = rotated.bbox[1]
                x = max(lo[0], warm_x.get(id(spec), lo[0]))
                found = None
                while x <= hi[0] + 1e-12 and (best is None or x < best[0] - 1e-12):
                    y = lo[1]
                    while y <= hi[1] + 1e-12:
                        colliders = layout.collisions(rotated.transform(Transformation(x, y)))
                        if not colliders:
                            found = (x, y, th, refl)
                            break
                        # jump past the lowest colliding item instead of stepping
                        clear = min(
                            layout.placed_shape(c).bbox[3] for c in colliders
                        ) - rot_bottom
                        y = max(y + step, clear + 1e-9)
                    if found:
                        break
                    x += step
                if found is not None and (
                    best is None or (found[0], found[1]) < (best[0], best[1])
                ):
                    best = found
        if best is None:
            raise InstanceError(f"bottom-left fill failed to place item {ref.label}")
        warm_x[id(spec)] = best[0]
        layout.add_item(
            ref.idx,
            spec.shape,
            Transformation(*best),
            orientations=spec.orientations,
            allow_reflection=spec.allow_reflection,
        )
    # trim the strip to the occupied extent
    used = max(layout.placed_shape(i).bbox[2] for i in layout.item_ids)
    layout.set_strip_length(used)
    return layout


def _hull_area(shape: Polygon) -> float:
    return shape.penalty ** 2


def _legalize(layout: Layout, item: int, t: Transformation):
    """Move an item to (approximately) transformation ``t``, snapping the
    orientation to an allowed one and clamping translation into the strip."""
    base, orientations, allow_reflection = layout.item_meta(item)
    refl = t.reflected if allow_reflection else False
    L, H = layout.strip_length, layout.strip_height
    candidates: list[float]
    if orientations is None:
        candidates = [t.theta]
    else:
        candidates = sorted(
            orientations,
            key=lambda th: min(
                abs(th - t.theta), 2.0 * math.pi - abs(th - t.theta)
            ),
        )
    for th in candidates:
        b = translation_bounds(base, th, refl, L, H)
        if b is None:
            continue
        lo, hi = b
        layout.move_item(
            item,
            Transformation(
                min(max(t.dx, lo[0]), hi[0]),
                min(max(t.dy, lo[1]), hi[1]),
                th,
                refl,
            ),
        )
        return
    # nothing fits at the requested reflection/orientation: keep current placement


def _disrupt(layout: Layout, rng: np.random.Generator):
    """Swap the transformations of two distinct large items (top half by hull area)."""
    ids = sorted(
        layout.item_ids,
        key=lambda i: -_hull_area(layout.item_meta(i)[0]),
    )
    top = ids[: max(2, len(ids) // 2)]
    if len(top) < 2:
        return
    a, b = rng.choice(len(top), size=2, replace=False)
    ia, ib = top[int(a)], top[int(b)]
    ta, tb = layout.placement(ia), layout.placement(ib)
    _legalize(layout, ia, tb)
    _legalize(layout, ib, ta)


def explore(
    layout: Layout,
    instance: StripInstance,
    cfg: SolverConfig,
    rng_search: np.random.Generator,
    rng_pool: np.random.Generator,
    rng_disrupt: np.random.Generator,
    budget,
    emit=None,
    seed: int = 0,
) -> tuple[SolutionRecord, Snapshot]:
    """Exploration phase: shrink on success, pool + disrupt on failure."""
    n = len(instance.copies)
    weights = WeightMatrix(n)
    best_snap = layout.snapshot()
    best_record = _make_record(instance, layout, budget.elapsed, seed)
    _emit(emit, "explore", 0, best_record)
    pool: list[tuple[float, Snapshot]] = []
    epoch = 1
    try:
        layout.set_strip_length(layout.strip_length * (1.0 - cfg.r_x))
    except CdeError:
        return best_record, best_snap
    while not budget.expired:
        weights.reset()
        snap = separate(
            layout, weights, cfg.m_x, cfg.n_x, rng_search,
            cfg.gls, cfg.sampler, cfg.proxy, budget,
        )
        loss = solution_loss(layout, cfg.proxy)
        if loss == 0.0:
            best_snap = snap
            best_record = _make_record(instance, layout, budget.elapsed, seed)
            _emit(emit, "explore", epoch, best_record)
            pool.clear()
            try:
                layout.set_strip_length(layout.strip_length * (1.0 - cfg.r_x))
            except CdeError:
                break
        else:
            pool.append((loss, snap))
            pool.sort(key=lambda p: p[0])
            k = min(int(rng_pool.geometric(0.5)) - 1, len(pool) - 1)
            layout.restore(pool[k][1])
            _disrupt(layout, rng_disrupt)
        epoch += 1
    return best_record, best_snap


def compress(
    layout: Layout,
    instance: StripInstance,
    incumbent: Snapshot,
    cfg: SolverConfig,
    rng_search: np.random.Generator,
    budget,
    emit=None,
    seed: int = 0,
    elapsed_offset: float = 0.0,
) -> tuple[SolutionRecord, Snapshot]:
    """Compression phase: restore the incumbent, shrink by a linearly decaying
    ratio, separate, and accept only feasible outcomes."""
    n = len(instance.copies)
    weights = WeightMatrix(n)
    best_snap = incumbent
    layout.restore(best_snap)
    best_record = _make_record(instance, layout, elapsed_offset + budget.elapsed, seed)
    epoch = 1
    while not budget.expired:
        r = cfg.r_c_start + (cfg.r_c_end - cfg.r_c_start) * budget.fraction
        layout.restore(best_snap)
        try:
            layout.set_strip_length(layout.strip_length * (1.0 - r))
        except CdeError:
            break
        weights.reset()
        snap = separate(
            layout, weights, cfg.m_c, cfg.n_c, rng_search,
            cfg.gls, cfg.sampler, cfg.proxy, budget,
        )
        if solution_loss(layout, cfg.proxy) == 0.0:
            best_snap = snap
            best_record = _make_record(
                instance, layout, elapsed_offset + budget.elapsed, seed
            )
            _emit(emit, "compress", epoch, best_record)
        epoch += 1
    layout.restore(best_snap)
    return best_record, best_snap


def _emit(emit, phase: str, epoch: int, record: SolutionRecord):
    if emit is not None:
        emit(phase, epoch, record)


def solve(
    instance: StripInstance,
    cfg: SolverConfig = DEFAULT_SOLVER,
    time_limit: float = 600.0,
    seed: int = 0,
    iteration_budget: int | None = None,
    emit=None,
) -> SolutionRecord:
    """Full pipeline: construct, explore, compress, then verify independently.

    With ``iteration_budget`` set, phase limits are counted in search
    iterations instead of wall-clock seconds, making the run fully
    deterministic for a given seed.
    """
    if time_limit <= 0:
        raise ValueError("time_limit must be positive")
    ss = np.random.SeedSequence(seed)
    rng_construct, rng_search, rng_pool, rng_disrupt = (
        np.random.default_rng(c) for c in ss.spawn(4)
    )
    layout = construct_initial(instance, rng_construct)
    # phase clocks start after construction so the search always gets its
    # full share of the limit, even on instances with slow construction
    if iteration_budget is not None:
        budget_x = IterationBudget(max(1, round(cfg.tl_split[0] * iteration_budget)))
        budget_c = IterationBudget(max(1, round(cfg.tl_split[1] * iteration_budget)))
    else:
        budget_x = WallClockBudget(cfg.tl_split[0] * time_limit)
        budget_c = WallClockBudget(cfg.tl_split[1] * time_limit)
    record_x, snap_x = explore(
        layout, instance, cfg, rng_search, rng_pool, rng_disrupt, budget_x, emit, seed
    )
    elapsed_x = budget_x.elapsed
    if iteration_budget is None:
        budget_c = WallClockBudget(cfg.tl_split[1] * time_limit)  # restart the clock
    record_c, snap_c = compress(
        layout, instance, snap_x, cfg, rng_search, budget_c, emit, seed, elapsed_x
    )
    final = record_c if record_c.strip_length <= record_x.strip_length else record_x
    report = check_record(instance, final)
    if not report.feasible:
        raise RuntimeError(
            "solver produced an infeasible record (should be impossible):\n"
            + report.summary()
        )
    return final


def check_record(instance: StripInstance, record: SolutionRecord) -> VerificationReport:
    """Independent O(n^2) feasibility verification of a solution record."""
    return verify_layout(
        instance.strip_height,
        record.strip_length,
        record.placed_shapes(instance),
    )
