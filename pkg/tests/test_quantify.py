"""Collision severity: decayed penetration depth, overlap proxy, penalties."""
import math

import numpy as np
import pytest

from stripnest.cde import Layout
from stripnest.geometry import GeometryError, Pole, PoleSet, Polygon, Transformation
from stripnest.poles import attach_poles
from stripnest.quantify import (
    ProxyConfig,
    combined_penalty,
    decayed_pd,
    evaluate_item_pair,
    overlap_proxy_decay,
    quantify_collision,
)

from conftest import star_polygon


def _shape_with_pole(pole, diameter=2.0, hull_area=None):
    """A thin wedge of the requested diameter with a hand-assigned pole.

    The proxy only reads poles, diameter and penalty, so the disc does not
    need to be inscribed; this isolates the formula under test.
    """
    shape = Polygon([[0, 0], [diameter, 0], [diameter / 2, 1e-3]])
    assert shape.diameter == pytest.approx(diameter)
    shape.poles = PoleSet([pole] if isinstance(pole, Pole) else list(pole))
    if hull_area is not None:
        shape.penalty = math.sqrt(hull_area)
    return shape


# -- decayed penetration depth ------------------------------------------------------


def test_decayed_pd_identity_above_threshold():
    assert decayed_pd(5.0, 1.0) == 5.0
    assert decayed_pd(1.0, 1.0) == 1.0  # exactly at the threshold


def test_decayed_pd_at_zero_is_half_epsilon():
    for eps in (1e-3, 0.7, 12.0):
        assert decayed_pd(0.0, eps) == pytest.approx(eps / 2.0)


def test_decayed_pd_hand_value():
    # delta = -0.02, eps = 0.02: eps^2 / (-delta + 2 eps) = 0.0004 / 0.06
    assert decayed_pd(-0.02, 0.02) == pytest.approx(1.0 / 150.0)


def test_decayed_pd_is_continuous_at_threshold():
    eps = 0.37
    h = 1e-9 * eps
    assert abs(decayed_pd(eps - h, eps) - decayed_pd(eps + h, eps)) < 1e-6 * eps


def test_decayed_pd_strictly_increasing_and_positive():
    eps = 0.05
    deltas = np.linspace(-100 * eps, 100 * eps, 10_001)
    values = np.array([decayed_pd(float(d), eps) for d in deltas])
    assert (values > 0).all()
    assert (np.diff(values) > 0).all()


def test_decayed_pd_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        decayed_pd(1.0, 0.0)
    with pytest.raises(ValueError):
        decayed_pd(1.0, -1.0)


# -- overlap proxy ------------------------------------------------------------------


def test_proxy_single_pole_pair_hand_value():
    # two unit discs at distance 1: delta = 1 >= eps, weight = min diameter = 2
    a = _shape_with_pole(Pole(0, 0, 1.0))
    b = _shape_with_pole(Pole(1, 0, 1.0))
    assert overlap_proxy_decay(a, b) == pytest.approx(1.0 * 2.0)


def test_proxy_decayed_branch_hand_value():
    # centers 2.02 apart, radii 1: delta = -0.02; eps = 0.01 * 2 = 0.02
    a = _shape_with_pole(Pole(0, 0, 1.0))
    b = _shape_with_pole(Pole(2.02, 0, 1.0))
    assert overlap_proxy_decay(a, b) == pytest.approx((1.0 / 150.0) * 2.0)


def test_proxy_sums_over_all_pole_pairs():
    # 2 x 2 pole pairs, all overlapping deeply (no decay): sum directly
    a = _shape_with_pole([Pole(0, 0, 1.0), Pole(0.5, 0, 0.5)])
    b = _shape_with_pole([Pole(0.2, 0, 1.0), Pole(0.3, 0, 0.5)])
    expect = 0.0
    for pa in a.poles:
        for pb in b.poles:
            delta = pa.radius + pb.radius - math.hypot(pa.x - pb.x, pa.y - pb.y)
            assert delta > 0.02  # all on the linear branch
            expect += delta * min(2 * pa.radius, 2 * pb.radius)
    assert overlap_proxy_decay(a, b) == pytest.approx(expect)


def test_proxy_is_symmetric_and_rigid_motion_invariant(shape_pool):
    rng = np.random.default_rng(9)
    for _ in range(60):
        a = shape_pool[rng.integers(len(shape_pool))].transform(
            Transformation(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 7))
        )
        b = shape_pool[rng.integers(len(shape_pool))].transform(
            Transformation(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 7))
        )
        v = overlap_proxy_decay(a, b)
        assert v > 0  # decayed depth keeps the proxy strictly positive
        assert overlap_proxy_decay(b, a) == pytest.approx(v)
        g = Transformation(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(0, 7))
        assert overlap_proxy_decay(a.transform(g), b.transform(g)) == pytest.approx(
            v, rel=1e-9
        )


def test_proxy_requires_poles():
    bare = Polygon([[0, 0], [1, 0], [1, 1], [0, 1]])
    pooled = attach_poles(Polygon([[0, 0], [1, 0], [1, 1], [0, 1]]))
    with pytest.raises(GeometryError):
        overlap_proxy_decay(bare, pooled)


def test_proxy_decreases_as_shapes_separate(shape_pool):
    a = shape_pool[0]
    # beyond one diameter every pole-pair distance grows with d, so the
    # proxy must fall monotonically
    values = [
        overlap_proxy_decay(a, a.transform(Transformation(d, 0.0)))
        for d in np.linspace(2.5, 8.0, 25)
    ]
    assert all(x > y or math.isclose(x, y) for x, y in zip(values, values[1:]))


# -- penalties and the combined measure ---------------------------------------------


def test_combined_penalty_hand_values():
    unit = _shape_with_pole(Pole(0, 0, 1), hull_area=1.0)
    sixteen = _shape_with_pole(Pole(0, 0, 1), hull_area=16.0)
    assert combined_penalty(unit, unit) == pytest.approx(1.0)
    assert combined_penalty(unit, sixteen) == pytest.approx(2.0)
    assert combined_penalty(sixteen, sixteen) == pytest.approx(4.0)


def test_quantify_collision_hand_value():
    # alpha = 4 (two unit discs at distance 0 -> delta 2, weight 2), lambda = 2
    a = _shape_with_pole(Pole(0, 0, 1.0), hull_area=1.0)
    b = _shape_with_pole(Pole(0, 0, 1.0), hull_area=16.0)
    assert quantify_collision(a, b) == pytest.approx(math.sqrt(4.0) * 2.0)


def test_quantify_scales_with_r_epsilon():
    a = _shape_with_pole(Pole(0, 0, 1.0))
    b = _shape_with_pole(Pole(2.02, 0, 1.0))
    # larger epsilon decays less aggressively -> larger proxy
    lo = overlap_proxy_decay(a, b, ProxyConfig(r_epsilon=0.01))
    hi = overlap_proxy_decay(a, b, ProxyConfig(r_epsilon=0.05))
    assert hi > lo


def test_proxy_config_validation():
    with pytest.raises(ValueError):
        ProxyConfig(r_epsilon=0.0)
    with pytest.raises(ValueError):
        ProxyConfig(r_epsilon=1.0)


def test_evaluate_item_pair_zero_when_separated(shape_pool):
    lay = Layout(10, 20)
    lay.add_item(0, shape_pool[0], Transformation(2, 5))
    lay.add_item(1, shape_pool[1], Transformation(15, 5))
    assert evaluate_item_pair(lay, 0, 1) == 0.0
    lay.move_item(1, Transformation(2.1, 5.1))
    v = evaluate_item_pair(lay, 0, 1)
    assert v > 0
    assert v == pytest.approx(
        quantify_collision(lay.placed_shape(0), lay.placed_shape(1))
    )
