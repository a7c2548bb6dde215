"""Deterministic generator for the bundled benchmark instance files.

The original publicly distributed nesting benchmark files are not shipped
with this repository; this script rebuilds a stand-in set that matches the
published metadata of each instance (strip width, piece count, number of
distinct shapes, allowed rotations) with shape geometry in the same spirit
(rectilinear puzzle pieces, polyominoes, garment panels). See data/README.md
for the fidelity caveats.

Run from the repository root:

    python3 data/generate_instances.py
"""
from __future__ import annotations

import json
import math
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent / "src"))

from stripnest import files  # noqa: E402

# -- shape builders (all simple polygons, CCW not required) -------------------------


def rect(w, h):
    return [[0, 0], [w, 0], [w, h], [0, h]]


def right_tri(w, h):
    return [[0, 0], [w, 0], [0, h]]


def l_shape(w, h, leg_w, leg_h):
    """L: full w x leg_h bottom bar plus leg_w x h vertical leg on the left."""
    return [[0, 0], [w, 0], [w, leg_h], [leg_w, leg_h], [leg_w, h], [0, h]]


def t_shape(w, h, bar_h, stem_w):
    off = (w - stem_w) / 2
    return [
        [off, 0], [off + stem_w, 0], [off + stem_w, h - bar_h], [w, h - bar_h],
        [w, h], [0, h], [0, h - bar_h], [off, h - bar_h],
    ]


def u_shape(w, h, notch_w, notch_h):
    off = (w - notch_w) / 2
    return [
        [0, 0], [w, 0], [w, h], [off + notch_w, h], [off + notch_w, h - notch_h],
        [off, h - notch_h], [off, h], [0, h],
    ]


def z_shape(w, h, step):
    """S/Z: two stacked rectangles offset by ``step``."""
    return [
        [0, 0], [w - step, 0], [w - step, h / 2], [w, h / 2],
        [w, h], [step, h], [step, h / 2], [0, h / 2],
    ]


def cross(w, h, arm_w, arm_h):
    x0, x1 = (w - arm_w) / 2, (w + arm_w) / 2
    y0, y1 = (h - arm_h) / 2, (h + arm_h) / 2
    return [
        [x0, 0], [x1, 0], [x1, y0], [w, y0], [w, y1], [x1, y1], [x1, h],
        [x0, h], [x0, y1], [0, y1], [0, y0], [x0, y0],
    ]


def trapezoid(w_bottom, w_top, h):
    off = (w_bottom - w_top) / 2
    return [[0, 0], [w_bottom, 0], [off + w_top, h], [off, h]]


def panel(w, h, cut_l, cut_r):
    """Garment panel: a rectangle with sloped shoulder cuts at the top."""
    return [
        [0, 0], [w, 0], [w, h - cut_r], [w - cut_r, h], [cut_l, h], [0, h - cut_l]
    ]


def leg_panel(w_bottom, w_top, h, hip):
    """Trouser leg: tapers from w_bottom to w_top with a hip bulge near the top."""
    bulge = (w_bottom - w_top) / 2
    return [
        [0, 0], [w_bottom, 0], [w_bottom - bulge / 2, h - hip],
        [bulge + w_top, h], [bulge, h], [bulge / 2, h - hip],
    ]


def blob(scale, n, seed, notch=0.0):
    """Curvy panel outline: cosine-perturbed ellipse, optional concave notch."""
    pts = []
    for k in range(n):
        a = 2 * math.pi * k / n
        r = 1.0 + 0.18 * math.cos(3 * a + seed) + 0.1 * math.sin(5 * a + 2 * seed)
        if notch and abs(a - math.pi) < 0.5:
            r -= notch
        pts.append([scale * (1.3 + r * math.cos(a)) * 1.4, scale * (1.2 + 0.8 * r * math.sin(a))])
    return [[round(x, 1), round(y, 1)] for x, y in pts]


# -- instance definitions -----------------------------------------------------------

ROT_2 = [0, 180]
ROT_4 = [0, 90, 180, 270]


def fu():
    """12 distinct pieces dissecting a 38 x 30 rectangle (squares, triangles,
    rectilinear pieces, a trapezoid)."""
    pieces = [
        rect(12, 12),
        [[0, 0], [16, 0], [16, 12], [8, 12], [8, 6], [0, 6]],   # fat L
        rect(8, 6),
        right_tri(10, 12),
        [[0, 0], [10, 12], [0, 12]],                            # mirrored triangle
        rect(14, 10),
        t_shape(16, 10, 4, 8),
        rect(4, 6),
        rect(4, 6),
        rect(8, 10),
        [[0, 0], [20, 0], [24, 8], [0, 8]],                     # right trapezoid
        [[0, 0], [18, 0], [18, 8], [4, 8]],                     # left trapezoid
    ]
    # two 4 x 6 rectangles would be duplicates; nudge one into an L so all 12
    # shapes stay distinct
    pieces[8] = l_shape(4, 6, 2, 6)
    return ("fu", 38.0, ROT_4, [(p, 1) for p in pieces])


def shapes0(rotations=None):
    items = [
        (l_shape(12, 12, 4, 12), 15),
        (u_shape(12, 8, 4, 4), 7),
        (t_shape(12, 12, 4, 4), 9),
        (z_shape(12, 8, 4), 12),
    ]
    return ("shapes0", 40.0, rotations or [0], items)


def shapes1():
    name, w, _, items = shapes0()
    return ("shapes1", w, ROT_2, items)


def shapes2():
    items = [
        (l_shape(6, 6, 2, 6), 4),
        (u_shape(6, 4, 2, 2), 4),
        (t_shape(6, 6, 2, 2), 4),
        (z_shape(6, 4, 2), 4),
        (rect(5, 2), 4),
        (right_tri(4, 4), 4),
        (cross(5, 5, 1.5, 1.5), 4),
    ]
    return ("shapes2", 15.0, ROT_2, items)


def jakobs(name, width, cell):
    c = cell
    pieces = [
        rect(4 * c, 2 * c),
        rect(3 * c, 3 * c),
        rect(5 * c, 1 * c),
        rect(2 * c, 2 * c),
        rect(6 * c, 2 * c),
        l_shape(3 * c, 3 * c, 1 * c, 3 * c),
        l_shape(4 * c, 2 * c, 2 * c, 2 * c),
        l_shape(4 * c, 4 * c, 2 * c, 4 * c),
        t_shape(3 * c, 3 * c, 1 * c, 1 * c),
        t_shape(5 * c, 3 * c, 1 * c, 3 * c),
        z_shape(3 * c, 2 * c, 1 * c),
        z_shape(4 * c, 2 * c, 1.5 * c),
        cross(3 * c, 3 * c, 1 * c, 1 * c),
        u_shape(3 * c, 2 * c, 1 * c, 1 * c),
        u_shape(5 * c, 3 * c, 3 * c, 2 * c),
        right_tri(3 * c, 3 * c),
        right_tri(4 * c, 2 * c),
        trapezoid(4 * c, 2 * c, 2 * c),
        trapezoid(5 * c, 3 * c, 2 * c),
        rect(1 * c, 4 * c),
        l_shape(2 * c, 4 * c, 1 * c, 4 * c),
        rect(3 * c, 1 * c),
        z_shape(5 * c, 4 * c, 2 * c),
        t_shape(4 * c, 4 * c, 2 * c, 2 * c),
        rect(2 * c, 5 * c),
    ]
    return (name, width, ROT_4, [(p, 1) for p in pieces])


def shirts():
    items = [
        (panel(12, 9, 2, 2), 12),        # front panel, large
        (panel(12, 9, 1, 1), 12),        # back panel, large
        (panel(9, 7, 2, 1), 12),         # front panel, small
        (panel(9, 7, 1, 1), 12),         # back panel, small
        (trapezoid(7, 5, 4), 16),        # sleeve, large
        (trapezoid(5, 3, 3), 16),        # sleeve, small
        (trapezoid(4, 2, 2), 10),        # collar
        (rect(5, 2), 9),                 # cuff
    ]
    return ("shirts", 40.0, ROT_2, items)


def trousers():
    items = [
        (leg_panel(24, 16, 60, 12), 6),  # front leg, large
        (leg_panel(22, 15, 58, 12), 6),  # back leg, large
        (leg_panel(20, 13, 50, 10), 5),  # front leg, small
        (leg_panel(18, 12, 48, 10), 5),  # back leg, small
        (rect(30, 4), 4),                # waistband, long
        (rect(22, 4), 4),                # waistband, short
        (trapezoid(10, 7, 9), 4),        # pocket, large
        (trapezoid(8, 6, 7), 4),         # pocket, small
        (panel(12, 8, 2, 2), 4),         # fly panel
        (rect(14, 3), 4),                # belt strip
        (trapezoid(6, 4, 5), 3),         # pocket facing
        (rect(4, 10), 3),                # side strip
        (right_tri(6, 6), 3),            # gusset
        (panel(8, 6, 1, 1), 3),          # yoke
        (rect(9, 2), 2),                 # loop strip
        (trapezoid(12, 9, 5), 2),        # hem facing
        (l_shape(8, 8, 3, 8), 2),        # corner panel
    ]
    return ("trousers", 79.0, ROT_2, items)


def albano():
    items = [
        (panel(2000, 1300, 300, 300), 4),        # back body panel
        (panel(1900, 1250, 200, 350), 4),        # front body panel
        (leg_panel(900, 500, 1900, 400), 4),     # sleeve, long
        (leg_panel(800, 450, 1700, 350), 4),     # sleeve, short
        (trapezoid(900, 600, 500), 2),           # collar
        (trapezoid(700, 500, 400), 2),           # cuff facing
        (rect(1500, 300), 2),                    # hem band
        (panel(1100, 700, 150, 150), 2),         # pocket panel
    ]
    return ("albano", 4900.0, ROT_2, items)


def dagli():
    items = [
        (panel(16, 12, 3, 3), 4),
        (panel(15, 11, 2, 3), 4),
        (leg_panel(8, 5, 18, 4), 4),
        (leg_panel(7, 4, 16, 3), 4),
        (trapezoid(9, 6, 5), 3),
        (trapezoid(7, 5, 4), 3),
        (rect(12, 3), 2),
        (panel(9, 6, 1, 2), 2),
        (right_tri(6, 5), 2),
        (cross(7, 7, 2.5, 2.5), 2),
    ]
    return ("dagli", 60.0, ROT_2, items)


def mao():
    items = [
        (panel(900, 600, 120, 120), 3),
        (panel(850, 550, 100, 150), 3),
        (leg_panel(400, 250, 850, 180), 3),
        (trapezoid(500, 320, 260), 3),
        (rect(700, 160), 2),
        (l_shape(500, 500, 180, 500), 2),
        (right_tri(350, 300), 2),
        (u_shape(420, 300, 150, 140), 1),
        (cross(380, 380, 130, 130), 1),
    ]
    return ("mao", 2550.0, ROT_4, items)


def marques():
    items = [
        (panel(36, 26, 5, 5), 4),
        (panel(34, 24, 4, 6), 4),
        (leg_panel(16, 10, 36, 7), 4),
        (trapezoid(20, 13, 11), 4),
        (rect(28, 6), 2),
        (l_shape(20, 20, 7, 20), 2),
        (right_tri(14, 12), 2),
        (u_shape(17, 12, 6, 5), 2),
    ]
    return ("marques", 104.0, ROT_4, items)


def swim():
    items = [
        (blob(900, 18, 0.0), 6),
        (blob(850, 18, 1.1), 6),
        (blob(780, 16, 2.3, notch=0.25), 6),
        (blob(700, 16, 3.1), 6),
        (blob(640, 14, 4.2, notch=0.3), 5),
        (blob(560, 14, 5.0), 5),
        (blob(470, 12, 0.7), 4),
        (blob(400, 12, 1.9, notch=0.2), 4),
        (blob(330, 12, 2.8), 3),
        (blob(260, 10, 3.9), 3),
    ]
    return ("swim", 5752.0, ROT_2, items)


ALL = [
    fu,
    shapes0,
    shapes1,
    shapes2,
    lambda: jakobs("jakobs1", 40.0, 2.0),
    lambda: jakobs("jakobs2", 70.0, 3.0),
    shirts,
    trousers,
    albano,
    dagli,
    mao,
    marques,
    swim,
]


def build(defn):
    name, width, rotations, items = defn
    doc = {
        "name": name,
        "strip_height": width,
        "items": [
            {
                "id": f"p{k + 1}",
                "demand": demand,
                "allowed_orientations": list(rotations),
                "allow_reflection": False,
                "shape": {"outer": outline},
            }
            for k, (outline, demand) in enumerate(items)
        ],
    }
    instance = files.instance_from_dict(doc)  # validates geometry
    out = HERE / f"{name}.json"
    files.save_instance(instance, out)
    n = len(instance.copies)
    print(
        f"{name:10s} width={width:<8g} shapes={len(items):2d} items={n:3d} "
        f"area={instance.total_item_area:.1f}"
    )


if __name__ == "__main__":
    for defn in ALL:
        build(defn())
