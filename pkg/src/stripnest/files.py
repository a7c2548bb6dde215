"""Instance and solution serialization, SVG rendering, format conversion.

Angles are degrees in files and radians internally. Instance JSON schema:

    { "name": str, "strip_height": float,
      "items": [ { "id": str, "demand": int,
                   "allowed_orientations": [deg, ...] | "continuous",
                   "allow_reflection": bool,
                   "shape": { "outer": [[x, y], ...], "holes": [...] } } ] }

Solution JSON schema:

    { "instance_name", "strip_height", "strip_length", "density", "seed",
      "time_limit_s",
      "placements": [ { "item_id", "dx", "dy", "theta_rad", "reflected" } ] }
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .geometry import GeometryError, Polygon, Transformation
from .strip import InstanceError, ItemSpec, SolutionRecord, StripInstance
from .verify import VerificationReport, verify_layout


class FileFormatError(ValueError):
    """Raised for malformed instance or solution files."""


def _check_keys(obj: dict, required: set[str], optional: set[str], where: str):
    keys = set(obj)
    missing = required - keys
    if missing:
        raise FileFormatError(f"{where}: missing fields {sorted(missing)}")
    unknown = keys - required - optional
    if unknown:
        raise FileFormatError(f"{where}: unknown fields {sorted(unknown)}")


def _parse_orientations(value, where: str):
    if value == "continuous":
        return None
    if isinstance(value, list) and value and all(
        isinstance(v, (int, float)) for v in value
    ):
        return tuple(math.radians(float(v)) % (2.0 * math.pi) for v in value)
    raise FileFormatError(
        f"{where}: allowed_orientations must be a non-empty list of degrees "
        f'or "continuous"'
    )


def instance_from_dict(doc: dict) -> StripInstance:
    _check_keys(doc, {"name", "strip_height", "items"}, set(), "instance")
    items: list[ItemSpec] = []
    seen_ids = set()
    for k, item in enumerate(doc["items"]):
        where = f"items[{k}]"
        _check_keys(
            item,
            {"id", "demand", "allowed_orientations", "allow_reflection", "shape"},
            set(),
            where,
        )
        if item["id"] in seen_ids:
            raise FileFormatError(f"{where}: duplicate item id {item['id']!r}")
        seen_ids.add(item["id"])
        _check_keys(item["shape"], {"outer"}, {"holes"}, f"{where}.shape")
        try:
            shape = Polygon(item["shape"]["outer"], item["shape"].get("holes", []))
        except GeometryError as exc:
            raise FileFormatError(f"{where}.shape ({item['id']!r}): {exc}") from exc
        items.append(
            ItemSpec(
                id=str(item["id"]),
                shape=shape,
                demand=int(item["demand"]),
                orientations=_parse_orientations(item["allowed_orientations"], where),
                allow_reflection=bool(item["allow_reflection"]),
            )
        )
    try:
        return StripInstance(str(doc["name"]), float(doc["strip_height"]), items)
    except InstanceError as exc:
        raise FileFormatError(str(exc)) from exc


def instance_to_dict(instance: StripInstance) -> dict:
    items = []
    for spec in instance.items:
        orientations = (
            "continuous"
            if spec.orientations is None
            else [round(math.degrees(th), 9) for th in spec.orientations]
        )
        shape = {"outer": spec.shape.outer.tolist()}
        if spec.shape.holes:
            shape["holes"] = [h.tolist() for h in spec.shape.holes]
        items.append(
            {
                "id": spec.id,
                "demand": spec.demand,
                "allowed_orientations": orientations,
                "allow_reflection": spec.allow_reflection,
                "shape": shape,
            }
        )
    return {"name": instance.name, "strip_height": instance.strip_height, "items": items}


def load_instance(path, inflate_strip: bool = False) -> StripInstance:
    """Load and validate an instance file; optionally inflate the strip height
    by 0.01% (for exact-fit artificial instances)."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: malformed JSON: {exc}") from exc
    if inflate_strip:
        doc = dict(doc)
        doc["strip_height"] = float(doc["strip_height"]) * 1.0001
    return instance_from_dict(doc)


def save_instance(instance: StripInstance, path):
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=1))


# -- solutions ---------------------------------------------------------------------


def solution_to_dict(record: SolutionRecord, time_limit_s: float) -> dict:
    return {
        "instance_name": record.instance_name,
        "strip_height": record.strip_height,
        "strip_length": record.strip_length,
        "density": record.density,
        "seed": record.seed,
        "time_limit_s": time_limit_s,
        "placements": [
            {
                "item_id": label,
                "dx": t.dx,
                "dy": t.dy,
                "theta_rad": t.theta,
                "reflected": t.reflected,
            }
            for label, t in record.placements
        ],
    }


def save_solution(record: SolutionRecord, time_limit_s: float, path):
    Path(path).write_text(json.dumps(solution_to_dict(record, time_limit_s), indent=1))


def load_solution(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: malformed JSON: {exc}") from exc
    _check_keys(
        doc,
        {
            "instance_name",
            "strip_height",
            "strip_length",
            "density",
            "seed",
            "time_limit_s",
            "placements",
        },
        set(),
        "solution",
    )
    return doc


def record_from_solution(instance: StripInstance, doc: dict) -> SolutionRecord:
    placements = []
    for p in doc["placements"]:
        _check_keys(
            p, {"item_id", "dx", "dy", "theta_rad", "reflected"}, set(), "placement"
        )
        placements.append(
            (
                str(p["item_id"]),
                Transformation(
                    float(p["dx"]), float(p["dy"]), float(p["theta_rad"]), bool(p["reflected"])
                ),
            )
        )
    known = {c.label for c in instance.copies}
    got = {label for label, _ in placements}
    if known != got:
        raise FileFormatError(
            f"solution item ids do not match the instance: "
            f"missing {sorted(known - got)[:5]}, unexpected {sorted(got - known)[:5]}"
        )
    return SolutionRecord(
        instance_name=doc["instance_name"],
        strip_height=float(doc["strip_height"]),
        strip_length=float(doc["strip_length"]),
        placements=tuple(placements),
        density=float(doc["density"]),
        elapsed=0.0,
        seed=int(doc["seed"]),
    )


def verify_solution(instance: StripInstance, doc: dict) -> VerificationReport:
    """Independent O(n^2) feasibility check of a solution document."""
    record = record_from_solution(instance, doc)
    return verify_layout(
        instance.strip_height, record.strip_length, record.placed_shapes(instance)
    )


# -- SVG rendering -----------------------------------------------------------------

_PALETTE = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
]


def render_svg(instance: StripInstance, record: SolutionRecord, path):
    """Static SVG snapshot: strip rectangle, one filled path per item, caption."""
    w, l = instance.strip_height, record.strip_length
    margin = 0.02 * max(w, l)
    scale = 1000.0 / max(w, l)
    width = (l + 2 * margin) * scale
    height = (w + 2 * margin) * scale + 40
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">',
        # flip y so the strip origin sits bottom-left
        f'<g transform="translate({margin * scale:.3f},{(w + margin) * scale:.3f}) '
        f'scale({scale:.6f},{-scale:.6f})">',
        f'<rect x="0" y="0" width="{l}" height="{w}" fill="none" '
        f'stroke="black" stroke-width="{2.0 / scale}"/>',
    ]
    shapes = record.placed_shapes(instance)
    for k, (label, _) in enumerate(record.placements):
        shape = shapes[label]
        d = []
        for ring in shape.rings:
            d.append("M " + " L ".join(f"{x:.6f} {y:.6f}" for x, y in ring) + " Z")
        color = _PALETTE[k % len(_PALETTE)]
        parts.append(
            f'<path d="{" ".join(d)}" fill="{color}" fill-opacity="0.75" '
            f'fill-rule="evenodd" stroke="black" stroke-width="{1.0 / scale}"/>'
        )
    parts.append("</g>")
    caption = (
        f"{record.instance_name}: density {record.density:.2f}%, "
        f"strip {record.strip_length:.3f} x {instance.strip_height:.3f}"
    )
    parts.append(
        f'<text x="{margin * scale:.1f}" y="{height - 12:.1f}" '
        f'font-family="monospace" font-size="16">{caption}</text>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts))


# -- legacy text-format conversion -------------------------------------------------

_NUM = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?")


def convert_esicup_text(
    text: str,
    name: str,
    default_orientations=(0.0, 180.0),
    allow_reflection: bool = False,
) -> dict:
    """Convert a keyword-style legacy nesting text file into the JSON schema.

    Understands the common layout: a strip/plate width declaration, then per
    piece a quantity, an optional list of allowed angles (degrees), and a
    vertex list. Angle lists default to ``default_orientations`` when absent.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    strip_height = None
    items = []
    current: dict | None = None
    mode = None
    for ln in lines:
        if not ln or ln.startswith(("//", "#")):
            continue
        upper = ln.upper()
        nums = _NUM.findall(ln)
        if "WIDTH" in upper and strip_height is None:
            if nums:
                strip_height = float(nums[0])
                continue
            mode = "width"
            continue
        if upper.startswith("PIECE"):
            current = {"quantity": 1, "angles": None, "vertices": []}
            items.append(current)
            mode = None
            continue
        if "QUANTITY" in upper:
            if current is None:
                raise FileFormatError("QUANTITY before any PIECE")
            if nums:
                current["quantity"] = int(float(nums[0]))
            else:
                mode = "quantity"
            continue
        if "ANGLE" in upper or "ROTATION" in upper:
            if current is None:
                raise FileFormatError("ANGLES before any PIECE")
            if nums:
                current["angles"] = [float(v) for v in nums]
            else:
                mode = "angles"
            continue
        if "VERTICES" in upper or "VERTEX" in upper:
            if current is None:
                raise FileFormatError("VERTICES before any PIECE")
            mode = "vertices"
            continue
        if mode == "width" and nums:
            strip_height = float(nums[0])
            mode = None
        elif mode == "quantity" and nums:
            current["quantity"] = int(float(nums[0]))
            mode = None
        elif mode == "angles" and nums:
            current["angles"] = [float(v) for v in nums]
            mode = None
        elif mode == "vertices" and len(nums) >= 2:
            current["vertices"].append([float(nums[0]), float(nums[1])])
    if strip_height is None:
        raise FileFormatError("no strip width declaration found")
    if not items:
        raise FileFormatError("no pieces found")
    out_items = []
    for k, item in enumerate(items):
        if len(item["vertices"]) < 3:
            raise FileFormatError(f"piece {k + 1} has fewer than 3 vertices")
        angles = item["angles"] if item["angles"] is not None else list(default_orientations)
        out_items.append(
            {
                "id": f"piece{k + 1}",
                "demand": item["quantity"],
                "allowed_orientations": angles,
                "allow_reflection": allow_reflection,
                "shape": {"outer": item["vertices"]},
            }
        )
    return {"name": name, "strip_height": strip_height, "items": out_items}
