"""Serialization: instance/solution JSON, SVG rendering, text conversion."""
import json
import math
import xml.etree.ElementTree as ET

import pytest

from stripnest import files
from stripnest.geometry import Transformation
from stripnest.strip import ItemSpec, StripInstance, construct_initial, solve
from stripnest.strip import _make_record


def _instance_doc():
    return {
        "name": "demo",
        "strip_height": 2.0,
        "items": [
            {
                "id": "sq",
                "demand": 2,
                "allowed_orientations": [0, 90],
                "allow_reflection": False,
                "shape": {"outer": [[0, 0], [1, 0], [1, 1], [0, 1]]},
            },
            {
                "id": "tri",
                "demand": 1,
                "allowed_orientations": "continuous",
                "allow_reflection": True,
                "shape": {"outer": [[0, 0], [1, 0], [0.5, 0.8]]},
            },
        ],
    }


def test_instance_from_dict_fields():
    inst = files.instance_from_dict(_instance_doc())
    assert inst.name == "demo"
    assert inst.strip_height == 2.0
    sq, tri = inst.items
    assert sq.orientations == pytest.approx((0.0, math.pi / 2))
    assert tri.orientations is None  # continuous
    assert tri.allow_reflection
    assert [c.label for c in inst.copies] == ["sq/0", "sq/1", "tri"]


def test_instance_round_trip(tmp_path):
    inst = files.instance_from_dict(_instance_doc())
    path = tmp_path / "demo.json"
    files.save_instance(inst, path)
    again = files.load_instance(path)
    assert again.name == inst.name
    assert again.strip_height == inst.strip_height
    for a, b in zip(inst.items, again.items):
        assert a.id == b.id and a.demand == b.demand
        assert a.shape.outer.tolist() == b.shape.outer.tolist()
        if a.orientations is None:
            assert b.orientations is None
        else:
            assert b.orientations == pytest.approx(a.orientations)


def test_load_instance_inflates_strip(tmp_path):
    path = tmp_path / "demo.json"
    path.write_text(json.dumps(_instance_doc()))
    inst = files.load_instance(path, inflate_strip=True)
    assert inst.strip_height == pytest.approx(2.0 * 1.0001)


def test_instance_rejects_unknown_and_missing_fields():
    doc = _instance_doc()
    doc["extra"] = 1
    with pytest.raises(files.FileFormatError, match="unknown fields"):
        files.instance_from_dict(doc)
    doc = _instance_doc()
    del doc["items"][0]["demand"]
    with pytest.raises(files.FileFormatError, match="missing fields"):
        files.instance_from_dict(doc)


def test_instance_rejects_duplicate_ids():
    doc = _instance_doc()
    doc["items"][1]["id"] = "sq"
    with pytest.raises(files.FileFormatError, match="duplicate item id"):
        files.instance_from_dict(doc)


def test_instance_rejects_self_intersecting_shape():
    doc = _instance_doc()
    # asymmetric bowtie: self-intersecting but with nonzero signed area
    doc["items"][0]["shape"]["outer"] = [[0, 0], [4, 0], [0, 3], [2, 4]]
    with pytest.raises(files.FileFormatError, match="self-intersection"):
        files.instance_from_dict(doc)


def test_instance_rejects_bad_orientations():
    doc = _instance_doc()
    doc["items"][0]["allowed_orientations"] = []
    with pytest.raises(files.FileFormatError, match="allowed_orientations"):
        files.instance_from_dict(doc)


def test_load_instance_reports_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(files.FileFormatError, match="malformed JSON"):
        files.load_instance(path)


# -- solutions ----------------------------------------------------------------------


@pytest.fixture(scope="module")
def solved():
    inst = files.instance_from_dict(_instance_doc())
    layout = construct_initial(inst)
    record = _make_record(inst, layout, 1.0, 0)
    return inst, record


def test_solution_round_trip(tmp_path, solved):
    inst, record = solved
    path = tmp_path / "sol.json"
    files.save_solution(record, 60.0, path)
    doc = files.load_solution(path)
    assert doc["instance_name"] == "demo"
    assert doc["time_limit_s"] == 60.0
    again = files.record_from_solution(inst, doc)
    assert again.strip_length == record.strip_length
    assert dict(again.placements) == dict(record.placements)


def test_verify_solution_feasible_and_tampered(solved):
    inst, record = solved
    doc = files.solution_to_dict(record, 60.0)
    assert files.verify_solution(inst, doc).feasible
    for p in doc["placements"]:
        p["dx"], p["dy"] = 0.1, 0.1  # stack everything
    report = files.verify_solution(inst, doc)
    assert not report.feasible
    assert report.overlap_pairs


def test_verify_solution_rejects_id_mismatch(solved):
    inst, record = solved
    doc = files.solution_to_dict(record, 60.0)
    doc["placements"][0]["item_id"] = "ghost"
    with pytest.raises(files.FileFormatError, match="do not match"):
        files.verify_solution(inst, doc)


def test_load_solution_checks_schema(tmp_path):
    path = tmp_path / "sol.json"
    path.write_text(json.dumps({"instance_name": "x"}))
    with pytest.raises(files.FileFormatError, match="missing fields"):
        files.load_solution(path)


# -- SVG ----------------------------------------------------------------------------


def test_render_svg_parses_and_has_one_path_per_item(tmp_path, solved):
    inst, record = solved
    path = tmp_path / "out.svg"
    files.render_svg(inst, record, path)
    root = ET.parse(path).getroot()
    ns = "{http://www.w3.org/2000/svg}"
    assert root.tag == f"{ns}svg"
    paths = root.findall(f".//{ns}path")
    assert len(paths) == len(inst.copies)
    text = root.find(f".//{ns}text")
    assert "density" in text.text


# -- text conversion ----------------------------------------------------------------

_SAMPLE_TEXT = """
// legacy nesting instance
PLATE WIDTH: 40
PIECE 1
QUANTITY: 2
ANGLES: 0 90 180 270
VERTICES
0 0
10 0
10 8
0 8
PIECE 2
QUANTITY 1
VERTICES
0 0
6 0
3 5
"""


def test_convert_esicup_text_basic():
    doc = files.convert_esicup_text(_SAMPLE_TEXT, name="legacy")
    assert doc["strip_height"] == 40.0
    assert len(doc["items"]) == 2
    a, b = doc["items"]
    assert a["demand"] == 2
    assert a["allowed_orientations"] == [0.0, 90.0, 180.0, 270.0]
    assert b["demand"] == 1
    assert b["allowed_orientations"] == [0.0, 180.0]  # default applied
    assert len(b["shape"]["outer"]) == 3
    # the result is a loadable instance
    inst = files.instance_from_dict(doc)
    assert len(inst.copies) == 3


def test_convert_esicup_text_errors():
    with pytest.raises(files.FileFormatError, match="width"):
        files.convert_esicup_text("PIECE 1\nVERTICES\n0 0\n1 0\n0 1\n", name="x")
    with pytest.raises(files.FileFormatError, match="pieces"):
        files.convert_esicup_text("WIDTH 10\n", name="x")
