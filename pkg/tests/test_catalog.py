from __future__ import annotations

import copy
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmaf.catalog import (
    CONTROL_ID_RE,
    Catalog,
    Control,
    MaturityLevel,
    Pillar,
    Unit,
    builtin_catalog,
    builtin_catalog_text,
    catalog_from_dict,
    catalog_to_dict,
    normalize_unit_id,
    parse_catalog,
    serialize_catalog,
    unit_sort_key,
    validate_catalog,
)
from cmaf.errors import DocumentSyntaxError, InvariantError, SchemaError

CANONICAL_REQUIREMENTS = [f"A{i}" for i in range(1, 7)] + [f"B{i}" for i in range(7, 17)] + [
    f"C{i}" for i in range(17, 21)
]


def canonical_doc() -> dict:
    return json.loads(builtin_catalog_text())


def find_unit(doc: dict, unit_id: str) -> dict:
    for p in doc["pillars"]:
        for r in p["requirements"]:
            if r["id"] == unit_id:
                return r
            for s in r.get("sub_requirements", []):
                if s["id"] == unit_id:
                    return s
    raise KeyError(unit_id)


def test_maturity_scale_names():
    assert [(m.ordinal, m.short_name, m.long_name) for m in MaturityLevel] == [
        (0, "Incomplete", "Not existing"),
        (1, "Initial", "Reactive"),
        (2, "Basic", "Managed"),
        (3, "Advanced", "Defined"),
        (4, "Effective", "Quantitatively Managed"),
        (5, "Efficient", "Optimized"),
    ]
    assert MaturityLevel(3).label == "Advanced - Defined"


def test_builtin_structure(catalog):
    assert [p.id for p in catalog.pillars] == ["A", "B", "C"]
    assert [p.title for p in catalog.pillars] == ["IDENTIFICATION", "PROTECTION", "DEFENSE"]
    assert [r.id for r in catalog.requirements()] == CANONICAL_REQUIREMENTS
    assert [c.id for c in catalog.unit("B8").children] == ["B8.1", "B8.2", "B8.3", "B8.4", "B8.5"]
    subs = {r.id: len(r.children) for r in catalog.requirements() if r.children}
    assert subs == {"B7": 2, "B8": 5, "B10": 3, "B11": 2, "B13": 3, "B14": 2}


def test_builtin_is_clean_and_stable(catalog):
    report = validate_catalog(catalog)
    assert report.findings == ()
    assert builtin_catalog() is catalog
    assert parse_catalog(builtin_catalog_text()) == catalog


def test_builtin_control_ids_and_counts(catalog):
    for unit in catalog.leaves():
        for lvl in range(1, 6):
            assert 2 <= len(unit.controls_at(lvl)) <= 4, (unit.id, lvl)
        for c in unit.controls:
            m = CONTROL_ID_RE.match(c.id)
            assert m and m["unit"] == unit.id and int(m["level"]) == c.level


def test_round_trip_is_byte_identical():
    text = builtin_catalog_text()
    assert serialize_catalog(parse_catalog(text)) == text


def test_level_zero_control_rejected():
    doc = canonical_doc()
    find_unit(doc, "A1")["controls"][0]["level"] = 0
    with pytest.raises(InvariantError, match="control level must be 1..5"):
        parse_catalog(json.dumps(doc))


def test_controls_and_children_rejected():
    doc = canonical_doc()
    find_unit(doc, "B7")["controls"] = copy.deepcopy(find_unit(doc, "A1")["controls"][:1])
    find_unit(doc, "B7")["controls"][0]["id"] = "B7-L1-01"
    with pytest.raises(InvariantError, match="unit has controls and children"):
        parse_catalog(json.dumps(doc))


def test_dangling_child_id_rejected():
    doc = canonical_doc()
    child = find_unit(doc, "B7.2")
    child["id"] = "B9.2"
    for c in child["controls"]:
        c["id"] = c["id"].replace("B7.2", "B9.2")
    with pytest.raises(InvariantError, match="dangling child id"):
        parse_catalog(json.dumps(doc))


def test_duplicate_control_reports_both_paths():
    doc = canonical_doc()
    a1 = find_unit(doc, "A1")
    a1["controls"][3]["id"] = "A1-L2-01"
    report = validate_catalog(catalog_from_dict(doc))
    assert len(report.errors) == 1 and report.warnings == []
    err = report.errors[0]
    assert "A1-L2-01" in err.message
    assert err.path == "A/A1/controls[3]" and "also at A/A1/controls[2]" in err.message


def test_missing_level_is_a_warning():
    doc = canonical_doc()
    c17 = find_unit(doc, "C17")
    c17["controls"] = [c for c in c17["controls"] if c["level"] != 4]
    catalog = parse_catalog(json.dumps(doc))  # warnings do not fail parsing
    report = validate_catalog(catalog)
    assert report.errors == []
    assert len(report.warnings) == 1
    assert report.warnings[0].path == "C/C17" and "level-4" in report.warnings[0].message


def test_vacuous_marker_silences_warning():
    doc = canonical_doc()
    c17 = find_unit(doc, "C17")
    c17["controls"] = [c for c in c17["controls"] if c["level"] != 4]
    c17["vacuous_levels"] = [4]
    report = validate_catalog(parse_catalog(json.dumps(doc)))
    assert report.findings == ()


def test_vacuous_level_with_controls_is_an_error():
    doc = canonical_doc()
    find_unit(doc, "C17")["vacuous_levels"] = [4]
    with pytest.raises(InvariantError, match="marked vacuous but has controls"):
        parse_catalog(json.dumps(doc))


def test_syntax_error_reports_position():
    with pytest.raises(DocumentSyntaxError) as info:
        parse_catalog('{\n  "catalog_id": "x",\n  "version": \n}')
    assert info.value.line == 4 and info.value.column == 1


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.pop("version"), "$.version"),
        (lambda d: d["pillars"][0].__setitem__("title", 7), "$.pillars[0].title"),
        (lambda d: d["pillars"][0]["requirements"][0]["controls"][0].__setitem__("level", "1"),
         "$.pillars[0].requirements[0][A1].controls[0].level"),
        (lambda d: d.__setitem__("extra", 1), "$.extra"),
    ],
)
def test_schema_errors_name_the_field(mutate, path):
    doc = canonical_doc()
    mutate(doc)
    with pytest.raises(SchemaError) as info:
        parse_catalog(json.dumps(doc))
    assert info.value.path == path


def test_wrong_pillar_membership():
    doc = canonical_doc()
    moved = doc["pillars"][2]["requirements"].pop()
    doc["pillars"][0]["requirements"].append(moved)
    with pytest.raises(InvariantError, match="does not belong to pillar A"):
        parse_catalog(json.dumps(doc))


@pytest.mark.parametrize(
    "raw, expected",
    [("C.17", "C17"), ("B.10", "B10"), ("B.10.1.", "B10.1"), ("B8.2.", "B8.2"), ("B8", "B8"), ("A1", "A1")],
)
def test_id_normalization(raw, expected):
    assert normalize_unit_id(raw) == expected


def test_dotted_ids_in_documents_are_normalized():
    doc = canonical_doc()
    c17 = find_unit(doc, "C17")
    c17["id"] = "C.17"
    c17["controls"][0]["id"] = "C.17-L1-01"
    catalog = parse_catalog(json.dumps(doc))
    assert "C17" in catalog.unit_index and "C17-L1-01" in catalog.control_index


def test_unit_sort_key_is_natural():
    ids = ["B10", "B7.1", "A6", "C17", "B7", "B10.1", "A1", "B9"]
    assert sorted(ids, key=unit_sort_key) == ["A1", "A6", "B7", "B7.1", "B9", "B10", "B10.1", "C17"]


# random small catalogs for round-trip property
_texts = st.text(alphabet="abcdefghij XYZ-,.é", min_size=1, max_size=20).filter(str.strip)


@st.composite
def small_catalogs(draw):
    pillars = []
    for pid, title in (("A", "IDENTIFICATION"), ("B", "PROTECTION"), ("C", "DEFENSE")):
        reqs = []
        for r in range(draw(st.integers(1, 2))):
            rid = f"{pid}{r + 1}"
            n_children = draw(st.integers(0, 2))
            if n_children:
                children = tuple(_leaf(draw, f"{rid}.{k + 1}", "sub-requirement") for k in range(n_children))
                reqs.append(Unit(rid, draw(_texts), "requirement", children=children))
            else:
                reqs.append(_leaf(draw, rid, "requirement"))
        pillars.append(Pillar(pid, title, tuple(reqs)))
    return Catalog(draw(_texts), draw(_texts), tuple(pillars))


def _leaf(draw, uid, kind):
    controls = []
    levels = draw(st.lists(st.integers(1, 5), min_size=1, max_size=3, unique=True))
    for lvl in sorted(levels):
        for seq in range(draw(st.integers(1, 2))):
            guidance = draw(st.one_of(st.none(), _texts))
            controls.append(Control(f"{uid}-L{lvl}-{seq + 1:02d}", draw(_texts), lvl, guidance))
    vacuous = tuple(lvl for lvl in range(1, 6) if lvl not in levels and draw(st.booleans()))
    return Unit(uid, draw(_texts), kind, controls=tuple(controls), vacuous_levels=vacuous)


@settings(max_examples=60, deadline=None)
@given(small_catalogs())
def test_round_trip_property(cat):
    text = serialize_catalog(cat)
    parsed = parse_catalog(text)
    assert parsed == cat
    assert catalog_to_dict(parsed) == catalog_to_dict(cat)
    assert validate_catalog(parsed).errors == []
