import json

import pytest
from hypothesis import given, settings, strategies as st

from penrose_quasifold.delzant import canonical_descriptor, descriptor_of_tile
from penrose_quasifold.io import (
    FormatError,
    analyze_tiles,
    deserialize,
    deserialize_descriptors,
    distinct_descriptors,
    patch_to_json,
    read_patch,
    serialize,
    serialize_descriptors,
)
from penrose_quasifold.quasilattice import QuasiPoint
from penrose_quasifold.tiling import (
    SEED_NAMES,
    Patch,
    RhombusTile,
    TileKind,
    generate,
    merge_rhombi,
    patch_from_tiles,
)


def _blob(p):
    return json.loads(serialize(p))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SEED_NAMES), st.integers(0, 4))
def test_round_trip_is_identity(name, depth):
    p = generate(name, depth)
    blob = serialize(p)
    q = deserialize(blob)
    assert q == p
    assert serialize(q) == blob


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(list(TileKind)), st.integers(0, 4),
                          st.tuples(*[st.integers(-6, 6)] * 4)), max_size=6))
def test_round_trip_of_arbitrary_tiles(specs):
    # overlapping tiles are fine here: the file format does not validate geometry
    tiles = {RhombusTile(kind, k, QuasiPoint(c)) for kind, k, c in specs}
    p = patch_from_tiles(sorted(tiles, key=RhombusTile.sort_key))
    assert deserialize(serialize(p)) == p


def test_serialization_is_deterministic():
    a = serialize(generate("sun", 3))
    b = serialize(generate("sun", 3))
    assert a == b
    assert a.endswith(b"\n") and b"\n" not in a[:-1]


def test_file_layout():
    data = _blob(generate("acute", 2))
    assert list(data) == ["version", "scale_power", "triangles", "tiles", "decorations"]
    assert data["version"] == 1 and data["scale_power"] == 0
    assert set(data["triangles"][0]) == {"type", "chirality", "apex", "base1", "base2"}
    assert all(len(t["apex"]) == 4 for t in data["triangles"])


def test_derived_fields_are_optional():
    p = generate("obtuse", 3)
    data = _blob(p)
    del data["tiles"], data["decorations"]
    assert deserialize(json.dumps(data)) == p


def test_read_patch_from_disk(tmp_path):
    p = generate("acute", 3)
    f = tmp_path / "p.json"
    f.write_bytes(serialize(p))
    assert read_patch(str(f)) == p


def _bad(data, fragment):
    with pytest.raises(FormatError) as exc:
        deserialize(json.dumps(data))
    assert fragment in str(exc.value)
    return exc.value


def test_unknown_and_missing_fields():
    data = _blob(generate("acute", 1))
    _bad({**data, "extra": 1}, "unknown field")
    err = _bad({**data, "triangles": [{**data["triangles"][0], "colour": "red"}]}, "unknown field")
    assert err.location == "$.triangles[0]"
    d = dict(data)
    del d["scale_power"]
    _bad(d, "missing field")


def test_version_mismatch():
    _bad({**_blob(generate("acute", 1)), "version": 2}, "version")


def test_location_of_bad_values():
    data = _blob(generate("acute", 2))
    data["triangles"][3]["apex"][2] = 1.5
    err = _bad(data, "integer")
    assert err.location == "$.triangles[3].apex[2]"
    data = _blob(generate("acute", 2))
    data["triangles"][1]["type"] = "square"
    assert _bad(data, "square").location == "$.triangles[1].type"


def test_syntax_errors_report_line_and_column():
    with pytest.raises(FormatError) as exc:
        deserialize('{"version": 1,\n "scale_power": }')
    assert exc.value.location == "line 2 column 17"


def test_chirality_must_match_vertices():
    data = _blob(generate("acute", 0))
    t = data["triangles"][0]
    t["chirality"] = "right" if t["chirality"] == "left" else "left"
    assert _bad(data, "declared").location == "$.triangles[0].chirality"


def test_derived_fields_must_agree():
    data = _blob(generate("sun", 2))
    data["tiles"] = data["tiles"][1:]
    _bad(data, "tiles disagree")
    data = _blob(generate("sun", 2))
    data["decorations"][0]["dir"] *= -1
    _bad(data, "decorations disagree")


def test_descriptor_file_round_trip():
    tiles, _ = merge_rhombi(generate("sun", 2))
    for normalized in (True, False):
        entries = analyze_tiles(tiles, normalized)
        blob = serialize_descriptors(entries, normalized)
        back, flag = deserialize_descriptors(blob)
        assert flag is normalized and back == entries
        assert serialize_descriptors(back, normalized) == blob


def test_distinct_summary():
    tiles, _ = merge_rhombi(generate("sun", 3))
    entries = analyze_tiles(tiles)
    groups = distinct_descriptors(entries)
    assert len(groups) == 2
    assert sum(g["count"] for g in groups) == len(tiles)
    kinds = {tuple(g["kinds"]): entries[g["descriptor"]].descriptor for g in groups}
    assert kinds == {("thick",): canonical_descriptor(TileKind.THICK), ("thin",): canonical_descriptor(TileKind.THIN)}
    # raw descriptors at different positions are all distinct
    assert len(distinct_descriptors(analyze_tiles(tiles, normalized=False))) == len(tiles)


def test_descriptor_file_checks_summary():
    tiles, _ = merge_rhombi(generate("sun", 2))
    data = json.loads(serialize_descriptors(analyze_tiles(tiles)))
    data["distinct"][0]["count"] += 1
    with pytest.raises(FormatError):
        deserialize_descriptors(json.dumps(data))
    data = json.loads(serialize_descriptors(analyze_tiles(tiles)))
    data["entries"][0]["descriptor"]["radius_sq"] = "x"
    with pytest.raises(FormatError) as exc:
        deserialize_descriptors(json.dumps(data))
    assert exc.value.location == "$.entries[0].descriptor"


def test_entry_without_tile():
    from penrose_quasifold.io import DescriptorEntry

    d = descriptor_of_tile(RhombusTile(TileKind.THIN, 2, QuasiPoint()))
    entries = [DescriptorEntry(None, None, d)]
    assert deserialize_descriptors(serialize_descriptors(entries, False)) == (entries, False)


def test_scaled_patch_has_no_tiles():
    from penrose_quasifold.tiling import seed_patch

    p = seed_patch("acute", 3)
    assert p.scale_power == 3
    assert patch_to_json(p)["tiles"] == []
    assert deserialize(serialize(p)) == p
    assert isinstance(p, Patch)
