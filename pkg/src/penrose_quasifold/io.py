"""JSON file formats for patches and descriptor sets.

Patch file::

    {"version": 1, "scale_power": n,
     "triangles": [{"type": "acute", "chirality": "left",
                    "apex": [c1, c2, c3, c4], "base1": [...], "base2": [...]}, ...],
     "tiles": [{"kind": "thick", "k": 2, "anchor": [...]}, ...],
     "decorations": [{"edge": [pointA, pointB], "arrows": 1, "dir": 1}, ...]}

Triangles are authoritative.  ``tiles`` and ``decorations`` are derived data
written for convenience; when present on input they must agree with what the
triangles induce.  Output is canonical (sorted, fixed key order, no
whitespace variation), so equal patches serialize to identical bytes.
"""

from __future__ import annotations

import json
from typing import Any

from .delzant import QuasifoldDescriptor, canonical_rotation, descriptor_of_tile, normalized_descriptor
from .quasilattice import QuasiPoint
from .tiling import (
    Chirality,
    Decoration,
    Patch,
    RhombusTile,
    RobinsonTriangle,
    TileKind,
    TilingError,
    TriangleType,
    _chirality_of,
    merge_rhombi,
)

FORMAT_VERSION = 1


class FormatError(ValueError):
    """Malformed input file; ``location`` is a JSON path such as ``$.triangles[3].apex``."""

    def __init__(self, location: str, message: str) -> None:
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True) + "\n"


def _loads(text: str | bytes) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError("$", f"not UTF-8: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc


def _object(data, loc: str, required: set, optional: set = frozenset()) -> dict:
    if not isinstance(data, dict):
        raise FormatError(loc, f"expected an object, got {type(data).__name__}")
    unknown = sorted(set(data) - required - set(optional))
    if unknown:
        raise FormatError(loc, f"unknown field(s) {unknown}")
    missing = sorted(required - set(data))
    if missing:
        raise FormatError(loc, f"missing field(s) {missing}")
    return data


def _int(data, loc: str) -> int:
    if not isinstance(data, int) or isinstance(data, bool):
        raise FormatError(loc, f"expected an integer, got {data!r}")
    return data


def _list(data, loc: str) -> list:
    if not isinstance(data, list):
        raise FormatError(loc, f"expected a list, got {type(data).__name__}")
    return data


def _check_version(data: dict, loc: str = "$") -> None:
    v = data.get("version")
    if v != FORMAT_VERSION:
        raise FormatError(f"{loc}.version", f"unsupported version {v!r}, expected {FORMAT_VERSION}")


# --- points, triangles, tiles ------------------------------------------------


def point_to_json(p: QuasiPoint) -> list[int]:
    return list(p.c)


def point_from_json(data, loc: str) -> QuasiPoint:
    data = _list(data, loc)
    if len(data) != 4:
        raise FormatError(loc, f"expected 4 coordinates, got {len(data)}")
    return QuasiPoint(tuple(_int(x, f"{loc}[{i}]") for i, x in enumerate(data)))


def triangle_to_json(t: RobinsonTriangle) -> dict:
    return {
        "type": t.ttype.value,
        "chirality": t.chirality.value,
        "apex": point_to_json(t.apex),
        "base1": point_to_json(t.base1),
        "base2": point_to_json(t.base2),
    }


def triangle_from_json(data, loc: str) -> RobinsonTriangle:
    data = _object(data, loc, {"type", "chirality", "apex", "base1", "base2"})
    try:
        ttype = TriangleType(data["type"])
    except ValueError:
        raise FormatError(f"{loc}.type", f"unknown triangle type {data['type']!r}") from None
    try:
        chirality = Chirality(data["chirality"])
    except ValueError:
        raise FormatError(f"{loc}.chirality", f"unknown chirality {data['chirality']!r}") from None
    apex, b1, b2 = (point_from_json(data[k], f"{loc}.{k}") for k in ("apex", "base1", "base2"))
    actual = _chirality_of(apex, b1, b2)
    if actual is None:
        raise FormatError(loc, "vertices are collinear")
    if actual is not chirality:
        raise FormatError(f"{loc}.chirality", f"declared {chirality.value} but vertices are {actual.value}")
    return RobinsonTriangle(ttype, chirality, apex, b1, b2)


def tile_to_json(t: RhombusTile) -> dict:
    return {"kind": t.kind.value, "k": t.k, "anchor": point_to_json(t.anchor)}


def tile_from_json(data, loc: str) -> RhombusTile:
    data = _object(data, loc, {"kind", "k", "anchor"})
    try:
        kind = TileKind(data["kind"])
    except ValueError:
        raise FormatError(f"{loc}.kind", f"unknown tile kind {data['kind']!r}") from None
    k = _int(data["k"], f"{loc}.k")
    if not 0 <= k < 5:
        raise FormatError(f"{loc}.k", f"star index must be in 0..4, got {k}")
    return RhombusTile(kind, k, point_from_json(data["anchor"], f"{loc}.anchor"))


def decoration_to_json(d: Decoration) -> dict:
    return {"edge": [point_to_json(d.edge[0]), point_to_json(d.edge[1])], "arrows": d.arrows, "dir": d.dir}


def decoration_from_json(data, loc: str) -> Decoration:
    data = _object(data, loc, {"edge", "arrows", "dir"})
    edge = _list(data["edge"], f"{loc}.edge")
    if len(edge) != 2:
        raise FormatError(f"{loc}.edge", "expected two endpoints")
    a, b = (point_from_json(p, f"{loc}.edge[{i}]") for i, p in enumerate(edge))
    arrows = _int(data["arrows"], f"{loc}.arrows")
    if arrows not in (1, 2):
        raise FormatError(f"{loc}.arrows", f"must be 1 or 2, got {arrows}")
    d = _int(data["dir"], f"{loc}.dir")
    if d not in (1, -1):
        raise FormatError(f"{loc}.dir", f"must be +1 or -1, got {d}")
    if not a < b:
        raise FormatError(f"{loc}.edge", "endpoints must be distinct and sorted")
    return Decoration((a, b), arrows, d)


# --- patches ---------------------------------------------------------------


def patch_tiles(p: Patch) -> list[RhombusTile]:
    """Merged rhombi of a unit-scale patch; a patch still at scale > 0 has none."""
    if p.scale_power != 0:
        return []
    return merge_rhombi(p)[0]


def patch_to_json(p: Patch) -> dict:
    return {
        "version": FORMAT_VERSION,
        "scale_power": p.scale_power,
        "triangles": [triangle_to_json(t) for t in p.triangles],
        "tiles": [tile_to_json(t) for t in patch_tiles(p)],
        "decorations": [decoration_to_json(d) for d in p.decorations],
    }


def patch_from_json(data) -> Patch:
    data = _object(data, "$", {"version", "scale_power", "triangles"}, {"tiles", "decorations"})
    _check_version(data)
    n = _int(data["scale_power"], "$.scale_power")
    if n < 0:
        raise FormatError("$.scale_power", "must be >= 0")
    tris = [triangle_from_json(t, f"$.triangles[{i}]") for i, t in enumerate(_list(data["triangles"], "$.triangles"))]
    p = Patch(n, tuple(tris))
    if "tiles" in data:
        tiles = [tile_from_json(t, f"$.tiles[{i}]") for i, t in enumerate(_list(data["tiles"], "$.tiles"))]
        try:
            expected = patch_tiles(p)
        except TilingError as exc:
            raise FormatError("$.triangles", f"halves do not merge into rhombi: {exc}") from exc
        if tiles != expected:
            raise FormatError("$.tiles", "tiles disagree with the tiles merged from the triangles")
    if "decorations" in data:
        decs = [
            decoration_from_json(d, f"$.decorations[{i}]")
            for i, d in enumerate(_list(data["decorations"], "$.decorations"))
        ]
        if tuple(decs) != p.decorations:
            raise FormatError("$.decorations", "decorations disagree with those induced by the triangles")
    return p


def serialize(p: Patch) -> bytes:
    return dumps(patch_to_json(p)).encode("ascii")


def deserialize(blob: str | bytes) -> Patch:
    return patch_from_json(_loads(blob))


def read_patch(path: str) -> Patch:
    with open(path, "rb") as fh:
        blob = fh.read()
    try:
        return deserialize(blob)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc.location}", exc.message) from exc


def write_bytes(path: str, blob: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(blob)


# --- descriptor sets -------------------------------------------------------

# File written by ``analyze``:
#   {"version": 1, "normalized": bool,
#    "entries": [{"tile": {...} or null, "rotation": s or null, "descriptor": {...}}, ...],
#    "distinct": [{"descriptor": int index into entries, "count": n, "kinds": [...]}, ...]}


class DescriptorEntry:
    __slots__ = ("tile", "rotation", "descriptor")

    def __init__(self, tile: RhombusTile | None, rotation: int | None, descriptor: QuasifoldDescriptor):
        self.tile = tile
        self.rotation = rotation
        self.descriptor = descriptor

    def __eq__(self, other) -> bool:
        if not isinstance(other, DescriptorEntry):
            return NotImplemented
        return (self.tile, self.rotation, self.descriptor) == (other.tile, other.rotation, other.descriptor)

    def __repr__(self) -> str:
        return f"DescriptorEntry({self.tile!r}, {self.rotation!r})"


def analyze_tiles(tiles: list[RhombusTile], normalized: bool = True) -> list[DescriptorEntry]:
    out = []
    for t in tiles:
        if normalized:
            out.append(DescriptorEntry(t, canonical_rotation(t).shift, normalized_descriptor(t)))
        else:
            out.append(DescriptorEntry(t, None, descriptor_of_tile(t)))
    return out


def distinct_descriptors(entries: list[DescriptorEntry]) -> list[dict]:
    """Groups of equal descriptors in first-occurrence order."""
    first: dict = {}
    groups: list[dict] = []
    for i, e in enumerate(entries):
        if e.descriptor not in first:
            first[e.descriptor] = len(groups)
            groups.append({"descriptor": i, "count": 0, "kinds": []})
        g = groups[first[e.descriptor]]
        g["count"] += 1
        if e.tile is not None and e.tile.kind.value not in g["kinds"]:
            g["kinds"].append(e.tile.kind.value)
    for g in groups:
        g["kinds"].sort()
    return groups


def descriptors_to_json(entries: list[DescriptorEntry], normalized: bool) -> dict:
    return {
        "version": FORMAT_VERSION,
        "normalized": normalized,
        "entries": [
            {
                "tile": tile_to_json(e.tile) if e.tile is not None else None,
                "rotation": e.rotation,
                "descriptor": e.descriptor.to_json(),
            }
            for e in entries
        ],
        "distinct": distinct_descriptors(entries),
    }


def descriptors_from_json(data) -> tuple[list[DescriptorEntry], bool]:
    data = _object(data, "$", {"version", "normalized", "entries"}, {"distinct"})
    _check_version(data)
    normalized = data["normalized"]
    if not isinstance(normalized, bool):
        raise FormatError("$.normalized", "expected true or false")
    entries = []
    for i, e in enumerate(_list(data["entries"], "$.entries")):
        loc = f"$.entries[{i}]"
        e = _object(e, loc, {"tile", "rotation", "descriptor"})
        tile = None if e["tile"] is None else tile_from_json(e["tile"], f"{loc}.tile")
        rot = None if e["rotation"] is None else _int(e["rotation"], f"{loc}.rotation")
        try:
            desc = QuasifoldDescriptor.from_json(e["descriptor"])
        except (ValueError, TypeError, KeyError) as exc:
            raise FormatError(f"{loc}.descriptor", str(exc)) from exc
        entries.append(DescriptorEntry(tile, rot, desc))
    if "distinct" in data and data["distinct"] != distinct_descriptors(entries):
        raise FormatError("$.distinct", "summary disagrees with the entries")
    return entries, normalized


def serialize_descriptors(entries: list[DescriptorEntry], normalized: bool = True) -> bytes:
    return dumps(descriptors_to_json(entries, normalized)).encode("ascii")


def deserialize_descriptors(blob: str | bytes) -> tuple[list[DescriptorEntry], bool]:
    return descriptors_from_json(_loads(blob))


def read_descriptors(path: str) -> tuple[list[DescriptorEntry], bool]:
    with open(path, "rb") as fh:
        blob = fh.read()
    try:
        return deserialize_descriptors(blob)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc.location}", exc.message) from exc
