"""Penrose rhombus patches generated by Robinson-triangle deflation.

Half-tiles are golden triangles (acute, 36-72-72) and golden gnomons
(obtuse, 108-36-36).  In both, the two legs from the apex are rhombus
edges and the base is a rhombus diagonal; mirror images glued along the
base give the thin and the thick rhombus respectively.

A seed is built at edge scale ``phi**n`` and deflated ``n`` times, so every
vertex is an integer point of the quasilattice R from start to finish.
"""

from __future__ import annotations

import math
from fractions import Fraction
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .golden import GoldenExt, GoldenRat, PHI
from .quasilattice import (
    QuasiPoint,
    cross,
    embed_float,
    inner,
    inner_sign,
    inv_phi_scale,
    norm_sq,
    orient,
    phi_power_scale,
    star_index,
)


class TriangleType(str, Enum):
    ACUTE = "acute"
    OBTUSE = "obtuse"


class Chirality(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class TileKind(str, Enum):
    THICK = "thick"
    THIN = "thin"


class TilingError(ValueError):
    pass


class ClassificationError(TilingError):
    pass


def _chirality_of(apex: QuasiPoint, base1: QuasiPoint, base2: QuasiPoint) -> Chirality | None:
    s = cross(base1 - apex, base2 - apex).sign()
    if s == 0:
        return None
    return Chirality.LEFT if s > 0 else Chirality.RIGHT


@dataclass(frozen=True, order=True)
class RobinsonTriangle:
    ttype: TriangleType
    chirality: Chirality
    apex: QuasiPoint
    base1: QuasiPoint
    base2: QuasiPoint

    def __post_init__(self):
        object.__setattr__(self, "ttype", TriangleType(self.ttype))
        object.__setattr__(self, "chirality", Chirality(self.chirality))

    @classmethod
    def make(cls, ttype, apex, base1, base2) -> RobinsonTriangle:
        """Build a triangle, reading its chirality off the vertex order."""
        ch = _chirality_of(apex, base1, base2)
        if ch is None:
            raise TilingError(f"degenerate triangle {apex}, {base1}, {base2}")
        return cls(TriangleType(ttype), ch, apex, base1, base2)

    @property
    def vertices(self) -> tuple[QuasiPoint, QuasiPoint, QuasiPoint]:
        return (self.apex, self.base1, self.base2)

    def signed_area2(self) -> GoldenExt:
        """Twice the signed area."""
        return cross(self.base1 - self.apex, self.base2 - self.apex)

    def area(self) -> GoldenExt:
        a = self.signed_area2()
        return abs(a) * Fraction(1, 2)

    def leg_sq(self) -> GoldenRat:
        return norm_sq(self.base1 - self.apex)

    def scale_power(self) -> int:
        """Exponent ``m`` with leg length ``phi**m``."""
        leg = self.leg_sq()
        guess = round(math.log(float(leg)) / (2 * math.log(float(PHI))))
        if PHI ** (2 * guess) != leg:
            raise TilingError(f"leg length of {self} is not a power of phi")
        return guess

    def check(self) -> list[str]:
        """Shape invariants; returns a list of problems (empty if fine)."""
        problems = []
        ch = _chirality_of(*self.vertices)
        if ch is None:
            return ["collinear vertices"]
        if ch is not self.chirality:
            problems.append("chirality disagrees with orientation")
        leg1 = norm_sq(self.base1 - self.apex)
        leg2 = norm_sq(self.base2 - self.apex)
        base = norm_sq(self.base2 - self.base1)
        if leg1 != leg2:
            problems.append("legs differ")
        ratio = PHI * PHI if self.ttype is TriangleType.ACUTE else (PHI * PHI).inverse()
        if leg1 != ratio * base:
            problems.append("side/base ratio is wrong")
        return problems

    def reflected(self) -> RobinsonTriangle:
        """Same triangle with the base endpoints swapped (mirror labelling)."""
        return RobinsonTriangle.make(self.ttype, self.apex, self.base2, self.base1)

    def translated(self, w: QuasiPoint) -> RobinsonTriangle:
        return RobinsonTriangle(self.ttype, self.chirality, self.apex + w, self.base1 + w, self.base2 + w)


# unit-leg canonical triangles, left-handed, apex at the origin, base parallel to Y*_0
_UNIT_OFFSETS = {
    TriangleType.ACUTE: (-QuasiPoint.star(1), QuasiPoint.star(4)),
    TriangleType.OBTUSE: (QuasiPoint.star(3), -QuasiPoint.star(2)),
}


def seed(ttype, chirality, n: int, anchor: QuasiPoint | None = None) -> RobinsonTriangle:
    """A single half-tile with legs of length ``phi**n`` and apex at ``anchor``."""
    if n < 0:
        raise TilingError(f"scale power must be >= 0, got {n}")
    ttype, chirality = TriangleType(ttype), Chirality(chirality)
    anchor = anchor if anchor is not None else QuasiPoint()
    b1, b2 = (phi_power_scale(v, n) for v in _UNIT_OFFSETS[ttype])
    if chirality is Chirality.RIGHT:
        b1, b2 = b2, b1
    return RobinsonTriangle.make(ttype, anchor, anchor + b1, anchor + b2)


def deflate(t: RobinsonTriangle, *, check_scale: bool = True) -> list[RobinsonTriangle]:
    """Split a half-tile into half-tiles smaller by a factor ``phi``.

    acute (A, B, C):  P = A + (B - A)/phi  ->  acute (C, P, B), obtuse (P, C, A)
    obtuse (A, B, C): Q = B + (A - B)/phi, R = B + (C - B)/phi
                      ->  obtuse (R, C, A), obtuse (Q, R, B), acute (R, Q, A)
    """
    if check_scale and t.scale_power() < 1:
        raise TilingError("cannot deflate a unit-edge triangle")
    A, B, C = t.vertices
    if t.ttype is TriangleType.ACUTE:
        P = A + inv_phi_scale(B - A)
        return [
            RobinsonTriangle.make(TriangleType.ACUTE, C, P, B),
            RobinsonTriangle.make(TriangleType.OBTUSE, P, C, A),
        ]
    Q = B + inv_phi_scale(A - B)
    R = B + inv_phi_scale(C - B)
    return [
        RobinsonTriangle.make(TriangleType.OBTUSE, R, C, A),
        RobinsonTriangle.make(TriangleType.OBTUSE, Q, R, B),
        RobinsonTriangle.make(TriangleType.ACUTE, R, Q, A),
    ]


@dataclass(frozen=True)
class Decoration:
    """Arrow marking on a rhombus edge.

    ``edge`` is stored with its endpoints in sorted order; ``dir`` is +1 when
    the arrow points from ``edge[0]`` to ``edge[1]``.
    """

    edge: tuple[QuasiPoint, QuasiPoint]
    arrows: int
    dir: int

    @classmethod
    def along(cls, tail: QuasiPoint, head: QuasiPoint, arrows: int) -> Decoration:
        if tail < head:
            return cls((tail, head), arrows, 1)
        return cls((head, tail), arrows, -1)


def leg_decorations(t: RobinsonTriangle) -> tuple[Decoration, Decoration]:
    """Markings induced on the two legs of a half-tile.

    The leg at ``base1`` carries one arrow, pointing away from the apex on a
    gnomon and towards it on a golden triangle.  The leg at ``base2`` carries
    two arrows pointing towards the apex.
    """
    if t.ttype is TriangleType.OBTUSE:
        single = Decoration.along(t.apex, t.base1, 1)
    else:
        single = Decoration.along(t.base1, t.apex, 1)
    double = Decoration.along(t.base2, t.apex, 2)
    return single, double


def _tri_key(t: RobinsonTriangle):
    return (t.ttype.value, t.chirality.value, t.apex.c, t.base1.c, t.base2.c)


@dataclass(frozen=True)
class Patch:
    scale_power: int
    triangles: tuple[RobinsonTriangle, ...] = ()

    def __post_init__(self):
        if self.scale_power < 0:
            raise TilingError("scale_power must be >= 0")
        object.__setattr__(self, "triangles", tuple(sorted(self.triangles, key=_tri_key)))

    @property
    def decorations(self) -> tuple[Decoration, ...]:
        decs = {d for t in self.triangles for d in leg_decorations(t)}
        return tuple(sorted(decs, key=lambda d: (d.edge[0].c, d.edge[1].c, d.arrows, d.dir)))

    def counts(self) -> tuple[int, int]:
        """``(acute, obtuse)`` triangle counts."""
        acute = sum(1 for t in self.triangles if t.ttype is TriangleType.ACUTE)
        return acute, len(self.triangles) - acute

    def area(self) -> GoldenExt:
        total = GoldenExt(0)
        for t in self.triangles:
            total = total + t.area()
        return total

    def vertices(self) -> list[QuasiPoint]:
        return sorted({v for t in self.triangles for v in t.vertices})


def sun_patch(n: int) -> Patch:
    """Five thick rhombi around the origin, split into ten gnomons, edge scale ``phi**n``."""
    if n < 0:
        raise TilingError(f"scale power must be >= 0, got {n}")
    tris = []
    for k in range(5):
        u = phi_power_scale(QuasiPoint.star(k), n)
        w = phi_power_scale(QuasiPoint.star(k + 1), n)
        centre = QuasiPoint()
        tris.append(RobinsonTriangle.make(TriangleType.OBTUSE, u, centre, u + w))
        tris.append(RobinsonTriangle.make(TriangleType.OBTUSE, w, centre, u + w))
    return Patch(n, tuple(tris))


SEED_NAMES = ("acute", "obtuse", "sun")


def seed_patch(name: str, n: int) -> Patch:
    if name == "acute":
        return Patch(n, (seed(TriangleType.ACUTE, Chirality.LEFT, n),))
    if name == "obtuse":
        return Patch(n, (seed(TriangleType.OBTUSE, Chirality.LEFT, n),))
    if name == "sun":
        return sun_patch(n)
    raise TilingError(f"unknown seed {name!r}; choose from {', '.join(SEED_NAMES)}")


def deflate_patch(p: Patch, steps: int) -> Patch:
    if steps < 0:
        raise TilingError("steps must be >= 0")
    if steps > p.scale_power:
        raise TilingError(f"cannot deflate {steps} times a patch at scale power {p.scale_power}")
    tris: Sequence[RobinsonTriangle] = p.triangles
    for _ in range(steps):
        tris = [c for t in tris for c in deflate(t, check_scale=False)]
    return Patch(p.scale_power - steps, tuple(tris))


def generate(name: str, depth: int) -> Patch:
    """Seed at scale ``phi**depth`` and deflate down to unit edges."""
    return deflate_patch(seed_patch(name, depth), depth)


# --- rhombi ----------------------------------------------------------------


def _star_pair(kind: TileKind, k: int) -> tuple[int, int]:
    return (k % 5, (k + 1) % 5) if kind is TileKind.THICK else (k % 5, (k + 2) % 5)


@dataclass(frozen=True)
class RhombusTile:
    kind: TileKind
    k: int
    anchor: QuasiPoint

    def __post_init__(self):
        object.__setattr__(self, "kind", TileKind(self.kind))
        if not (isinstance(self.k, int) and 0 <= self.k < 5):
            raise TilingError(f"star index must be in 0..4, got {self.k!r}")

    @property
    def star_pair(self) -> tuple[int, int]:
        return _star_pair(self.kind, self.k)

    def edge_vectors(self) -> tuple[QuasiPoint, QuasiPoint]:
        a, b = self.star_pair
        return QuasiPoint.star(a), QuasiPoint.star(b)

    def vertices(self) -> tuple[QuasiPoint, QuasiPoint, QuasiPoint, QuasiPoint]:
        """Counter-clockwise from the anchor."""
        u, w = self.edge_vectors()
        p = self.anchor
        return (p, p + u, p + u + w, p + w)

    def sort_key(self):
        return (0 if self.kind is TileKind.THICK else 1, self.k, self.anchor.c)

    def halves(self) -> tuple[RobinsonTriangle, RobinsonTriangle]:
        """The two half-tiles, glued along the diagonal from the anchor."""
        p0, p1, p2, p3 = self.vertices()
        ttype = TriangleType.OBTUSE if self.kind is TileKind.THICK else TriangleType.ACUTE
        return (
            RobinsonTriangle.make(ttype, p1, p0, p2),
            RobinsonTriangle.make(ttype, p3, p0, p2),
        )

    def cos_anchor_angle(self) -> GoldenRat:
        u, w = self.edge_vectors()
        return inner(u, w)

    def translated(self, w: QuasiPoint) -> RhombusTile:
        return RhombusTile(self.kind, self.k, self.anchor + w)

    def rotated(self, s: int) -> RhombusTile:
        """Rotate about the origin by ``2*pi*s/5``."""
        return RhombusTile(self.kind, (self.k + s) % 5, self.anchor.rotate(s))


def canonical_tiles(anchor: QuasiPoint | None = None) -> list[RhombusTile]:
    anchor = anchor if anchor is not None else QuasiPoint()
    return [RhombusTile(kind, k, anchor) for kind in TileKind for k in range(5)]


def classify(vertices: Iterable[QuasiPoint]) -> tuple[TileKind, int, QuasiPoint]:
    """Identify four points as a translate of one of the ten unit rhombi."""
    pts = set(vertices)
    if len(pts) != 4:
        raise ClassificationError(f"expected 4 distinct vertices, got {len(pts)}")
    ordered = sorted(pts)
    p0 = ordered[0]
    dirs = []
    for q in ordered[1:]:
        idx = star_index(q - p0)
        if idx is not None:
            dirs.append(idx[1])
    if len(dirs) != 2 or dirs[0] == dirs[1]:
        raise ClassificationError(f"{ordered} is not a unit rhombus of the star")
    a, b = dirs
    diff = (b - a) % 5
    if diff in (1, 4):
        kind, k = TileKind.THICK, (a if diff == 1 else b)
    else:
        kind, k = TileKind.THIN, (a if diff == 2 else b)
    u, w = (QuasiPoint.star(i) for i in _star_pair(kind, k))
    for p in ordered:
        if {p, p + u, p + w, p + u + w} == pts:
            return kind, k, p
    raise ClassificationError(f"{ordered} is not a translate of any canonical rhombus")


def _mirror_pair(t1: RobinsonTriangle, t2: RobinsonTriangle) -> bool:
    return (
        t1.ttype is t2.ttype
        and {t1.base1, t1.base2} == {t2.base1, t2.base2}
        and orient(t1.base1, t1.base2, t1.apex) == -orient(t1.base1, t1.base2, t2.apex) != 0
    )


def merge_rhombi(p: Patch) -> tuple[list[RhombusTile], list[RobinsonTriangle]]:
    """Glue mirror halves sharing a base into rhombi; return (tiles, unpaired halves)."""
    by_base: dict = defaultdict(list)
    for t in p.triangles:
        by_base[(t.ttype, frozenset((t.base1, t.base2)))].append(t)
    tiles, unpaired = [], []
    for group in by_base.values():
        if len(group) == 2 and _mirror_pair(*group):
            t1, t2 = group
            kind, k, anchor = classify({t1.apex, t2.apex, t1.base1, t1.base2})
            expected = TileKind.THICK if t1.ttype is TriangleType.OBTUSE else TileKind.THIN
            if kind is not expected:
                raise ClassificationError(f"halves {t1}, {t2} glue into a {kind.value} rhombus")
            tiles.append(RhombusTile(kind, k, anchor))
        else:
            unpaired.extend(group)
    tiles.sort(key=RhombusTile.sort_key)
    unpaired.sort(key=_tri_key)
    return tiles, unpaired


def patch_from_tiles(tiles: Iterable[RhombusTile], scale_power: int = 0) -> Patch:
    return Patch(scale_power, tuple(h for t in tiles for h in t.halves()))


def reflect_tile_in_place(p: Patch, tile: RhombusTile) -> Patch:
    """Mirror one rhombus of the patch in place.

    The footprint is unchanged; the two halves swap their base labels, which
    reverses the markings induced on all four edges.
    """
    v0, v1, v2, v3 = tile.vertices()
    diagonal = {v0, v2}
    found = [
        t for t in p.triangles
        if {t.base1, t.base2} == diagonal and t.apex in (v1, v3)
    ]
    if len(found) != 2:
        raise TilingError(f"{tile} is not a tile of the patch")
    others = [t for t in p.triangles if t not in found]
    return Patch(p.scale_power, tuple(others) + tuple(t.reflected() for t in found))


# --- validation ------------------------------------------------------------


@dataclass
class ValidationReport:
    edge_failures: list[str] = field(default_factory=list)
    decoration_mismatches: list[str] = field(default_factory=list)
    overlaps: list[str] = field(default_factory=list)
    non_lattice: list[str] = field(default_factory=list)
    shape_errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violation_count()

    def violation_count(self) -> int:
        return (
            len(self.edge_failures)
            + len(self.decoration_mismatches)
            + len(self.overlaps)
            + len(self.non_lattice)
            + len(self.shape_errors)
        )

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": self.violation_count(),
            "edge_failures": self.edge_failures,
            "decoration_mismatches": self.decoration_mismatches,
            "overlaps": self.overlaps,
            "non_lattice": self.non_lattice,
            "shape_errors": self.shape_errors,
        }


class _Grid:
    """Float bucketing used only to pick candidate pairs; all decisions are exact."""

    def __init__(self, cell: float):
        self.cell = cell
        self.cells: dict = defaultdict(list)

    def _range(self, box):
        (x0, y0), (x1, y1) = box
        c = self.cell
        return (
            range(math.floor(x0 / c) - 1, math.floor(x1 / c) + 2),
            range(math.floor(y0 / c) - 1, math.floor(y1 / c) + 2),
        )

    def insert(self, box, item):
        xs, ys = self._range(box)
        for i in xs:
            for j in ys:
                self.cells[(i, j)].append(item)

    def query(self, box):
        xs, ys = self._range(box)
        seen = set()
        for i in xs:
            for j in ys:
                for item in self.cells.get((i, j), ()):
                    if item not in seen:
                        seen.add(item)
                        yield item


def _bbox(points) -> tuple[tuple[float, float], tuple[float, float]]:
    fs = [embed_float(p) for p in points]
    xs = [f[0] for f in fs]
    ys = [f[1] for f in fs]
    return (min(xs), min(ys)), (max(xs), max(ys))


def _ccw(t: RobinsonTriangle) -> tuple[QuasiPoint, QuasiPoint, QuasiPoint]:
    if t.chirality is Chirality.LEFT:
        return (t.apex, t.base1, t.base2)
    return (t.apex, t.base2, t.base1)


def _separated(t1, t2) -> bool:
    """True if some edge line of either triangle separates the closed triangles."""
    for a, b in ((t1, t2), (t2, t1)):
        va = _ccw(a)
        for i in range(3):
            p, q = va[i], va[(i + 1) % 3]
            if all(orient(p, q, r) <= 0 for r in b.vertices):
                return True
    return False


def _strictly_inside_segment(v: QuasiPoint, p: QuasiPoint, q: QuasiPoint) -> bool:
    if v == p or v == q or orient(p, q, v) != 0:
        return False
    return inner_sign(v - p, q - p) > 0 and inner_sign(v - q, p - q) > 0


def validate(p: Patch) -> ValidationReport:
    rep = ValidationReport()
    tris = p.triangles
    if not tris:
        return rep

    for t in tris:
        for v in t.vertices:
            if not all(isinstance(x, int) for x in v.c):
                rep.non_lattice.append(f"vertex {v} of {t} is not in R")
        for problem in t.check():
            rep.shape_errors.append(f"{t}: {problem}")

    # edges: legs carry markings, bases carry the mirror labelling
    edges: dict = defaultdict(list)
    for t in tris:
        single, double = leg_decorations(t)
        edges[frozenset((t.apex, t.base1))].append(("leg", t, single))
        edges[frozenset((t.apex, t.base2))].append(("leg", t, double))
        edges[frozenset((t.base1, t.base2))].append(("base", t, None))
    for key, users in edges.items():
        ends = sorted(key)
        if len(users) > 2:
            rep.edge_failures.append(f"edge {ends[0]}-{ends[1]} shared by {len(users)} triangles")
            continue
        if len(users) < 2:
            continue
        (r1, t1, d1), (r2, t2, d2) = users
        if r1 != r2:
            rep.decoration_mismatches.append(f"edge {ends[0]}-{ends[1]}: diagonal meets a tile edge")
        elif r1 == "leg" and d1 != d2:
            rep.decoration_mismatches.append(
                f"edge {ends[0]}-{ends[1]}: markings {d1.arrows}/{d1.dir} vs {d2.arrows}/{d2.dir}"
            )
        elif r1 == "base" and (t1.ttype is not t2.ttype or (t1.base1, t1.base2) != (t2.base1, t2.base2)):
            rep.decoration_mismatches.append(f"diagonal {ends[0]}-{ends[1]}: halves are not mirror images")

    # T-junctions and overlaps via float buckets, exact predicates
    leg = max(math.sqrt(float(t.leg_sq())) for t in tris)
    grid = _Grid(leg)
    vgrid = _Grid(leg)
    # triangles are tracked by position so that exact duplicates are still compared
    boxes = [_bbox(t.vertices) for t in tris]
    for i, box in enumerate(boxes):
        grid.insert(box, i)
    verts = p.vertices()
    for v in verts:
        vgrid.insert(_bbox([v]), v)
    for key in edges:
        a, b = sorted(key)
        for v in vgrid.query(_bbox([a, b])):
            if _strictly_inside_segment(v, a, b):
                rep.edge_failures.append(f"vertex {v} lies inside edge {a}-{b}")
    for i, t in enumerate(tris):
        for j in grid.query(boxes[i]):
            if j > i and not _separated(t, tris[j]):
                rep.overlaps.append(f"{t} overlaps {tris[j]}")
    return rep
