"""Deterministic SVG rendering of patches.

Coordinates are printed with exactly nine decimals and elements are emitted
in canonical tile order, so identical patches give byte-identical files.
"""

from __future__ import annotations

import math
from typing import Sequence

from .quasilattice import embed_float
from .tiling import Decoration, Patch, RhombusTile, TileKind, TriangleType, merge_rhombi

FILL = {TileKind.THICK: "#e8a33d", TileKind.THIN: "#3d7be8"}
HALF_FILL = {TriangleType.OBTUSE: "#f4d19e", TriangleType.ACUTE: "#9ebdf4"}
STROKE = "#222222"
SCALE = 40.0  # pixels per unit edge
MARGIN = 10.0


def fmt(x: float) -> str:
    s = f"{x:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def _xy(p) -> tuple[float, float]:
    x, y = embed_float(p)
    return x * SCALE, -y * SCALE


def _points_attr(pts: Sequence[tuple[float, float]]) -> str:
    return " ".join(f"{fmt(x)},{fmt(y)}" for x, y in pts)


def _chevrons(d: Decoration) -> list[str]:
    """One or two open arrowheads at the middle of the edge, pointing along ``dir``."""
    (ax, ay), (bx, by) = _xy(d.edge[0]), _xy(d.edge[1])
    if d.dir < 0:
        ax, ay, bx, by = bx, by, ax, ay
    length = math.hypot(bx - ax, by - ay)
    ux, uy = (bx - ax) / length, (by - ay) / length
    nx, ny = -uy, ux
    size = 0.09 * length
    out = []
    for i in range(d.arrows):
        t = 0.5 + (i - (d.arrows - 1) / 2) * 0.12
        tx, ty = ax + t * (bx - ax) + ux * size / 2, ay + t * (by - ay) + uy * size / 2
        p1 = (tx - ux * size + nx * size * 0.6, ty - uy * size + ny * size * 0.6)
        p2 = (tx - ux * size - nx * size * 0.6, ty - uy * size - ny * size * 0.6)
        out.append(f'<polyline class="arrow" points="{_points_attr([p1, (tx, ty), p2])}"/>')
    return out


def render_patch(
    p: Patch,
    *,
    decorations: bool = False,
    overlay: tuple[RhombusTile, Sequence[tuple[float, float]]] | None = None,
) -> str:
    """SVG text for the patch.

    Rhombi are drawn as one polygon each; half-tiles without a mirror partner
    are drawn as triangles.  ``overlay`` is a tile to outline together with
    moment-image sample points (in plane coordinates).
    """
    if p.scale_power == 0:
        tiles, unpaired = merge_rhombi(p)
    else:
        tiles, unpaired = [], list(p.triangles)
    body: list[str] = []
    xs: list[float] = []
    ys: list[float] = []

    def track(pts):
        for x, y in pts:
            xs.append(x)
            ys.append(y)

    for i, t in enumerate(tiles):
        pts = [_xy(v) for v in t.vertices()]
        track(pts)
        body.append(
            f'<polygon class="tile {t.kind.value}" data-id="{i}" fill="{FILL[t.kind]}" '
            f'points="{_points_attr(pts)}"/>'
        )
    for t in unpaired:
        pts = [_xy(v) for v in t.vertices]
        track(pts)
        body.append(
            f'<polygon class="half {t.ttype.value}" fill="{HALF_FILL[t.ttype]}" '
            f'points="{_points_attr(pts)}"/>'
        )
    if decorations:
        body.append('<g class="decorations" fill="none" stroke="#b00020" stroke-width="1.2">')
        for d in p.decorations:
            body.extend(_chevrons(d))
        body.append("</g>")
    if overlay is not None:
        tile, samples = overlay
        pts = [_xy(v) for v in tile.vertices()]
        body.append(
            f'<polygon class="overlay-outline" fill="none" stroke="#000000" stroke-width="2.5" '
            f'points="{_points_attr(pts)}"/>'
        )
        body.append('<g class="moment-samples" fill="#000000">')
        for x, y in samples:
            body.append(f'<circle cx="{fmt(x * SCALE)}" cy="{fmt(-y * SCALE)}" r="0.8"/>')
        body.append("</g>")
    if xs:
        x0, x1, y0, y1 = min(xs) - MARGIN, max(xs) + MARGIN, min(ys) - MARGIN, max(ys) + MARGIN
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    w, h = x1 - x0, y1 - y0
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{fmt(x0)} {fmt(y0)} {fmt(w)} {fmt(h)}" '
        f'width="{fmt(w)}" height="{fmt(h)}">\n'
        f'<g stroke="{STROKE}" stroke-width="0.6" stroke-linejoin="round">\n'
    )
    # decorations and overlay groups close themselves; only tiles live in the stroke group
    n_tiles = len(tiles) + len(unpaired)
    return head + "\n".join(body[:n_tiles]) + ("\n" if n_tiles else "") + "</g>\n" + "".join(
        line + "\n" for line in body[n_tiles:]
    ) + "</svg>\n"
