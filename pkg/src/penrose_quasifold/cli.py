"""Command-line interface: gen, validate, classify, analyze, report, render.

Exit status is 0 when the command succeeded and found no violations, 1 when
a validation found violations, and 2 on errors (bad input, I/O, failed
classification).  With ``--json`` a machine-readable report goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .delzant import (
    DegenerateSpecError,
    UnsupportedSpecError,
    invariants_report,
    moment_image,
    descriptor_of_tile,
)
from .golden import ext_to_json
from .io import (
    FormatError,
    analyze_tiles,
    distinct_descriptors,
    read_descriptors,
    read_patch,
    serialize,
    serialize_descriptors,
    write_bytes,
)
from .tiling import SEED_NAMES, TileKind, TilingError, generate, merge_rhombi, validate

EXIT_OK, EXIT_VIOLATIONS, EXIT_ERROR = 0, 1, 2


@dataclass
class CliConfig:
    command: str
    input: list[str] = field(default_factory=list)
    output: str | None = None
    seed_name: str = "acute"
    depth: int = 0
    grid: int = 11
    overlay_tile: int | None = None
    decorations: bool = False
    raw: bool = False
    json: bool = False
    index_a: int = 0
    index_b: int = 0

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if self.grid < 2:
            raise ValueError(f"grid must be >= 2, got {self.grid}")


class CliError(Exception):
    def __init__(self, message: str, **details) -> None:
        super().__init__(message)
        self.details = details


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {n}")
    return n


def _grid(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError(f"grid must be >= 2, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="write a machine-readable report to stderr")
    p = argparse.ArgumentParser(
        prog="penrose-quasifold",
        description="Penrose rhombus tilings with exact quasilattice coordinates and their Delzant quasifolds.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a patch by deflation")
    g.add_argument("--seed", dest="seed_name", choices=SEED_NAMES, default="acute")
    g.add_argument("--depth", type=_nonneg, default=0)
    g.add_argument("-o", "--output", required=True)

    v = sub.add_parser("validate", parents=[common], help="check edges, decorations and overlaps")
    v.add_argument("input", nargs=1)

    c = sub.add_parser("classify", parents=[common], help="merge half-tiles and classify the rhombi")
    c.add_argument("input", nargs=1)

    a = sub.add_parser("analyze", parents=[common], help="Delzant descriptor for every tile")
    a.add_argument("input", nargs=1)
    a.add_argument("-o", "--output", required=True)
    a.add_argument("--raw", action="store_true", help="skip rotation and translation normalization")

    r = sub.add_parser("report", parents=[common], help="distinguishing invariants of two descriptors")
    r.add_argument("input", nargs=2)
    r.add_argument("--a-index", dest="index_a", type=_nonneg, default=0, help="entry of the first file")
    r.add_argument("--b-index", dest="index_b", type=_nonneg, default=0, help="entry of the second file")

    s = sub.add_parser("render", parents=[common], help="draw the patch as SVG")
    s.add_argument("input", nargs=1)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--decorations", action="store_true", help="draw the edge arrows")
    s.add_argument("--overlay-moment", dest="overlay_tile", type=_nonneg, metavar="TILE_ID")
    s.add_argument("--grid", type=_grid, default=11)
    return p


def config_from_args(argv: list[str] | None = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    return CliConfig(**{k: v for k, v in vars(ns).items()})


# --- commands --------------------------------------------------------------


def _load_patch(path: str):
    try:
        return read_patch(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", path=path) from exc
    except FormatError as exc:
        raise CliError(f"malformed patch {exc}", path=path, location=exc.location) from exc


def _write(path: str, blob: bytes) -> None:
    try:
        write_bytes(path, blob)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", path=path) from exc


def _merge(p, path: str):
    try:
        return merge_rhombi(p)
    except TilingError as exc:
        raise CliError(f"classification failed in {path}: {exc}", path=path) from exc


def run_gen(cfg: CliConfig, out) -> tuple[int, dict]:
    p = generate(cfg.seed_name, cfg.depth)
    _write(cfg.output, serialize(p))
    acute, obtuse = p.counts()
    tiles, unpaired = merge_rhombi(p)
    thick = sum(1 for t in tiles if t.kind is TileKind.THICK)
    ratio = obtuse / acute if acute else None
    print(f"seed {cfg.seed_name}, depth {cfg.depth}: {len(p.triangles)} triangles -> {cfg.output}", file=out)
    print(f"acute {acute}, obtuse {obtuse}, obtuse/acute {ratio:.9f}" if ratio is not None
          else f"acute {acute}, obtuse {obtuse}", file=out)
    print(f"thick {thick}, thin {len(tiles) - thick}, unpaired halves {len(unpaired)}", file=out)
    return EXIT_OK, {
        "seed": cfg.seed_name, "depth": cfg.depth, "output": cfg.output,
        "acute": acute, "obtuse": obtuse, "ratio": ratio,
        "thick": thick, "thin": len(tiles) - thick, "unpaired": len(unpaired),
    }


def run_validate(cfg: CliConfig, out) -> tuple[int, dict]:
    path = cfg.input[0]
    rep = validate(_load_patch(path))
    if rep.ok:
        print(f"{path}: ok, 0 violations", file=out)
    else:
        print(f"{path}: {rep.violation_count()} violation(s)", file=out)
        for name, items in rep.to_json().items():
            if isinstance(items, list):
                for item in items:
                    print(f"  {name}: {item}", file=out)
    return (EXIT_OK if rep.ok else EXIT_VIOLATIONS), {"input": path, **rep.to_json()}


def run_classify(cfg: CliConfig, out) -> tuple[int, dict]:
    path = cfg.input[0]
    tiles, unpaired = _merge(_load_patch(path), path)
    for i, t in enumerate(tiles):
        print(f"{i} {t.kind.value} {t.k} {list(t.anchor.c)}", file=out)
    thick = sum(1 for t in tiles if t.kind is TileKind.THICK)
    print(f"{len(tiles)} tiles (thick {thick}, thin {len(tiles) - thick}), {len(unpaired)} unpaired halves", file=out)
    return EXIT_OK, {
        "input": path, "tiles": len(tiles), "thick": thick,
        "thin": len(tiles) - thick, "unpaired": len(unpaired),
    }


def run_analyze(cfg: CliConfig, out) -> tuple[int, dict]:
    path = cfg.input[0]
    tiles, _ = _merge(_load_patch(path), path)
    normalized = not cfg.raw
    entries = []
    for i, t in enumerate(tiles):
        try:
            entries.extend(analyze_tiles([t], normalized))
        except (TilingError, UnsupportedSpecError, DegenerateSpecError, AssertionError) as exc:
            raise CliError(f"tile {i} ({t.kind.value} {t.k} {list(t.anchor.c)}): {exc}", tile=i) from exc
    _write(cfg.output, serialize_descriptors(entries, normalized))
    groups = distinct_descriptors(entries)
    print(f"{len(entries)} tiles analyzed -> {cfg.output}", file=out)
    print(f"{len(groups)} distinct {'normalized' if normalized else 'raw'} descriptor(s)", file=out)
    summary = []
    for g in groups:
        d = entries[g["descriptor"]].descriptor
        kinds = "/".join(g["kinds"])
        name = {"thick": "M_R", "thin": "M_r"}.get(kinds, kinds)
        print(f"  {kinds} ({g['count']} tiles) -> {name}: radius^2 = {d.radius_sq} ~ {float(d.radius_sq):.9f}, "
              f"gamma rank {d.gamma_rank}, dimension {d.dimension}", file=out)
        summary.append({"kinds": g["kinds"], "count": g["count"], "radius_sq": ext_to_json(d.radius_sq)})
    return EXIT_OK, {"input": path, "output": cfg.output, "tiles": len(entries), "distinct": summary}


def run_report(cfg: CliConfig, out) -> tuple[int, dict]:
    descs = []
    for path, idx in zip(cfg.input, (cfg.index_a, cfg.index_b)):
        try:
            entries, _ = read_descriptors(path)
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror or exc}", path=path) from exc
        except FormatError as exc:
            raise CliError(f"malformed descriptor file {exc}", path=path) from exc
        if idx >= len(entries):
            raise CliError(f"{path} has {len(entries)} entries; index {idx} is out of range", path=path)
        descs.append(entries[idx].descriptor)
    rep = invariants_report(*descs)
    print(f"radius^2 ratio: {rep.radius_ratio} ~ {float(rep.radius_ratio):.9f}", file=out)
    print(f"area ratio:     {rep.area_ratio} ~ {float(rep.area_ratio):.9f}", file=out)
    print(f"same N: {rep.same_kernel}; same chart groups: {rep.same_chart_groups}; "
          f"same dimension: {rep.same_dimension}", file=out)
    print(f"verdict: {rep.verdict}", file=out)
    return EXIT_OK, {"inputs": cfg.input, **rep.to_json()}


def run_render(cfg: CliConfig, out) -> tuple[int, dict]:
    from .svg import render_patch

    path = cfg.input[0]
    p = _load_patch(path)
    overlay = None
    info: dict = {"input": path, "output": cfg.output}
    if cfg.overlay_tile is not None:
        tiles, _ = _merge(p, path)
        if cfg.overlay_tile >= len(tiles):
            raise CliError(f"tile {cfg.overlay_tile} out of range; {path} has {len(tiles)} tiles", tile=cfg.overlay_tile)
        tile = tiles[cfg.overlay_tile]
        img = moment_image(descriptor_of_tile(tile), cfg.grid)
        if not img.ok:
            raise CliError(f"moment image of tile {cfg.overlay_tile} failed its containment checks")
        overlay = (tile, img.points)
        info.update(overlay_tile=cfg.overlay_tile, grid=cfg.grid, samples=len(img.points), all_inside=img.all_inside)
    svg = render_patch(p, decorations=cfg.decorations, overlay=overlay)
    _write(cfg.output, svg.encode("ascii"))
    print(f"{path} -> {cfg.output}", file=out)
    return EXIT_OK, info


COMMANDS = {
    "gen": run_gen,
    "validate": run_validate,
    "classify": run_classify,
    "analyze": run_analyze,
    "report": run_report,
    "render": run_render,
}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    cfg = config_from_args(argv)
    try:
        code, info = COMMANDS[cfg.command](cfg, out)
        payload = {"command": cfg.command, "ok": code == EXIT_OK, "exit_code": code, **info}
    except CliError as exc:
        print(f"error: {exc}", file=err)
        code = EXIT_ERROR
        payload = {"command": cfg.command, "ok": False, "exit_code": code, "error": str(exc), **exc.details}
    if cfg.json:
        print(json.dumps(payload, sort_keys=True), file=err)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
