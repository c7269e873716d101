"""Acceptance criteria 1-11.

Each criterion is a list of named sub-checks; the criterion passes when all
of them do.  Every test prints one ``PASS``/``FAIL`` line.  Run this file
directly (``python3 tests/test_acceptance.py``) for the summary without pytest.
"""

from __future__ import annotations

import io as _io
import math
import random
import sys
import tempfile
from collections import deque
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from penrose_quasifold.cli import main as cli_main  # noqa: E402
from penrose_quasifold.delzant import (  # noqa: E402
    PAIRS,
    QuasifoldDescriptor,
    canonical_descriptor,
    canonical_rotation,
    canonical_tile,
    chart_slice_check,
    facet_normals,
    group_N,
    invariants_report,
    kernel_basis,
    moment_image,
    normalized_descriptor,
    polytope_of_tile,
    polytope_vertices,
    reduced_space,
)
from penrose_quasifold.golden import HALF, PHI, GoldenExt, GoldenRat, gf_sign, gx_sign  # noqa: E402
from penrose_quasifold.io import (  # noqa: E402
    analyze_tiles,
    deserialize,
    deserialize_descriptors,
    serialize,
    serialize_descriptors,
)
from penrose_quasifold.quasilattice import QuasiPoint, QVector, embed_float, pair, walk_steps, walk_sum  # noqa: E402
from penrose_quasifold.tiling import (  # noqa: E402
    SEED_NAMES,
    RhombusTile,
    TileKind,
    canonical_tiles,
    classify,
    deflate_patch,
    generate,
    merge_rhombi,
    reflect_tile_in_place,
    seed_patch,
    validate,
)

THICK, THIN = TileKind.THICK, TileKind.THIN
Y = QuasiPoint.star
# the anchoring with the corner where facets 1 and 4 meet at the origin
DELTA_R2 = RhombusTile(THICK, 2, -(Y(2) + Y(3)))
DELTA_R4 = RhombusTile(THIN, 4, QuasiPoint())

_cache: dict = {}


def depth8():
    if "p" not in _cache:
        p = generate("acute", 8)
        _cache["p"] = p
        _cache["tiles"] = merge_rhombi(p)[0]
    return _cache["p"], _cache["tiles"]


def check(name, ok, detail=""):
    return name, bool(ok), detail


# --- criteria ----------------------------------------------------------------


def criterion_1():
    out = [
        check("phi^2 = phi + 1", PHI * PHI == PHI + 1),
        check("1/phi = phi - 1", 1 / PHI == PHI - 1),
    ]
    rng = random.Random(1)
    bad = 0
    for _ in range(5000):
        b = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 1000))
        a = -b * Fraction(float(oracles.MP_PHI)).limit_denominator(10**rng.randint(1, 12))
        a += Fraction(rng.randint(-3, 3), 10**rng.randint(0, 9))
        x = GoldenRat(a, b)
        bad += gf_sign(x) != oracles.mp_sign(oracles.mp_golden(x))
    for _ in range(5000):
        v = GoldenRat(Fraction(rng.randint(-999, 999), rng.randint(1, 99)), Fraction(rng.randint(-999, 999), rng.randint(1, 99)))
        u = GoldenRat(-Fraction(float(oracles.mp_golden(v) * oracles.MP_RHO)).limit_denominator(10**rng.randint(1, 12)),
                      Fraction(rng.randint(-2, 2), 10**rng.randint(0, 12)))
        x = GoldenExt(u, v)
        bad += gx_sign(x) != oracles.mp_sign(oracles.mp_ext(x))
    out.append(check("10^4 near-cancelling signs agree with 50-digit oracle", bad == 0, f"{bad} mismatches"))
    return out


def criterion_2():
    tests = [Y(j).scale(s) for j in range(5) for s in (1, -1)]
    X = QVector.star
    ok3 = ok4a = ok4b = True
    for k in range(5):
        for p in tests:
            ok3 &= pair(p, X(k + 2)) == -pair(p, X(k)) + pair(p, X(k + 1)) * (PHI - 1)
            ok4a &= pair(p, X(k + 3)) == -pair(p, X(k + 2)) - pair(p, X(k)) * PHI
            ok4b &= pair(p, X(k + 4)) == -pair(p, X(k + 2)) * PHI - pair(p, X(k))
    total = QVector()
    for k in range(5):
        total = total + X(k)
    return [
        check("Y_{k+2} = -Y_k + Y_{k+1}/phi for all k", ok3),
        check("Y_{k+3} = -Y_{k+2} - phi Y_k for all k", ok4a),
        check("Y_{k+4} = -phi Y_{k+2} - Y_k for all k", ok4b),
        check("Y_0 + ... + Y_4 = 0", total == QVector() and sum((Y(k) for k in range(5)), QuasiPoint()) == QuasiPoint()),
    ]


def criterion_3():
    p, tiles = depth8()
    verts = p.vertices()
    integral = all(type(c) is int for v in verts for c in v.c)
    classified = sum(1 for t in tiles if classify(t.vertices()) == (t.kind, t.k, t.anchor))
    adj = {v: set() for v in verts}
    for t in p.triangles:
        for a, b in ((t.apex, t.base1), (t.apex, t.base2)):
            adj[a].add(b)
            adj[b].add(a)
    root = min(verts)
    parent = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in sorted(adj[v]):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    walks = len(parent) == len(verts)
    float_ok = True
    for v in verts:
        path = [v]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        walks &= root + walk_sum(walk_steps(path)) == v
        float_ok &= oracles.close(embed_float(v), oracles.point(v.c))
    return [
        check("all vertices have integer Y*-coordinates", integral and float_ok, f"{len(verts)} vertices"),
        check("classify succeeds on 100% of merged rhombi", classified == len(tiles) > 0, f"{classified}/{len(tiles)}"),
        check("BFS edge walks reproduce every vertex", walks),
    ]


def criterion_4():
    out = []
    for name in SEED_NAMES:
        q = seed_patch(name, 6)
        area, ok = q.area(), True
        for _ in range(6):
            q = deflate_patch(q, 1)
            ok &= q.area() == area
        out.append(check(f"area conserved at every step ({name})", ok))
    counts = [generate("acute", n).counts() for n in range(9)]
    out.append(check("counts = [[1,1],[1,2]]^n (1,0) for n = 0..8",
                     counts == [oracles.count_vector(n) for n in range(9)],
                     f"n=4 -> {counts[4]}, n=5 -> {counts[5]}, n=8 -> {counts[8]}"))
    a, o = counts[8]
    out.append(check("|obtuse/acute - phi| < 1e-4 at n = 8", abs(o / a - float(oracles.MP_PHI)) < 1e-4, f"{o / a:.9f}"))
    return out


def criterion_5():
    out = []
    for name, depth in (("acute", 4), ("obtuse", 5), ("sun", 4), ("acute", 8)):
        rep = validate(generate(name, depth))
        out.append(check(f"{name} depth {depth} validates", rep.ok, f"{rep.violation_count()} violations"))
    p = generate("sun", 4)
    tiles, _ = merge_rhombi(p)
    users: dict = {}
    for t in p.triangles:
        for e in ((t.apex, t.base1), (t.apex, t.base2)):
            users[frozenset(e)] = users.get(frozenset(e), 0) + 1
    vs = lambda t: list(zip(t.vertices(), t.vertices()[1:] + t.vertices()[:1]))  # noqa: E731
    interior = next(t for t in tiles if all(users.get(frozenset(e)) == 2 for e in vs(t)))
    rep = validate(reflect_tile_in_place(p, interior))
    out.append(check("reflected tile gives >= 1 decoration mismatch", len(rep.decoration_mismatches) >= 1,
                     f"{len(rep.decoration_mismatches)} mismatches"))
    return out


STATED_R = 0.975229


def criterion_6():
    spec = polytope_of_tile(DELTA_R2)
    lam = spec.offsets
    d = reduced_space(spec)
    lam_float = -oracles.MP_RHO / 2
    n = group_N(spec)
    g14 = d.chart(1, 4).group_gens
    phi = GoldenRat(0, 1)
    z = GoldenRat(0)
    r = math.sqrt(float(d.radius_sq))
    r_oracle = float(mpmath.sqrt(oracles.MP_RHO / 2))
    return [
        check("lambda_2 = lambda_3 = -rho/2 exactly", lam[1] == lam[2] == GoldenExt(0, -HALF) and lam[0] == lam[3] == 0),
        check("lambda_2 ~ -0.951056516 +- 1e-9", abs(float(lam[1]) + 0.951056516) < 1e-9
              and abs(float(lam[1]) - float(lam_float)) < 1e-12, f"{float(lam[1]):.12f}"),
        check("kernel = {e1+e2, e3+e4}", kernel_basis(spec) == [(1, 1, 0, 0), (0, 0, 1, 1)]),
        check("N discrete generators {(0,phi,0,0),(0,0,0,phi)}",
              n.discrete_gens == ((z, phi, z, z), (z, z, z, phi))),
        check("Gamma_{1,4} generators {(phi,0,0,0),(0,0,0,phi)}", g14 == ((phi, z, z, z), (z, z, z, phi))),
        check("R^2 = (0, 1/2) exactly", d.radius_sq == GoldenExt(0, HALF)),
        check("R matches the closed form sqrt(rho/2) to 1e-12", abs(r - r_oracle) < 1e-12, f"R = {r:.9f}"),
        check(f"R ~ {STATED_R} +- 1e-6 (stated constant)", abs(r - STATED_R) < 1e-6,
              f"R = {r:.9f}, off by {abs(r - STATED_R):.1e}; stated digits disagree with R^2 = rho/2"),
        check("dimension = 4", d.dimension == 4),
    ]


def criterion_7():
    thick, thin = polytope_of_tile(DELTA_R2), polytope_of_tile(DELTA_R4)
    lam = thin.offsets
    exact = GoldenExt(0, -1 / (2 * PHI))
    oracle = -oracles.MP_RHO / (2 * oracles.MP_PHI)
    d = reduced_space(thin)
    return [
        check("lambda_2 = lambda_3 = -(1/2phi) rho exactly", lam[1] == lam[2] == exact and lam[0] == lam[3] == 0),
        check("lambda_2 ~ -0.587785 (rounded) and within 1e-9 of the 50-digit value",
              round(float(lam[1]), 6) == -0.587785 and abs(float(lam[1]) - float(oracle)) < 1e-9,
              f"{float(lam[1]):.12f}"),
        check("group_N(thin) = group_N(thick)", group_N(thin) == group_N(thick)),
        check("r^2 = (0, (phi-1)/2) exactly", d.radius_sq == GoldenExt(0, (PHI - 1) / 2)),
    ]


def criterion_8():
    _, tiles = depth8()
    rot_ok = True
    for t in canonical_tiles():
        op = canonical_rotation(t)
        c = canonical_tile(t.kind)
        rot_ok &= {op.apply(x) for x in facet_normals(t.kind, t.k)} == set(facet_normals(c.kind, c.k))
        rot_ok &= normalized_descriptor(t) == canonical_descriptor(t.kind)
    ref = {THICK: reduced_space(polytope_of_tile(DELTA_R2)), THIN: reduced_space(polytope_of_tile(DELTA_R4))}
    descs = [normalized_descriptor(t) for t in tiles]
    match = all(d == ref[t.kind] for d, t in zip(descs, tiles))
    return [
        check("canonical_rotation verified on all 10 canonical tiles", rot_ok),
        check("depth-8 normalized descriptors take exactly 2 values", len(set(descs)) == 2,
              f"{len(tiles)} tiles, {len(set(descs))} values"),
        check("thick -> Delta_R^2, thin -> Delta_r^4", match),
    ]


def criterion_9():
    rep = invariants_report(reduced_space(polytope_of_tile(DELTA_R2)), reduced_space(polytope_of_tile(DELTA_R4)))
    return [
        check("R^2 / r^2 = phi exactly", rep.radius_ratio == PHI),
        check("area ratio = phi exactly", rep.area_ratio == PHI),
        check("same N, chart groups and dimension", rep.same_kernel and rep.same_chart_groups and rep.same_dimension),
    ]


def criterion_10():
    out = []
    for name, tile in (("thick", DELTA_R2), ("thin", DELTA_R4)):
        d = reduced_space(polytope_of_tile(tile))
        img = moment_image(d, 101)
        normals = [oracles.vector(x.d) for x in d.spec.normals]
        corners = oracles.halfplane_vertices(normals, [float(x) for x in d.spec.offsets])
        grid_corners = [img.points[0], img.points[100], img.points[-101], img.points[-1]]
        corner_err = max(min(math.dist(p, c) for c in corners) for p in grid_corners)
        exact_corners = {v for v in polytope_vertices(d.spec)} == set(img.corners.values())
        out.append(check(f"{name}: 101x101 samples inside (exact slacks)", img.all_inside and img.equations_hold))
        out.append(check(f"{name}: corners match polytope vertices to 1e-9",
                         img.corners_exact and exact_corners and img.max_corner_error < 1e-9 and corner_err < 1e-9,
                         f"max error {max(img.max_corner_error, corner_err):.1e}"))
        worst_psi = worst_diag = 0.0
        ok = True
        for pair_ in PAIRS:
            rep = chart_slice_check(d, d.chart(*pair_), samples=1000, seed=10)
            ok &= rep.ok and rep.samples >= 1000
            worst_psi, worst_diag = max(worst_psi, rep.max_psi), max(worst_diag, rep.max_diagram)
        out.append(check(f"{name}: slice check on 10^3 samples per chart to 1e-9", ok,
                         f"max |Psi| {worst_psi:.1e}, max diagram {worst_diag:.1e}"))
    return out


def _cli(*argv):
    code = cli_main(list(argv), _io.StringIO(), _io.StringIO())
    if code != 0:
        raise RuntimeError(f"cli {argv} exited {code}")


def criterion_11():
    rng = random.Random(11)
    ok_p = True
    for _ in range(20):
        p = generate(rng.choice(SEED_NAMES), rng.randint(0, 5))
        blob = serialize(p)
        ok_p &= deserialize(blob) == p and serialize(deserialize(blob)) == blob
    ok_d = True
    tiles = merge_rhombi(generate("sun", 3))[0]
    for _ in range(5):
        sample = rng.sample(tiles, 8)
        for normalized in (True, False):
            entries = analyze_tiles(sample, normalized)
            blob = serialize_descriptors(entries, normalized)
            back = deserialize_descriptors(blob)
            ok_d &= back == (entries, normalized) and serialize_descriptors(*back) == blob
            ok_d &= all(QuasifoldDescriptor.from_json(e.descriptor.to_json()) == e.descriptor for e in entries)
    with tempfile.TemporaryDirectory() as tmp:
        t = Path(tmp)
        runs = []
        for i in (0, 1):
            _cli("gen", "--seed", "sun", "--depth", "4", "-o", str(t / f"p{i}.json"))
            _cli("analyze", str(t / f"p{i}.json"), "-o", str(t / f"d{i}.json"))
            _cli("render", str(t / f"p{i}.json"), "-o", str(t / f"s{i}.svg"), "--decorations", "--overlay-moment", "3")
            runs.append([(t / f"{s}{i}.{e}").read_bytes() for s, e in (("p", "json"), ("d", "json"), ("s", "svg"))])
        same = runs[0] == runs[1]
    return [
        check("patch round trip on 20 random patches", ok_p),
        check("descriptor round trip on random tile samples", ok_d),
        check("repeated gen/analyze/render runs are byte-identical", same),
    ]


CRITERIA = {
    1: ("golden identities and exact signs", criterion_1),
    2: ("star relations", criterion_2),
    3: ("vertices in the quasilattice", criterion_3),
    4: ("substitution counts and areas", criterion_4),
    5: ("matching rules", criterion_5),
    6: ("thick Delzant construction", criterion_6),
    7: ("thin Delzant construction", criterion_7),
    8: ("rotation equivalence over a depth-8 patch", criterion_8),
    9: ("distinguishing invariants", criterion_9),
    10: ("moment image and chart slices", criterion_10),
    11: ("round trips and determinism", criterion_11),
}


def evaluate(n: int):
    title, fn = CRITERIA[n]
    checks = fn()
    ok = all(c[1] for c in checks)
    failed = [f"{name} [{detail}]" if detail else name for name, good, detail in checks if not good]
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}"
    if failed:
        line += " -- failed: " + "; ".join(failed)
    return ok, line, checks


def _report(n, capsys):
    ok, line, checks = evaluate(n)
    with capsys.disabled():
        print("\n" + line)
    return ok, checks


# Criterion 6 states R ~ 0.975229 +- 1e-6, but the exact R^2 = rho/2 it also
# states gives R = 0.9752213, so both cannot hold.  The exact value is checked;
# the stated float is reported as failing rather than adjusted.
KNOWN_FAILING = {6: ("R ~ 0.975229 +- 1e-6 (stated constant)",)}


@pytest.mark.parametrize("n", [n for n in CRITERIA if n not in KNOWN_FAILING])
def test_criterion(n, capsys):
    ok, checks = _report(n, capsys)
    assert ok, [c for c in checks if not c[1]]


@pytest.mark.xfail(strict=True, reason="stated float R = 0.975229 contradicts the exact R^2 = rho/2 (R = 0.9752213)")
def test_criterion_6(capsys):
    ok, checks = _report(6, capsys)
    # everything except the inconsistent stated constant must hold
    others = [c for c in checks if c[0] not in KNOWN_FAILING[6]]
    if not all(c[1] for c in others):
        pytest.fail(f"criterion 6 sub-checks failed: {[c for c in others if not c[1]]}", pytrace=False)
    assert ok


def test_criterion_6_except_stated_float():
    checks = criterion_6()
    others = [c for c in checks if c[0] not in KNOWN_FAILING[6]]
    assert all(c[1] for c in others), [c for c in others if not c[1]]


if __name__ == "__main__":
    results = [evaluate(n) for n in CRITERIA]
    for ok, line, _ in results:
        print(line)
    sys.exit(0 if all(ok for ok, _, _ in results) else 1)
