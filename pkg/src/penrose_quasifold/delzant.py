"""The generalized Delzant construction applied to Penrose rhombi.

A tile is the intersection of four halfplanes ``<mu, X_j> >= lambda_j`` with
normals ``X_j`` in the quasilattice Q.  Reducing C^4 by the subgroup
``N = {exp(x) : pi(x) in Q}`` of the torus, where ``pi(e_j) = X_j``, yields a
four-dimensional quasifold whose moment image is the tile.

Everything here is exact except ``chart_slice_check`` and the float output
of ``moment_image``, which are numerical cross-checks.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .golden import GoldenExt, GoldenRat, PHI, ext_from_json, ext_to_json, golden_from_json, golden_to_json
from .quasilattice import (
    GoldenQuasiPoint,
    QuasiPoint,
    QVector,
    _PAIR2,
    _bilinear2,
    _int_sign,
    cross,
    embed_float,
    pair,
    star_float,
)
from .tiling import RhombusTile, TileKind

PAIRS = ((1, 4), (1, 3), (2, 3), (2, 4))
"""Free facet pairs of the four vertex charts, in reporting order."""


class UnsupportedSpecError(ValueError):
    """The facet data is outside the opposite-pair, star-normal scope."""


class DegenerateSpecError(ValueError):
    """The halfplanes do not bound a polygon with nonempty interior."""


GoldenVec = tuple  # 4-tuple of GoldenRat


# --- facet data ------------------------------------------------------------


@dataclass(frozen=True)
class PolytopeSpec:
    """Facets ``(X_j, lambda_j)``; the polytope is ``{mu : <mu, X_j> >= lambda_j}``."""

    facets: tuple[tuple[QVector, GoldenExt], ...]

    @property
    def d(self) -> int:
        return len(self.facets)

    @property
    def normals(self) -> tuple[QVector, ...]:
        return tuple(x for x, _ in self.facets)

    @property
    def offsets(self) -> tuple[GoldenExt, ...]:
        return tuple(lam for _, lam in self.facets)

    def translated(self, w: QuasiPoint | GoldenQuasiPoint) -> PolytopeSpec:
        """The spec of the polytope moved by ``w``."""
        return PolytopeSpec(tuple((x, lam + pair(w, x)) for x, lam in self.facets))

    def rotated(self, s: int) -> PolytopeSpec:
        """Rotate by ``2*pi*s/5``; pairings are rotation invariant, offsets stay put."""
        return PolytopeSpec(tuple((x.rotate(s), lam) for x, lam in self.facets))

    def to_json(self) -> list:
        return [{"X": list(x.d), "lambda": ext_to_json(lam)} for x, lam in self.facets]

    @classmethod
    def from_json(cls, data) -> PolytopeSpec:
        if not isinstance(data, list):
            raise ValueError("spec must be a list of facets")
        facets = []
        for i, f in enumerate(data):
            if not isinstance(f, dict) or set(f) != {"X", "lambda"}:
                raise ValueError(f"facet {i}: expected keys X, lambda")
            facets.append((QVector(tuple(f["X"])), ext_from_json(f["lambda"])))
        return cls(tuple(facets))


def facet_normals(kind: TileKind, k: int) -> tuple[QVector, QVector, QVector, QVector]:
    """``(X_1, X_2, X_3, X_4)`` for a tile of the given kind and orientation.

    Thick ``k``: ``X_1 = Y_k``, ``X_3 = Y_{k+1}``.  Thin ``k``:
    ``X_1 = Y_{k+2}``, ``X_3 = Y_k``.  ``X_2 = -X_1`` and ``X_4 = -X_3``.
    With these labels the thick tile ``k = 2`` has normals ``Y_2, Y_3`` and the
    thin tile ``k = 4`` has normals ``Y_1, Y_4``, each with ``X_1`` first.
    """
    kind = TileKind(kind)
    if kind is TileKind.THICK:
        a, b = k, k + 1
    else:
        a, b = k + 2, k
    x1, x3 = QVector.star(a), QVector.star(b)
    return (x1, -x1, x3, -x3)


def polytope_of_tile(t: RhombusTile) -> PolytopeSpec:
    """Facet normals of the tile with the tightest offsets over its vertices."""
    verts = t.vertices()
    facets = []
    for x in facet_normals(t.kind, t.k):
        facets.append((x, min(pair(v, x) for v in verts)))
    return PolytopeSpec(tuple(facets))


def _check_parallelogram(spec: PolytopeSpec) -> None:
    if spec.d != 4:
        raise UnsupportedSpecError(f"expected 4 facets, got {spec.d}")
    x1, x2, x3, x4 = spec.normals
    if x2 != -x1 or x4 != -x3:
        raise UnsupportedSpecError("facets must come in opposite pairs X2 = -X1, X4 = -X3")
    if not _det(x1, x3):
        raise DegenerateSpecError("facet normals X1 and X3 are parallel")
    for lam in spec.offsets:
        if lam.u:
            raise UnsupportedSpecError(f"offset {lam} is not a multiple of rho")


def _det(x: QVector, y: QVector) -> GoldenExt:
    # turning both by +90 degrees keeps the determinant
    return cross(QuasiPoint(x.d), QuasiPoint(y.d))


# --- vertices --------------------------------------------------------------

_BASIS = (QuasiPoint.star(1), QuasiPoint.star(2))


class _FacetSolver:
    """Solves ``<mu, X_i> = a, <mu, X_j> = b`` with ``mu = alpha Y*_1 + beta Y*_2``.

    Every pairing with ``Y*_1`` or ``Y*_2`` is a rho-multiple, so after dividing
    out rho the system lives in Q(phi).
    """

    def __init__(self, xi: QVector, xj: QVector) -> None:
        m = [[pair(b, x).rho_coefficient() for b in _BASIS] for x in (xi, xj)]
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if not det:
            raise DegenerateSpecError(f"normals {xi} and {xj} are parallel")
        inv = det.inverse()
        self._inv = (m[1][1] * inv, -m[0][1] * inv, -m[1][0] * inv, m[0][0] * inv)

    def solve(self, a: GoldenExt, b: GoldenExt) -> GoldenQuasiPoint:
        ra, rb = a.rho_coefficient(), b.rho_coefficient()
        i11, i12, i21, i22 = self._inv
        alpha = i11 * ra + i12 * rb
        beta = i21 * ra + i22 * rb
        return GoldenQuasiPoint((alpha, beta, 0, 0))


def vertex_of(spec: PolytopeSpec, i: int, j: int) -> GoldenQuasiPoint:
    """The point where facets ``i`` and ``j`` (1-based) are both active."""
    (xi, li), (xj, lj) = spec.facets[i - 1], spec.facets[j - 1]
    try:
        return _FacetSolver(xi, xj).solve(li, lj)
    except ValueError as exc:
        if isinstance(exc, DegenerateSpecError):
            raise
        raise UnsupportedSpecError(str(exc)) from exc


def slacks(spec: PolytopeSpec, mu: QuasiPoint | GoldenQuasiPoint) -> tuple[GoldenExt, ...]:
    return tuple(pair(mu, x) - lam for x, lam in spec.facets)


_CYCLE = ((1, 3), (1, 4), (2, 4), (2, 3))


def polytope_vertices(spec: PolytopeSpec) -> list[GoldenQuasiPoint]:
    """The four corners, in cyclic order (1,3), (1,4), (2,4), (2,3)."""
    _check_parallelogram(spec)
    verts = [vertex_of(spec, i, j) for i, j in _CYCLE]
    for v in verts:
        if any(s.sign() < 0 for s in slacks(spec, v)):
            raise DegenerateSpecError("the halfplanes have empty intersection")
    if len(set(verts)) != 4:
        raise DegenerateSpecError("the polytope has empty interior")
    return verts


def polygon_area(verts: Sequence[GoldenQuasiPoint]) -> GoldenExt:
    """Exact shoelace area."""
    acc = GoldenExt(0)
    for p, q in zip(verts, list(verts[1:]) + [verts[0]]):
        acc = acc + cross(p, q)
    acc = acc * GoldenRat(Fraction(1, 2))
    return abs(acc)


def normalize_spec(spec: PolytopeSpec) -> PolytopeSpec:
    """Translate so the corner where facets 1 and 4 meet is the origin (lambda_1 = lambda_4 = 0)."""
    _check_parallelogram(spec)
    return spec.translated(-vertex_of(spec, 1, 4))


# --- the group N -----------------------------------------------------------


def _nullspace(rows: list[list[GoldenRat]], n: int) -> list[list[GoldenRat]]:
    """Basis of ``{x : rows . x = 0}`` over Q(phi) via reduced row echelon form."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [GoldenRat(0)] * n
        v[free] = GoldenRat(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def _coords_in(x1: QVector, x3: QVector, vs: Sequence[QVector]) -> list[tuple[GoldenRat, GoldenRat]]:
    """``(alpha, beta)`` with ``v = alpha X1 + beta X3`` for each ``v``, via dual pairings.

    ``w1``, ``w3`` are ``X1``, ``X3`` turned by +90 degrees, so ``<w3, X3> = 0``
    and ``<w1, X1> = 0``; all pairings are rho-multiples, so the quotients lie in Q(phi).
    """
    w1 = QuasiPoint(x1.d)
    w3 = QuasiPoint(x3.d)
    inv_a = pair(w3, x1).rho_coefficient().inverse()
    inv_b = pair(w1, x3).rho_coefficient().inverse()
    return [
        (pair(w3, v).rho_coefficient() * inv_a, pair(w1, v).rho_coefficient() * inv_b)
        for v in vs
    ]


def kernel_basis(spec: PolytopeSpec) -> list[tuple[Fraction, ...]]:
    """Exact basis of ``ker(pi)``, ``pi(e_j) = X_j``."""
    _check_parallelogram(spec)
    x1, _, x3, _ = spec.normals
    cols = _coords_in(x1, x3, spec.normals)
    rows = [[c[0] for c in cols], [c[1] for c in cols]]
    out = []
    for v in _nullspace(rows, spec.d):
        if not all(x.is_rational() for x in v):
            raise UnsupportedSpecError("kernel is not rational")
        out.append(tuple(x.a for x in v))
    return out


def hermite_normal_form(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix; zero rows dropped."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        # Euclid on column c among rows r.. until a single nonzero entry remains
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[p] = m[p], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if not m[r][c]:
            continue
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
    return [row for row in m if any(row)]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _canonical_lattice(gens: list[tuple[GoldenRat, GoldenRat]]) -> list[tuple[GoldenRat, GoldenRat]]:
    """Canonical generators of ``span_Z(gens) + Z^2`` modulo ``Z^2``.

    Each element ``(a1 + b1 phi, a2 + b2 phi)`` is the rational vector
    ``(b1, b2, a1, a2)``; the irrational slots come first so the echelon form
    isolates the phi-parts, then rational parts are reduced into ``[0, 1)``.
    """
    vecs = [(x.b, y.b, x.a, y.a) for x, y in gens]
    vecs += [(0, 0, 1, 0), (0, 0, 0, 1)]
    den = 1
    for v in vecs:
        for q in v:
            den = _lcm(den, Fraction(q).denominator)
    ints = [[int(Fraction(q) * den) for q in v] for v in vecs]
    out = []
    for row in hermite_normal_form(ints):
        b1, b2, a1, a2 = (Fraction(q, den) for q in row)
        a1, a2 = a1 % 1, a2 % 1
        if b1 == b2 == a1 == a2 == 0:
            continue
        out.append((GoldenRat(a1, b1), GoldenRat(a2, b2)))
    return out


def _module_M(spec: PolytopeSpec) -> list[tuple[GoldenRat, GoldenRat]]:
    """Generators of ``{(alpha, beta) : alpha X1 + beta X3 in Q}``."""
    x1, _, x3, _ = spec.normals
    return _coords_in(x1, x3, [QVector.star(k) for k in range(1, 5)])


def _place(slots: Sequence[int], values: Sequence[GoldenRat]) -> GoldenVec:
    v = [GoldenRat(0)] * 4
    for s, x in zip(slots, values):
        v[s - 1] = x
    return tuple(v)


@dataclass(frozen=True)
class NDescriptor:
    """``N = exp(n) . {exp(g) : g in discrete_gens}`` inside ``T^4 = R^4/Z^4``."""

    continuous_basis: tuple[tuple[Fraction, ...], ...]
    discrete_gens: tuple[GoldenVec, ...]

    def to_json(self) -> dict:
        return {
            "continuous_basis": [[[q.numerator, q.denominator] for q in v] for v in self.continuous_basis],
            "discrete_gens": [[golden_to_json(x) for x in g] for g in self.discrete_gens],
        }

    @classmethod
    def from_json(cls, data) -> NDescriptor:
        _require_keys(data, {"continuous_basis", "discrete_gens"}, "kernel")
        basis = tuple(tuple(_fraction_from_json(q) for q in v) for v in data["continuous_basis"])
        gens = tuple(_golden_vec_from_json(g) for g in data["discrete_gens"])
        return cls(basis, gens)


def group_N(spec: PolytopeSpec) -> NDescriptor:
    """``{x in R^4 : pi(x) in Q}`` modulo ``Z^4``.

    With ``X2 = -X1`` and ``X4 = -X3``, ``pi(s, s + alpha, t, t + beta)`` is
    ``-(alpha X1 + beta X3)``, so the discrete part is ``(0, alpha, 0, beta)``
    for ``(alpha, beta)`` in the module M of coordinates of Q in the basis X1, X3.
    """
    kernel = tuple(kernel_basis(spec))
    gens = _canonical_lattice(_module_M(spec))
    return NDescriptor(kernel, tuple(_place((2, 4), g) for g in gens))


def _gamma_generators(module: list, i: int, j: int) -> tuple[GoldenVec, ...]:
    """Generators of ``N`` intersected with the torus supported on slots ``i, j``.

    For ``x = (s, s + alpha, t, t + beta)`` the slots outside ``{i, j}`` must
    be integers, which fixes ``s`` and ``t`` modulo Z; what is left in slot
    ``i`` is ``alpha`` (i = 2) or ``-alpha`` (i = 1), and likewise for ``j``.
    """
    si = 1 if i == 2 else -1
    sj = 1 if j == 4 else -1
    flipped = [(a * si, b * sj) for a, b in module]
    return tuple(_place((i, j), g) for g in _canonical_lattice(flipped))


# --- charts and descriptors ------------------------------------------------


@dataclass(frozen=True)
class ChartData:
    """Local model ``(B x B)/Gamma_{i,j}`` around the vertex where facets i, j are active."""

    vertex: GoldenQuasiPoint
    free_pair: tuple[int, int]
    ball_radius_sq: GoldenExt
    group_gens: tuple[GoldenVec, ...]

    def to_json(self) -> dict:
        return {
            "pair": list(self.free_pair),
            "vertex": [golden_to_json(x) for x in self.vertex.c],
            "radius_sq": ext_to_json(self.ball_radius_sq),
            "gens": [[golden_to_json(x) for x in g] for g in self.group_gens],
        }

    @classmethod
    def from_json(cls, data) -> ChartData:
        _require_keys(data, {"pair", "vertex", "radius_sq", "gens"}, "chart")
        pair_ = tuple(data["pair"])
        if pair_ not in PAIRS:
            raise ValueError(f"chart pair {list(pair_)} is not one of {[list(p) for p in PAIRS]}")
        return cls(
            GoldenQuasiPoint(_golden_vec_from_json(data["vertex"])),
            pair_,
            ext_from_json(data["radius_sq"]),
            tuple(_golden_vec_from_json(g) for g in data["gens"]),
        )


def radius_sq(spec: PolytopeSpec) -> GoldenExt:
    """Squared sphere radius of the level set ``Psi^{-1}(0)``: ``-(lambda_1 + lambda_2)``."""
    _check_parallelogram(spec)
    lam = spec.offsets
    r1, r2 = -(lam[0] + lam[1]), -(lam[2] + lam[3])
    if r1 != r2:
        raise UnsupportedSpecError(f"facet widths {r1} and {r2} differ; not a rhombus")
    if r1.sign() <= 0:
        raise DegenerateSpecError("the polytope has empty interior")
    return r1


def chart_groups(spec: PolytopeSpec, kernel: NDescriptor | None = None) -> list[ChartData]:
    """The four vertex charts in the order (1,4), (1,3), (2,3), (2,4).

    Gamma_{i,j} is read off from the discrete part of N: its slots 2 and 4
    carry the module M (together with Z^2, which is added back here).
    """
    if kernel is None:
        kernel = group_N(spec)
    r2 = radius_sq(spec)
    module = [(g[1], g[3]) for g in kernel.discrete_gens]
    return [
        ChartData(vertex_of(spec, i, j), (i, j), r2, _gamma_generators(module, i, j))
        for i, j in PAIRS
    ]


@dataclass(frozen=True)
class QuasifoldDescriptor:
    spec: PolytopeSpec
    kernel: NDescriptor
    gamma_rank: int
    charts: tuple[ChartData, ...]
    radius_sq: GoldenExt
    polytope_area: GoldenExt
    dimension: int

    def chart(self, i: int, j: int) -> ChartData:
        for c in self.charts:
            if c.free_pair == (i, j):
                return c
        raise KeyError((i, j))

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "kernel": self.kernel.to_json(),
            "gamma_rank": self.gamma_rank,
            "charts": [c.to_json() for c in self.charts],
            "radius_sq": ext_to_json(self.radius_sq),
            "polytope_area": ext_to_json(self.polytope_area),
            "dimension": self.dimension,
        }

    @classmethod
    def from_json(cls, data) -> QuasifoldDescriptor:
        keys = {"spec", "kernel", "gamma_rank", "charts", "radius_sq", "polytope_area", "dimension"}
        _require_keys(data, keys, "descriptor")
        for key in ("gamma_rank", "dimension"):
            if not isinstance(data[key], int) or isinstance(data[key], bool):
                raise ValueError(f"descriptor.{key} must be an integer")
        return cls(
            PolytopeSpec.from_json(data["spec"]),
            NDescriptor.from_json(data["kernel"]),
            data["gamma_rank"],
            tuple(ChartData.from_json(c) for c in data["charts"]),
            ext_from_json(data["radius_sq"]),
            ext_from_json(data["polytope_area"]),
            data["dimension"],
        )


def reduced_space(spec: PolytopeSpec) -> QuasifoldDescriptor:
    """Assemble the descriptor of the reduced space ``Psi^{-1}(0)/N``."""
    kernel = group_N(spec)
    charts = tuple(chart_groups(spec, kernel))
    area = polygon_area(polytope_vertices(spec))
    dim = 2 * spec.d - 2 * len(kernel.continuous_basis)
    return QuasifoldDescriptor(
        spec, kernel, len(kernel.discrete_gens), charts, radius_sq(spec), area, dim
    )


def descriptor_of_tile(t: RhombusTile) -> QuasifoldDescriptor:
    return reduced_space(polytope_of_tile(t))


# --- rotation equivalence --------------------------------------------------


@dataclass(frozen=True)
class SymmetryOp:
    """Index map ``k -> k + shift (mod 5)``, followed by ``k -> -k`` if ``flip``."""

    shift: int
    flip: bool = False

    def apply_index(self, k: int) -> int:
        k = (k + self.shift) % 5
        return (-k) % 5 if self.flip else k

    def apply(self, x: QVector) -> QVector:
        y = x.rotate(self.shift)
        if self.flip:
            y = QVector.from5([(0, *y.d)[(-k) % 5] for k in range(5)])
        return y


CANONICAL_K = {TileKind.THICK: 2, TileKind.THIN: 4}


def canonical_tile(kind: TileKind) -> RhombusTile:
    """``Delta_R^2`` (thick) or ``Delta_r^4`` (thin), anchored at the origin."""
    kind = TileKind(kind)
    return RhombusTile(kind, CANONICAL_K[kind], QuasiPoint())


def canonical_rotation(t: RhombusTile) -> SymmetryOp:
    """The rotation of the star taking ``t``'s normals to the canonical tile's.

    Checked exactly: the normal sets correspond and the inverse rotation maps
    the canonical tile onto ``t`` up to translation.
    """
    op = SymmetryOp((CANONICAL_K[t.kind] - t.k) % 5)
    canon = canonical_tile(t.kind)
    if {op.apply(x) for x in facet_normals(t.kind, t.k)} != set(facet_normals(canon.kind, canon.k)):
        raise AssertionError(f"rotation {op} does not match the normals of {t}")
    back = canon.rotated(-op.shift % 5)
    offset = t.anchor - back.anchor
    if {v + offset for v in back.vertices()} != set(t.vertices()):
        raise AssertionError(f"rotation {op} does not carry the canonical tile onto {t}")
    return op


def normalized_descriptor(t: RhombusTile) -> QuasifoldDescriptor:
    """Descriptor after rotating to the canonical orientation and translating to lambda_1 = lambda_4 = 0."""
    op = canonical_rotation(t)
    spec = polytope_of_tile(t).rotated(op.shift)
    return reduced_space(normalize_spec(spec))


def canonical_descriptor(kind: TileKind) -> QuasifoldDescriptor:
    return reduced_space(normalize_spec(polytope_of_tile(canonical_tile(kind))))


# --- distinguishing invariants ---------------------------------------------


@dataclass(frozen=True)
class InvariantsReport:
    radius_ratio: GoldenRat
    area_ratio: GoldenRat
    same_kernel: bool
    same_chart_groups: bool
    same_dimension: bool
    verdict: str

    def to_json(self) -> dict:
        return {
            "radius_ratio": golden_to_json(self.radius_ratio),
            "radius_ratio_float": round(float(self.radius_ratio), 12),
            "area_ratio": golden_to_json(self.area_ratio),
            "area_ratio_float": round(float(self.area_ratio), 12),
            "same_kernel": self.same_kernel,
            "same_chart_groups": self.same_chart_groups,
            "same_dimension": self.same_dimension,
            "verdict": self.verdict,
        }


def _ratio(x: GoldenExt, y: GoldenExt) -> GoldenRat:
    q = x / y
    if not q.in_base_field():
        raise ValueError(f"ratio {q} is not in Q(phi)")
    return q.u


def _chart_presentation(d: QuasifoldDescriptor) -> tuple:
    return tuple((c.free_pair, c.group_gens) for c in d.charts)


def invariants_report(a: QuasifoldDescriptor, b: QuasifoldDescriptor) -> InvariantsReport:
    rr = _ratio(a.radius_sq, b.radius_sq)
    ar = _ratio(a.polytope_area, b.polytope_area)
    same_kernel = a.kernel == b.kernel
    same_charts = _chart_presentation(a) == _chart_presentation(b)
    same_dim = a.dimension == b.dimension
    groups_agree = same_kernel and same_charts and same_dim and a.gamma_rank == b.gamma_rank
    if groups_agree and rr == 1 and ar == 1:
        verdict = "identical: same group data and same radius and area"
    elif groups_agree and rr == ar and rr in (PHI, PHI.inverse()):
        verdict = (
            f"same N and chart groups (consistent with diffeomorphic); "
            f"radius and area ratio exactly {rr}, so not symplectomorphic"
        )
    elif groups_agree:
        verdict = f"same group data; radius ratio {rr}, area ratio {ar}"
    else:
        verdict = "group data differ"
    return InvariantsReport(rr, ar, same_kernel, same_charts, same_dim, verdict)


# --- moment image and chart slices ----------------------------------------


@dataclass
class MomentImage:
    grid: int
    points: list[tuple[float, float]]
    corners: dict[tuple[int, int], GoldenQuasiPoint]
    all_inside: bool
    equations_hold: bool
    corners_exact: bool
    max_corner_error: float

    @property
    def ok(self) -> bool:
        return (
            self.all_inside
            and self.equations_hold
            and self.corners_exact
            and self.max_corner_error < 1e-9
        )


def moment_image(desc: QuasifoldDescriptor, m: int) -> MomentImage:
    """Images ``mu`` of level-set points sampled on an ``m x m`` grid of actions.

    ``|z_1|^2 = R^2 u``, ``|z_2|^2 = R^2 (1-u)``, ``|z_3|^2 = R^2 v``,
    ``|z_4|^2 = R^2 (1-v)`` with ``u = i/(m-1)``, ``v = j/(m-1)`` exact.
    ``mu`` solves ``<mu, X_1> = |z_1|^2 + lambda_1`` and
    ``<mu, X_3> = |z_3|^2 + lambda_3``; since both equations are affine in
    ``(u, v)``, ``(m-1) D mu`` has integer coordinates for a fixed ``D``, and
    all four equations and slack signs are then checked exactly in integers.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise ValueError(f"grid must be an integer >= 2, got {m!r}")
    spec = desc.spec
    _check_parallelogram(spec)
    (x1, l1), (_, _), (x3, l3), (_, _) = spec.facets
    r2 = desc.radius_sq
    solver = _FacetSolver(x1, x3)
    origin = solver.solve(l1, l3)
    du = solver.solve(l1 + r2, l3) - origin
    dv = solver.solve(l1, l3 + r2) - origin
    den = 1
    for pt in (origin, du, dv):
        for q in pt.rationals():
            den = _lcm(den, q.denominator)
    n = m - 1
    base = [int(q * den) * n for q in origin.rationals()]
    step_u = [int(q * den) for q in du.rationals()]
    step_v = [int(q * den) for q in dv.rationals()]
    # 2 (m-1) D times the rho-coefficients of lambda_j and R^2
    scale = 2 * n * den
    lam2 = [lam.rho_coefficient() * scale for lam in spec.offsets]
    rr2 = r2.rho_coefficient() * 2 * den
    if not all(x.a.denominator == x.b.denominator == 1 for x in lam2 + [rr2]):
        raise DegenerateSpecError("offsets are not compatible with the grid scaling")
    lam2 = [(int(x.a), int(x.b)) for x in lam2]
    rr2 = (int(rr2.a), int(rr2.b))
    normals = [x.d for x in spec.normals]
    stars = [star_float(k) for k in range(1, 5)]
    points: list[tuple[float, float]] = []
    all_inside = equations_hold = True
    for i in range(m):
        for j in range(m):
            c = [b + i * su + j * sv for b, su, sv in zip(base, step_u, step_v)]
            # actions |z_j|^2 scaled by (m-1): R^2 i, R^2 (n-i), R^2 j, R^2 (n-j)
            acts = (i, n - i, j, n - j)
            for d, (la, lb), t in zip(normals, lam2, acts):
                a, b = _bilinear2(_PAIR2, c, d)
                sa, sb = a - la, b - lb
                if (sa, sb) != (rr2[0] * t, rr2[1] * t):
                    equations_hold = False
                if _int_sign(sa, sb) < 0:
                    all_inside = False
            f = n * den
            points.append((
                sum(ck * sx for ck, (sx, _) in zip(c, stars)) / f,
                sum(ck * sy for ck, (_, sy) in zip(c, stars)) / f,
            ))
    corners = {
        (1, 3): (0, origin),
        (2, 3): (n * m, origin + du),
        (1, 4): (n, origin + dv),
        (2, 4): (n * m + n, origin + du + dv),
    }
    corners_exact = True
    err = 0.0
    out = {}
    for (fi, fj), (idx, pt) in corners.items():
        v = vertex_of(spec, fi, fj)
        corners_exact &= pt == v
        out[(fi, fj)] = pt
        (px, py), (vx, vy) = points[idx], embed_float(v)
        err = max(err, math.hypot(px - vx, py - vy))
    return MomentImage(m, points, out, all_inside, equations_hold, corners_exact, err)


@dataclass
class SliceReport:
    pair: tuple[int, int]
    samples: int
    max_psi: float
    max_diagram: float
    tol: float = 1e-9

    @property
    def ok(self) -> bool:
        return self.max_psi < self.tol and self.max_diagram < self.tol


def _hopf(a: complex, b: complex, radius: float) -> tuple[complex, float]:
    return 2 * a * b.conjugate() / radius, (abs(b) ** 2 - abs(a) ** 2) / radius


def _sphere_chart(z: complex, first_slot: bool, radius: float) -> tuple[complex, float]:
    """Inverse stereographic image of the ball coordinate ``z`` on ``S^2_R``.

    The first slot of a factor parametrizes the sphere minus the south pole,
    the second slot the sphere minus the north pole.
    """
    s = math.sqrt(max(radius * radius - abs(z) ** 2, 0.0))
    if first_slot:
        w = z / s
        n = abs(w) ** 2
        return radius * 2 * w / (1 + n), radius * (1 - n) / (1 + n)
    w = z.conjugate() / s
    n = abs(w) ** 2
    return radius * 2 * w / (1 + n), radius * (n - 1) / (1 + n)


def slice_map(chart: ChartData, zi: complex, zj: complex) -> tuple[complex, complex, complex, complex]:
    """The slice ``(z_i, z_j) -> z`` in ``Psi^{-1}(0)``: partners get ``sqrt(R^2 - |z|^2)``."""
    r2 = float(chart.ball_radius_sq)
    z = [0j] * 4
    i, j = chart.free_pair
    for slot, val in ((i, zi), (j, zj)):
        partner = slot + 1 if slot % 2 else slot - 1
        z[slot - 1] = val
        z[partner - 1] = complex(math.sqrt(max(r2 - abs(val) ** 2, 0.0)))
    return tuple(z)  # type: ignore[return-value]


def psi(desc: QuasifoldDescriptor, z: Sequence[complex]) -> tuple[float, float]:
    """Moment map of the N-action on C^4, as the two sphere equations."""
    lam = [float(x) for x in desc.spec.offsets]
    n = [abs(x) ** 2 for x in z]
    return n[0] + n[1] + lam[0] + lam[1], n[2] + n[3] + lam[2] + lam[3]


def chart_slice_check(
    desc: QuasifoldDescriptor,
    chart: ChartData,
    samples: int = 1000,
    seed: int = 0,
    boundary: bool = True,
) -> SliceReport:
    """Check ``Psi o slice = 0`` and that the slice commutes with the sphere charts.

    Points ``(z_i, z_j)`` are drawn uniformly from the ball of radius R; with
    ``boundary`` a few extra samples approach ``|z| = R`` from inside.
    """
    rng = random.Random(seed)
    radius = math.sqrt(float(chart.ball_radius_sq))
    i, j = chart.free_pair
    pts = []
    for _ in range(samples):
        pts.append(tuple(radius * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random()) for _ in range(2)))
    if boundary:
        for eps in (1e-3, 1e-6, 1e-9):
            r = radius * (1 - eps)
            pts.append((complex(r), 0j))
            pts.append((0j, r * cmath.exp(0.7j)))
    max_psi = max_diag = 0.0
    for zi, zj in pts:
        z = slice_map(chart, zi, zj)
        p = psi(desc, z)
        max_psi = max(max_psi, abs(p[0]), abs(p[1]))
        for slot, val in ((i, zi), (j, zj)):
            first = slot % 2 == 1
            a, b = (z[slot - 1], z[slot]) if first else (z[slot - 2], z[slot - 1])
            hw, hh = _hopf(a, b, radius)
            cw, ch = _sphere_chart(val, first, radius)
            max_diag = max(max_diag, abs(hw - cw), abs(hh - ch))
    return SliceReport((i, j), len(pts), max_psi, max_diag)


# --- json helpers ----------------------------------------------------------


def _require_keys(data, keys: set, what: str) -> None:
    if not isinstance(data, dict):
        raise ValueError(f"{what} must be an object")
    extra, missing = set(data) - keys, keys - set(data)
    if extra:
        raise ValueError(f"{what}: unknown field(s) {sorted(extra)}")
    if missing:
        raise ValueError(f"{what}: missing field(s) {sorted(missing)}")


def _fraction_from_json(q) -> Fraction:
    if (
        not isinstance(q, list)
        or len(q) != 2
        or not all(isinstance(n, int) and not isinstance(n, bool) for n in q)
        or q[1] <= 0
    ):
        raise ValueError(f"rational must be [num, den] with den > 0, got {q!r}")
    return Fraction(q[0], q[1])


def _golden_vec_from_json(v) -> GoldenVec:
    if not isinstance(v, list) or len(v) != 4:
        raise ValueError(f"expected a list of 4 golden numbers, got {v!r}")
    return tuple(golden_from_json(x) for x in v)
