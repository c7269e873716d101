"""Integer coordinates over the two pentagonal stars.

Edge directions ``Y*_k`` (points of the dual plane, spanning the quasilattice
R) and facet normals ``Y_k`` (spanning the quasilattice Q) are kept as
separate types.  Both are stored over the indices 1..4; index 0 is
eliminated with ``Y_0 + Y_1 + Y_2 + Y_3 + Y_4 = 0``.

``Y_k`` sits at angle ``2*pi*k/5`` and ``Y*_k`` is ``Y_k`` turned by +90
degrees, so ``<Y*_i, Y_j> = sin(2*pi*(j - i)/5)`` and
``<Y*_i, Y*_j> = cos(2*pi*(j - i)/5)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Tuple

from .golden import GoldenExt, GoldenRat

Coords = Tuple[int, int, int, int]

def canonicalize(c5: Sequence[int]) -> Coords:
    """Drop index 0 from a 5-vector of star coefficients."""
    if len(c5) != 5:
        raise ValueError(f"expected 5 coefficients, got {len(c5)}")
    c0 = c5[0]
    return tuple(c - c0 for c in c5[1:])  # type: ignore[return-value]


def _to5(c: Sequence) -> tuple:
    zero = c[0] - c[0]
    return (zero, *c)


def _check_int4(c) -> Coords:
    c = tuple(c)
    if len(c) != 4 or not all(isinstance(x, int) and not isinstance(x, bool) for x in c):
        raise TypeError(f"expected 4 integer coordinates, got {c!r}")
    return c  # type: ignore[return-value]


# <Y*_i, Y_j> = sin(2 pi (j - i)/5) is a multiple of rho and <Y*_i, Y*_j> = cos(...) lies
# in Q(phi).  The tables hold twice the value, indexed by (j - i) mod 5, as integer
# pairs (a, b) meaning a + b*phi (times rho for pairings).
_PAIR2_BY_OFFSET = ((0, 0), (1, 0), (-1, 1), (1, -1), (-1, 0))
_INNER2_BY_OFFSET = ((2, 0), (-1, 1), (0, -1), (0, -1), (-1, 1))
_PAIR2 = tuple(tuple(_PAIR2_BY_OFFSET[(j - i) % 5] for j in range(1, 5)) for i in range(1, 5))
_INNER2 = tuple(tuple(_INNER2_BY_OFFSET[(j - i) % 5] for j in range(1, 5)) for i in range(1, 5))


def _bilinear2(table, c, d) -> tuple[int, int]:
    a = b = 0
    for i in range(4):
        ci = c[i]
        if not ci:
            continue
        row = table[i]
        for j in range(4):
            dj = d[j]
            if dj:
                e = row[j]
                a += e[0] * ci * dj
                b += e[1] * ci * dj
    return a, b


def _int_sign(a: int, b: int) -> int:
    """Sign of a + b*phi for integers a, b."""
    p, q = 2 * a + b, b
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    d = p * p - 5 * q * q
    return sp * ((d > 0) - (d < 0))


def _half(a, b) -> GoldenRat:
    return GoldenRat(Fraction(a) / 2, Fraction(b) / 2)


def _coords(p) -> tuple:
    if isinstance(p, QuasiPoint):
        return p.c
    if isinstance(p, GoldenQuasiPoint):
        return p.rationals()
    raise TypeError(f"expected a point of the dual plane, got {type(p).__name__}")


@lru_cache(maxsize=None)
def phi_matrix() -> tuple[Coords, ...]:
    """Columns are the coordinates of ``phi * Y*_k`` for k = 1..4.

    Uses ``phi * Y*_k = -(Y*_{k+2} + Y*_{k+3})``, the rotated form of
    ``Y_{k+3} = -Y_{k+2} - phi Y_k``.
    """
    cols = []
    for k in range(1, 5):
        c5 = [0] * 5
        c5[(k + 2) % 5] -= 1
        c5[(k + 3) % 5] -= 1
        cols.append(canonicalize(c5))
    return tuple(cols)


@dataclass(frozen=True, order=True)
class QuasiPoint:
    """``c1 Y*_1 + c2 Y*_2 + c3 Y*_3 + c4 Y*_4`` with integer ``c``."""

    c: Coords = (0, 0, 0, 0)

    def __post_init__(self):
        object.__setattr__(self, "c", _check_int4(self.c))

    @classmethod
    def star(cls, k: int) -> QuasiPoint:
        c5 = [0] * 5
        c5[k % 5] = 1
        return cls(canonicalize(c5))

    @classmethod
    def from5(cls, c5: Sequence[int]) -> QuasiPoint:
        return cls(canonicalize(c5))

    def __add__(self, other: QuasiPoint) -> QuasiPoint:
        if not isinstance(other, QuasiPoint):
            return NotImplemented
        return QuasiPoint(tuple(x + y for x, y in zip(self.c, other.c)))

    def __sub__(self, other: QuasiPoint) -> QuasiPoint:
        if not isinstance(other, QuasiPoint):
            return NotImplemented
        return QuasiPoint(tuple(x - y for x, y in zip(self.c, other.c)))

    def __neg__(self) -> QuasiPoint:
        return QuasiPoint(tuple(-x for x in self.c))

    def scale(self, n: int) -> QuasiPoint:
        return QuasiPoint(tuple(n * x for x in self.c))

    def __bool__(self) -> bool:
        return any(self.c)

    def to_golden(self) -> GoldenQuasiPoint:
        return GoldenQuasiPoint(tuple(GoldenRat(x) for x in self.c))

    def as_qvector(self) -> QVector:
        """Same coefficients over the normal star (rotation by -90 degrees)."""
        return QVector(self.c)

    def rotate(self, s: int) -> QuasiPoint:
        """Rotate by ``2*pi*s/5``: ``Y*_k -> Y*_{k+s}``."""
        return QuasiPoint(canonicalize(_shift5(_to5(self.c), s)))

    def __repr__(self) -> str:
        return f"QuasiPoint{self.c}"


def _rational_form(c: Sequence[GoldenRat]) -> tuple[GoldenRat, ...]:
    """Unique rational coordinates of ``sum c_k Y*_k``.

    ``Y*_1..Y*_4`` are dependent over Q(phi) but independent over Q, so
    ``(a + b phi) Y*_k`` is rewritten as ``a Y*_k + b (phi Y*_k)``.
    """
    m = phi_matrix()
    out = [Fraction(0)] * 4
    for k, x in enumerate(c):
        x = GoldenRat.coerce(x)
        out[k] += x.a
        if x.b:
            col = m[k]
            for i in range(4):
                out[i] += x.b * col[i]
    return tuple(GoldenRat(v) for v in out)


class GoldenQuasiPoint:
    """A Q(phi)-combination of ``Y*_1..Y*_4``.

    Stored in canonical rational form, so equality and hashing are geometric.
    """

    __slots__ = ("c",)

    def __init__(self, c: Sequence[GoldenRat | int | Fraction]) -> None:
        if len(c) != 4:
            raise ValueError("expected 4 coordinates")
        object.__setattr__(self, "c", _rational_form(c))

    def __setattr__(self, name, value):
        raise AttributeError("GoldenQuasiPoint is immutable")

    def rationals(self) -> tuple[Fraction, ...]:
        return tuple(x.a for x in self.c)

    def __add__(self, other):
        if isinstance(other, QuasiPoint):
            other = other.to_golden()
        if not isinstance(other, GoldenQuasiPoint):
            return NotImplemented
        return GoldenQuasiPoint(tuple(x + y for x, y in zip(self.c, other.c)))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QuasiPoint):
            other = other.to_golden()
        if not isinstance(other, GoldenQuasiPoint):
            return NotImplemented
        return GoldenQuasiPoint(tuple(x - y for x, y in zip(self.c, other.c)))

    def __rsub__(self, other):
        if isinstance(other, QuasiPoint):
            return other.to_golden() - self
        return NotImplemented

    def __neg__(self) -> GoldenQuasiPoint:
        return GoldenQuasiPoint(tuple(-x for x in self.c))

    def scale(self, s: GoldenRat | int | Fraction) -> GoldenQuasiPoint:
        s = GoldenRat.coerce(s)
        return GoldenQuasiPoint(tuple(s * x for x in self.c))

    def is_integral(self) -> bool:
        return all(x.a.denominator == 1 for x in self.c)

    def to_quasipoint(self) -> QuasiPoint:
        if not self.is_integral():
            raise ValueError(f"{self!r} is not in the integer quasilattice")
        return QuasiPoint(tuple(int(x.a) for x in self.c))

    def __eq__(self, other) -> bool:
        if isinstance(other, QuasiPoint):
            other = other.to_golden()
        if not isinstance(other, GoldenQuasiPoint):
            return NotImplemented
        return self.c == other.c

    def __hash__(self) -> int:
        if self.is_integral():
            return hash(self.to_quasipoint())
        return hash(self.c)

    def __repr__(self) -> str:
        return f"GoldenQuasiPoint({', '.join(str(x) for x in self.c)})"


@dataclass(frozen=True, order=True)
class QVector:
    """``d1 Y_1 + d2 Y_2 + d3 Y_3 + d4 Y_4`` with integer ``d``."""

    d: Coords = (0, 0, 0, 0)

    def __post_init__(self):
        object.__setattr__(self, "d", _check_int4(self.d))

    @classmethod
    def star(cls, k: int) -> QVector:
        c5 = [0] * 5
        c5[k % 5] = 1
        return cls(canonicalize(c5))

    @classmethod
    def from5(cls, c5: Sequence[int]) -> QVector:
        return cls(canonicalize(c5))

    def __add__(self, other: QVector) -> QVector:
        if not isinstance(other, QVector):
            return NotImplemented
        return QVector(tuple(x + y for x, y in zip(self.d, other.d)))

    def __sub__(self, other: QVector) -> QVector:
        if not isinstance(other, QVector):
            return NotImplemented
        return QVector(tuple(x - y for x, y in zip(self.d, other.d)))

    def __neg__(self) -> QVector:
        return QVector(tuple(-x for x in self.d))

    def scale(self, n: int) -> QVector:
        return QVector(tuple(n * x for x in self.d))

    def __bool__(self) -> bool:
        return any(self.d)

    def rotate(self, s: int) -> QVector:
        """Rotate by ``2*pi*s/5``: ``Y_k -> Y_{k+s}``."""
        return QVector(canonicalize(_shift5(_to5(self.d), s)))

    def star_index(self) -> tuple[int, int] | None:
        """``(sign, k)`` if this vector is ``sign * Y_k``, else None."""
        return _star_index(self.d)

    def __repr__(self) -> str:
        return f"QVector{self.d}"


def _shift5(c5: Sequence, s: int) -> list:
    out = [None] * 5
    for k in range(5):
        out[(k + s) % 5] = c5[k]
    return out


@lru_cache(maxsize=None)
def _star_lookup() -> dict:
    table = {}
    for k in range(5):
        base = QuasiPoint.star(k).c
        table[base] = (1, k)
        table[tuple(-x for x in base)] = (-1, k)
    return table


def _star_index(c: Coords) -> tuple[int, int] | None:
    return _star_lookup().get(tuple(c))


def star_index(p: QuasiPoint) -> tuple[int, int] | None:
    """``(sign, k)`` if ``p`` is ``sign * Y*_k``, else None."""
    return _star_index(p.c)


def pair(p: QuasiPoint | GoldenQuasiPoint, x: QVector) -> GoldenExt:
    """Exact pairing ``<p, X>`` between the dual plane and the plane."""
    if not isinstance(x, QVector):
        raise TypeError(f"pairing needs a QVector, got {type(x).__name__}")
    return GoldenExt(0, _half(*_bilinear2(_PAIR2, _coords(p), x.d)))


def inner(p: QuasiPoint | GoldenQuasiPoint, q: QuasiPoint | GoldenQuasiPoint) -> GoldenRat:
    """Euclidean inner product of two points of the dual plane."""
    return _half(*_bilinear2(_INNER2, _coords(p), _coords(q)))


def cross(p: QuasiPoint | GoldenQuasiPoint, q: QuasiPoint | GoldenQuasiPoint) -> GoldenExt:
    """``det(p, q)``; equals ``<p, q'>`` where ``q'`` is ``q`` turned by -90 degrees."""
    return GoldenExt(0, _half(*_bilinear2(_PAIR2, _coords(p), _coords(q))))


def norm_sq(p: QuasiPoint | GoldenQuasiPoint) -> GoldenRat:
    return inner(p, p)


def orient(p, q, r) -> int:
    """Sign of the turn p -> q -> r (+1 counter-clockwise)."""
    if isinstance(p, QuasiPoint) and isinstance(q, QuasiPoint) and isinstance(r, QuasiPoint):
        u = [x - y for x, y in zip(q.c, p.c)]
        w = [x - y for x, y in zip(r.c, p.c)]
        return _int_sign(*_bilinear2(_PAIR2, u, w))
    return cross(q - p, r - p).sign()


def inner_sign(p: QuasiPoint, q: QuasiPoint) -> int:
    return _int_sign(*_bilinear2(_INNER2, p.c, q.c))


def phi_scale(p: QuasiPoint) -> QuasiPoint:
    """``phi * p``, which stays in the integer quasilattice."""
    m = phi_matrix()
    out = [0, 0, 0, 0]
    for k, ck in enumerate(p.c):
        if ck:
            col = m[k]
            for i in range(4):
                out[i] += col[i] * ck
    return QuasiPoint(tuple(out))


def inv_phi_scale(p: QuasiPoint) -> QuasiPoint:
    """``p / phi = phi*p - p``."""
    return phi_scale(p) - p


def phi_power_scale(p: QuasiPoint, n: int) -> QuasiPoint:
    for _ in range(n):
        p = phi_scale(p)
    for _ in range(-n):
        p = inv_phi_scale(p)
    return p


def star_float(k: int) -> tuple[float, float]:
    """Cartesian ``Y*_k``: angle ``pi/2 + 2*pi*k/5``."""
    t = math.pi / 2 + 2 * math.pi * (k % 5) / 5
    return math.cos(t), math.sin(t)


_STAR_FLOATS = tuple(star_float(k) for k in range(1, 5))


def embed_float(p: QuasiPoint | GoldenQuasiPoint) -> tuple[float, float]:
    """Cartesian coordinates, for rendering and cross-checks only."""
    x = y = 0.0
    for ck, (sx, sy) in zip(p.c, _STAR_FLOATS):
        f = float(ck)
        x += f * sx
        y += f * sy
    return x, y


def normal_float(k: int) -> tuple[float, float]:
    t = 2 * math.pi * (k % 5) / 5
    return math.cos(t), math.sin(t)


def embed_vector_float(x: QVector) -> tuple[float, float]:
    fx = fy = 0.0
    for dk, k in zip(x.d, range(1, 5)):
        sx, sy = normal_float(k)
        fx += dk * sx
        fy += dk * sy
    return fx, fy


def walk_sum(steps: Iterable[tuple[int, int]]) -> QuasiPoint:
    """Endpoint of the edge walk ``sum(sign * Y*_k)`` started at the origin."""
    c5 = [0] * 5
    for sign, k in steps:
        if sign not in (1, -1):
            raise ValueError(f"step sign must be +1 or -1, got {sign!r}")
        c5[k % 5] += sign
    return QuasiPoint.from5(c5)


def walk_steps(path: Sequence[QuasiPoint]) -> list[tuple[int, int]]:
    """Decompose a vertex path into unit steps ``(sign, k)``.

    Raises ValueError if a step is not one of the ten vectors ``+-Y*_k``.
    """
    steps = []
    for a, b in zip(path, path[1:]):
        idx = star_index(b - a)
        if idx is None:
            raise ValueError(f"step {a} -> {b} is not a unit star vector")
        steps.append(idx)
    return steps
