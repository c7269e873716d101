"""Exact arithmetic in Q(phi) and in its quadratic extension Q(phi)[rho], rho = sqrt(2 + phi).

Every length, pairing and offset produced by this package lives in one of
these two fields.  Signs are decided with integer comparisons only.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def _sign(x: Rational) -> int:
    return (x > 0) - (x < 0)


class GoldenRat:
    """The number ``a + b*phi`` with rational ``a`` and ``b``.

    Instances are immutable and canonical (``Fraction`` keeps lowest terms
    with a positive denominator), so ``==`` and ``hash`` are field equality.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0) -> None:
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("GoldenRat is immutable")

    @classmethod
    def coerce(cls, x: GoldenRat | Rational) -> GoldenRat:
        if isinstance(x, GoldenRat):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to GoldenRat")

    # ring structure
    def __add__(self, other):
        try:
            o = GoldenRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GoldenRat(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> GoldenRat:
        return GoldenRat(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = GoldenRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GoldenRat(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GoldenRat.coerce(other)
        except TypeError:
            return NotImplemented
        # phi^2 = phi + 1
        bb = self.b * o.b
        return GoldenRat(self.a * o.a + bb, self.a * o.b + self.b * o.a + bb)

    __rmul__ = __mul__

    def conjugate(self) -> GoldenRat:
        """Galois conjugate, phi -> 1 - phi."""
        return GoldenRat(self.a + self.b, -self.b)

    def norm(self) -> Fraction:
        """``x * conjugate(x)``, which is rational."""
        return self.a * self.a + self.a * self.b - self.b * self.b

    def inverse(self) -> GoldenRat:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(phi)")
        c = self.conjugate()
        return GoldenRat(c.a / n, c.b / n)

    def __truediv__(self, other):
        try:
            o = GoldenRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GoldenRat.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> GoldenRat:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = GoldenRat(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # order
    def sign(self) -> int:
        return gf_sign(self)

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __abs__(self) -> GoldenRat:
        return -self if self.sign() < 0 else self

    # identity
    def __eq__(self, other) -> bool:
        if isinstance(other, GoldenRat):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * PHI_FLOAT

    def __repr__(self) -> str:
        return f"GoldenRat({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}φ"
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}φ"


class GoldenExt:
    """The number ``u + v*rho`` with ``u, v`` in Q(phi) and ``rho**2 = 2 + phi``."""

    __slots__ = ("u", "v")

    def __init__(self, u: GoldenRat | Rational = 0, v: GoldenRat | Rational = 0) -> None:
        object.__setattr__(self, "u", GoldenRat.coerce(u))
        object.__setattr__(self, "v", GoldenRat.coerce(v))

    def __setattr__(self, name, value):
        raise AttributeError("GoldenExt is immutable")

    @classmethod
    def coerce(cls, x) -> GoldenExt:
        if isinstance(x, GoldenExt):
            return x
        return cls(GoldenRat.coerce(x))

    def __add__(self, other):
        try:
            o = GoldenExt.coerce(other)
        except TypeError:
            return NotImplemented
        return GoldenExt(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self) -> GoldenExt:
        return GoldenExt(-self.u, -self.v)

    def __sub__(self, other):
        try:
            o = GoldenExt.coerce(other)
        except TypeError:
            return NotImplemented
        return GoldenExt(self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GoldenExt.coerce(other)
        except TypeError:
            return NotImplemented
        return GoldenExt(self.u * o.u + self.v * o.v * RHO_SQ, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def conjugate(self) -> GoldenExt:
        """rho -> -rho."""
        return GoldenExt(self.u, -self.v)

    def norm(self) -> GoldenRat:
        return self.u * self.u - self.v * self.v * RHO_SQ

    def inverse(self) -> GoldenExt:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(phi)[rho]")
        ninv = n.inverse()
        return GoldenExt(self.u * ninv, -self.v * ninv)

    def __truediv__(self, other):
        try:
            o = GoldenExt.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GoldenExt.coerce(other) * self.inverse()

    def sign(self) -> int:
        return gx_sign(self)

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __abs__(self) -> GoldenExt:
        return -self if self.sign() < 0 else self

    def __eq__(self, other) -> bool:
        if isinstance(other, GoldenExt):
            return self.u == other.u and self.v == other.v
        if isinstance(other, (GoldenRat, int, Fraction)):
            return not self.v and self.u == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.v:
            return hash(self.u)
        return hash((self.u, self.v))

    def __bool__(self) -> bool:
        return bool(self.u) or bool(self.v)

    def in_base_field(self) -> bool:
        return not self.v

    def rho_coefficient(self) -> GoldenRat:
        """Return ``v`` for a pure multiple ``v*rho``; raise otherwise."""
        if self.u:
            raise ValueError(f"{self!r} is not a multiple of rho")
        return self.v

    def __float__(self) -> float:
        return float(self.u) + float(self.v) * RHO_FLOAT

    def __repr__(self) -> str:
        return f"GoldenExt({self.u!r}, {self.v!r})"

    def __str__(self) -> str:
        if not self.v:
            return str(self.u)
        rho = f"({self.v})ρ"
        return rho if not self.u else f"{self.u} + {rho}"


def gf_sign(x: GoldenRat) -> int:
    """Exact sign of ``a + b*phi``.

    ``2(a + b*phi) = (2a + b) + b*sqrt(5)``; when the two terms disagree in
    sign, compare ``(2a + b)**2`` with ``5 b**2``.
    """
    p = 2 * x.a + x.b
    q = x.b
    sp, sq = _sign(p), _sign(q)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    return sp * _sign(p * p - 5 * q * q)


def gx_sign(x: GoldenExt) -> int:
    """Exact sign of ``u + v*rho`` (rho > 0)."""
    su, sv = gf_sign(x.u), gf_sign(x.v)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv
    return su * gf_sign(x.u * x.u - x.v * x.v * RHO_SQ)


_OPS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def gf_arith(x: GoldenRat, y: GoldenRat, op: str) -> GoldenRat:
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    return _OPS[op](x, y)


def gx_arith(x: GoldenExt, y: GoldenExt, op: str) -> GoldenExt:
    if op not in ("add", "sub", "mul"):
        raise ValueError(f"unknown operation {op!r}")
    return _OPS[op](x, y)


PHI_FLOAT = (1 + 5 ** 0.5) / 2
RHO_FLOAT = (2 + PHI_FLOAT) ** 0.5

ZERO = GoldenRat(0)
ONE = GoldenRat(1)
PHI = GoldenRat(0, 1)
INV_PHI = GoldenRat(-1, 1)  # 1/phi = phi - 1
RHO_SQ = GoldenRat(2, 1)
RHO = GoldenExt(0, 1)
HALF = Fraction(1, 2)

# sin 72 = rho/2 and sin 36 = rho/(2 phi)
SIN_72 = GoldenExt(0, HALF)
SIN_36 = GoldenExt(0, INV_PHI * HALF)
COS_72 = INV_PHI * HALF
COS_144 = -PHI * HALF


# JSON forms: GoldenRat -> [a_num, a_den, b_num, b_den]; GoldenExt -> {"u": ..., "v": ...}

def golden_to_json(x: GoldenRat) -> list[int]:
    return [x.a.numerator, x.a.denominator, x.b.numerator, x.b.denominator]


def golden_from_json(data) -> GoldenRat:
    if (
        not isinstance(data, list)
        or len(data) != 4
        or not all(isinstance(n, int) and not isinstance(n, bool) for n in data)
    ):
        raise ValueError(f"GoldenRat must be a list of 4 integers, got {data!r}")
    if data[1] <= 0 or data[3] <= 0:
        raise ValueError(f"GoldenRat denominators must be positive, got {data!r}")
    return GoldenRat(Fraction(data[0], data[1]), Fraction(data[2], data[3]))


def ext_to_json(x: GoldenExt) -> dict:
    return {"u": golden_to_json(x.u), "v": golden_to_json(x.v)}


def ext_from_json(data) -> GoldenExt:
    if not isinstance(data, dict) or set(data) != {"u", "v"}:
        raise ValueError(f"GoldenExt must be an object with keys u, v, got {data!r}")
    return GoldenExt(golden_from_json(data["u"]), golden_from_json(data["v"]))
