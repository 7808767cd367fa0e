"""Exact arithmetic in multiquadratic real fields.

A :class:`Scalar` is a finite sum ``sum_d q_d * sqrt(d)`` with rational
coefficients ``q_d`` and squarefree positive integer keys ``d`` (``d == 1``
is the rational part).  The square roots of distinct squarefree integers
are linearly independent over the rationals, so the coordinate map is a
canonical form: structural equality is numeric equality.

Signs are decided by integer interval arithmetic at doubling precision
after an exact zero test, which always terminates.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Scalar",
    "Number",
    "as_scalar",
    "sqrt_rational",
    "squarefree_decompose",
    "dot",
    "parse_scalar",
    "format_scalar",
    "scalar_to_json",
    "scalar_from_json",
]

Number = Union[int, Fraction, "Scalar"]

INITIAL_BITS = 64
MAX_BITS = 1 << 16


@lru_cache(maxsize=4096)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=4096)
def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(g, d)`` with ``n == g*g*d`` and ``d`` squarefree."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    g, d = 1, 1
    factors = _prime_factors(n)
    i = 0
    while i < len(factors):
        p = factors[i]
        j = i
        while j < len(factors) and factors[j] == p:
            j += 1
        e = j - i
        g *= p ** (e // 2)
        if e % 2:
            d *= p
        i = j
    return g, d


def _is_squarefree(d: int) -> bool:
    return d > 0 and squarefree_decompose(d)[0] == 1


def _key_product(d1: int, d2: int) -> tuple[int, int]:
    # sqrt(d1)*sqrt(d2) = g*sqrt((d1/g)*(d2/g)) for squarefree d1, d2
    g = math.gcd(d1, d2)
    return g, (d1 // g) * (d2 // g)


class Scalar:
    """Immutable element of a multiquadratic extension of the rationals."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coords: Mapping[int, Fraction | int] | None = None) -> None:
        c: dict[int, Fraction] = {}
        if coords:
            for d, q in coords.items():
                q = Fraction(q)
                if q == 0:
                    continue
                if not _is_squarefree(d):
                    raise ValueError(f"sqrt key {d} is not a squarefree positive integer")
                c[d] = q
        self._c = c
        self._hash: int | None = None

    @classmethod
    def _raw(cls, c: dict[int, Fraction]) -> Scalar:
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q: int | Fraction) -> Scalar:
        q = Fraction(q)
        return cls._raw({1: q} if q else {})

    @classmethod
    def sqrt(cls, d: int) -> Scalar:
        """``sqrt(d)`` for a non-negative integer ``d``."""
        return sqrt_rational(Fraction(d))

    # -- inspection ---------------------------------------------------------

    def basis_coords(self) -> dict[int, Fraction]:
        return dict(self._c)

    def keys(self) -> frozenset[int]:
        return frozenset(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def is_rational(self) -> bool:
        return not self._c or (len(self._c) == 1 and 1 in self._c)

    def rational_part(self) -> Fraction:
        return self._c.get(1, Fraction(0))

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.rational_part()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Number) -> Scalar:
        other = as_scalar(other)
        c = dict(self._c)
        for d, q in other._c.items():
            s = c.get(d, 0) + q
            if s:
                c[d] = s
            else:
                c.pop(d, None)
        return Scalar._raw(c)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar._raw({d: -q for d, q in self._c.items()})

    def __pos__(self) -> Scalar:
        return self

    def __sub__(self, other: Number) -> Scalar:
        return self + (-as_scalar(other))

    def __rsub__(self, other: Number) -> Scalar:
        return as_scalar(other) - self

    def __mul__(self, other: Number) -> Scalar:
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Scalar._raw({d: q * other for d, q in self._c.items()})
        other = as_scalar(other)
        c: dict[int, Fraction] = {}
        for d1, q1 in self._c.items():
            for d2, q2 in other._c.items():
                g, d = _key_product(d1, d2)
                s = c.get(d, 0) + q1 * q2 * g
                if s:
                    c[d] = s
                else:
                    c.pop(d, None)
        return Scalar._raw(c)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        """Multiplicative inverse, by successive conjugation over each prime."""
        if not self._c:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return Scalar._raw({1: 1 / self._c[1]})
        p = max(f for d in self._c for f in _prime_factors(d))
        x: dict[int, Fraction] = {}
        y: dict[int, Fraction] = {}
        for d, q in self._c.items():
            if d % p:
                x[d] = q
            else:
                y[d // p] = q
        xs, ys = Scalar._raw(x), Scalar._raw(y)
        conj = xs - ys * Scalar._raw({p: Fraction(1)})
        norm = xs * xs - ys * ys * p
        return conj * norm.inverse()

    def __truediv__(self, other: Number) -> Scalar:
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return Scalar._raw({d: q / other for d, q in self._c.items()})
        return self * as_scalar(other).inverse()

    def __rtruediv__(self, other: Number) -> Scalar:
        return as_scalar(other) * self.inverse()

    def __pow__(self, k: int) -> Scalar:
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __abs__(self) -> Scalar:
        return -self if self.sign() < 0 else self

    # -- order --------------------------------------------------------------

    def _interval(self, bits: int) -> tuple[int, int, int]:
        """Integers ``lo, hi, scale`` with ``lo/scale <= self <= hi/scale``."""
        den = 1
        for q in self._c.values():
            den = den * q.denominator // math.gcd(den, q.denominator)
        one = 1 << bits
        lo = hi = 0
        for d, q in self._c.items():
            m = q.numerator * (den // q.denominator)
            if d == 1:
                lo += m * one
                hi += m * one
                continue
            s = math.isqrt(d << (2 * bits))
            exact = s * s == d << (2 * bits)
            s_hi = s if exact else s + 1
            if m > 0:
                lo += m * s
                hi += m * s_hi
            else:
                lo += m * s_hi
                hi += m * s
        return lo, hi, den * one

    def sign(self) -> int:
        if not self._c:
            return 0
        if self.is_rational():
            return 1 if self._c[1] > 0 else -1
        bits = INITIAL_BITS
        while bits <= MAX_BITS:
            lo, hi, _ = self._interval(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise ArithmeticError(f"sign of {self} not resolved at {MAX_BITS} bits")

    def bounds(self, bits: int = INITIAL_BITS) -> tuple[Fraction, Fraction]:
        """Rational enclosure ``lo <= self <= hi``."""
        lo, hi, scale = self._interval(bits)
        return Fraction(lo, scale), Fraction(hi, scale)

    def lower_bound(self, bits: int = INITIAL_BITS) -> Fraction:
        return self.bounds(bits)[0]

    def upper_bound(self, bits: int = INITIAL_BITS) -> Fraction:
        return self.bounds(bits)[1]

    def __floor__(self) -> int:
        if self.is_rational():
            return math.floor(self.rational_part())
        lo, _, scale = self._interval(INITIAL_BITS)
        k = lo // scale
        while (self - k).sign() < 0:
            k -= 1
        while (self - (k + 1)).sign() >= 0:
            k += 1
        return k

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def floor(self) -> int:
        return math.floor(self)

    def frac(self) -> Scalar:
        return self - math.floor(self)

    def round(self) -> int:
        """Nearest integer, halves rounded up."""
        return math.floor(self + Fraction(1, 2))

    def _cmp(self, other: Number) -> int:
        return (self - as_scalar(other)).sign()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational_part() == other
        return NotImplemented

    def __lt__(self, other: Number) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Number) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self._cmp(other) >= 0

    def __bool__(self) -> bool:
        return bool(self._c)

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.rational_part())
            else:
                self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __float__(self) -> float:
        return float(sum(float(q) * math.sqrt(d) for d, q in self._c.items()))

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = Scalar._raw({})
ONE = Scalar._raw({1: Fraction(1)})


def as_scalar(x: Number) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


def sqrt_rational(q: Fraction | int) -> Scalar:
    """Exact square root of a non-negative rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    if q == 0:
        return ZERO
    # sqrt(p/r) = sqrt(p*r)/r
    g, d = squarefree_decompose(q.numerator * q.denominator)
    return Scalar._raw({d: Fraction(g, q.denominator)})


def dot(a: Sequence[Number], b: Sequence[Number]) -> Scalar:
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    out = ZERO
    for x, y in zip(a, b):
        if x and y:
            out = out + as_scalar(x) * y
    return out


# -- text forms --------------------------------------------------------------


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Number) -> str:
    """Canonical string such as ``"3/2"`` or ``"1+1*sqrt(2)"``."""
    x = as_scalar(x)
    if not x._c:
        return "0"
    parts = []
    for d in sorted(x._c):
        q = x._c[d]
        s = _fmt_q(q) if d == 1 else f"{_fmt_q(q)}*sqrt({d})"
        if parts and not s.startswith("-"):
            s = "+" + s
        parts.append(s)
    return "".join(parts)


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*(?:\*?\s*sqrt\((\d+)\))?")


def parse_scalar(text: str | int) -> Scalar:
    """Parse the output of :func:`format_scalar` (and plain integers/fractions)."""
    if isinstance(text, int):
        return Scalar.rational(text)
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar string")
    out = ZERO
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse scalar {text!r}")
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(1) == "-":
            coef = -coef
        if m.group(3) is None:
            out = out + coef
        else:
            out = out + coef * sqrt_rational(int(m.group(3)))
        pos = m.end()
    return out


def scalar_to_json(x: Number) -> dict:
    x = as_scalar(x)
    if x.is_rational():
        return {"rat": _fmt_q(x.rational_part())}
    return {"terms": [{"coef": _fmt_q(q), "sqrt": d} for d, q in sorted(x._c.items())]}


def scalar_from_json(obj: object) -> Scalar:
    if isinstance(obj, (int, str)):
        return parse_scalar(obj)
    if not isinstance(obj, dict):
        raise ValueError(f"bad scalar JSON: {obj!r}")
    if "rat" in obj:
        return Scalar.rational(Fraction(str(obj["rat"])))
    if "terms" in obj:
        c: dict[int, Fraction] = {}
        for t in obj["terms"]:
            d = int(t["sqrt"])
            if not _is_squarefree(d):
                raise ValueError(f"sqrt key {d} is not squarefree")
            c[d] = c.get(d, 0) + Fraction(str(t["coef"]))
        return Scalar(c)
    raise ValueError(f"bad scalar JSON: {obj!r}")


def vector(values: Iterable[Number | str]) -> tuple[Scalar, ...]:
    return tuple(parse_scalar(v) if isinstance(v, str) else as_scalar(v) for v in values)
