"""Compact convex bodies with exact support-function oracles.

Supported classes: convex hulls of finitely many multiquadratic points
(:class:`VPolytope`), Euclidean balls with rational data (:class:`Ball`),
intersections of either with rational halfspaces (:func:`Sliced`), and
images under integer unimodular maps (:class:`Image`).
"""

from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg
from .errors import EmptyBody, IrrationalFacePoint, UnsupportedDirection
from .exact import Number, Scalar, as_scalar, dot, sqrt_rational

Vector = tuple[Scalar, ...]


def vec(values: Sequence[Number]) -> Vector:
    return tuple(as_scalar(x) for x in values)


def _sub(a: Sequence[Number], b: Sequence[Number]) -> Vector:
    return tuple(as_scalar(x) - y for x, y in zip(a, b))


def _add(a: Sequence[Number], b: Sequence[Number]) -> Vector:
    return tuple(as_scalar(x) + y for x, y in zip(a, b))


def _scale(a: Sequence[Number], s: Number) -> Vector:
    return tuple(as_scalar(x) * s for x in a)


def norm2(a: Sequence[Number]) -> Scalar:
    return dot(a, a)


def sqrt_upper(q: Number) -> Fraction:
    """Rational upper bound on ``sqrt(q)`` for ``q >= 0``."""
    hi = as_scalar(q).upper_bound()
    if hi <= 0:
        return Fraction(0)
    scale = 1 << 32
    return Fraction(math.isqrt(int(hi * scale * scale) + 1) + 1, scale)


def _rational_vector(a: Sequence[Number]) -> tuple[Fraction, ...] | None:
    out = []
    for x in a:
        x = as_scalar(x)
        if not x.is_rational():
            return None
        out.append(x.rational_part())
    return tuple(out)


def canonical_direction(v: Sequence[Number]) -> Vector:
    """Positive rescaling: primitive integer when rational, else leading |entry| 1."""
    v = vec(v)
    q = _rational_vector(v)
    if q is not None and any(q):
        den = 1
        for x in q:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in q]
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        return vec(Fraction(x, g) for x in ints)
    lead = next((x for x in v if not x.is_zero()), None)
    if lead is None:
        return v
    return _scale(v, abs(lead).inverse())


@dataclass(frozen=True)
class FaceResult:
    face: "VPolytope"
    support_value: Scalar
    hyperplane_normal: Vector

    def check(self) -> bool:
        return all(dot(self.hyperplane_normal, x) == self.support_value for x in self.face.vertices)


class Body(ABC):
    """A nonempty compact convex set in ``R^n``."""

    n: int

    @abstractmethod
    def support(self, a: Sequence[Number]) -> Scalar:
        """``h_K(a) = max <a, x>`` over the body."""

    @abstractmethod
    def exposed_face(self, v: Sequence[Number]) -> FaceResult: ...

    @abstractmethod
    def contains(self, x: Sequence[Number]) -> bool: ...

    @abstractmethod
    def on_relative_boundary(self, x: Sequence[Number]) -> Vector | None:
        """A direction exposing a proper face through ``x``, or ``None`` in the relative interior."""

    @abstractmethod
    def affine_hull(self) -> tuple[Vector, list[Vector]]: ...

    @abstractmethod
    def translate(self, t: Sequence[Number]) -> Body: ...

    @abstractmethod
    def separating_direction(self, x: Sequence[Number]) -> Vector:
        """``v`` parallel to ``aff(K)`` with ``<v, x> > h_K(v)`` for ``x`` in ``aff(K) \\ K``."""

    @abstractmethod
    def radius_bound(self) -> Fraction:
        """Rational ``R`` with the body inside the origin ball of radius ``R``."""

    @abstractmethod
    def boundary_distance_lower(self, x: Sequence[Number]) -> Fraction:
        """Positive rational lower bound on the distance from ``x`` to ``relbd(K)``
        (measured inside ``aff(K)``), for ``x`` in the relative interior."""

    @abstractmethod
    def key(self) -> tuple: ...

    def linear_image(self, T: Sequence[Sequence[int]]) -> Body:
        return Image(self, T)

    def affine_equations(self) -> list[tuple[Vector, Scalar]]:
        """Equations ``<a, x> = b`` whose solution set is ``aff(K)``."""
        p, basis = self.affine_hull()
        if not basis:
            comp = [[Fraction(int(i == j)) for j in range(self.n)] for i in range(self.n)]
        else:
            comp = linalg.nullspace([list(b) for b in basis], self.n)
        out = []
        for row in comp:
            a = canonical_direction(row)
            out.append((a, dot(a, p)))
        return out

    @property
    def dim(self) -> int:
        return len(self.affine_hull()[1])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Body) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def _affine_basis(points: Sequence[Vector]) -> list[Vector]:
    if len(points) < 2:
        return []
    diffs = [list(_sub(p, points[0])) for p in points[1:]]
    red, _ = linalg.rref(diffs)
    return [vec(r) for r in red]


class VPolytope(Body):
    """Convex hull of a finite point list."""

    def __init__(self, vertices: Sequence[Sequence[Number]]) -> None:
        pts: list[Vector] = []
        seen = set()
        for v in vertices:
            v = vec(v)
            if v not in seen:
                seen.add(v)
                pts.append(v)
        if not pts:
            raise EmptyBody("VPolytope needs at least one vertex")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("vertices must share a dimension")
        self.vertices: tuple[Vector, ...] = tuple(pts)
        self.n = len(pts[0])

    def __repr__(self) -> str:
        return f"VPolytope({[[str(x) for x in v] for v in self.vertices]})"

    def key(self) -> tuple:
        return ("V", frozenset(self.vertices))

    def support(self, a: Sequence[Number]) -> Scalar:
        return max(dot(a, v) for v in self.vertices)

    def exposed_face(self, v: Sequence[Number]) -> FaceResult:
        vals = [dot(v, x) for x in self.vertices]
        h = max(vals)
        face = VPolytope([x for x, y in zip(self.vertices, vals) if y == h])
        return FaceResult(face, h, vec(v))

    @cached_property
    def _hull(self) -> tuple[Vector, list[Vector]]:
        return self.vertices[0], _affine_basis(self.vertices)

    def affine_hull(self) -> tuple[Vector, list[Vector]]:
        return self._hull

    @cached_property
    def facets(self) -> list[tuple[Vector, Scalar]]:
        """Facets ``<a, x> <= b`` of the hull relative to its affine hull, ``a`` parallel to it."""
        p, basis = self._hull
        d = len(basis)
        if d == 0:
            return []
        out: dict[Vector, Scalar] = {}
        for sub in itertools.combinations(range(len(self.vertices)), d):
            base = self.vertices[sub[0]]
            rows = [[dot(_sub(self.vertices[j], base), b) for b in basis] for j in sub[1:]]
            null = linalg.nullspace(rows, d) if rows else [[Fraction(1)]]
            if len(null) != 1:
                continue
            normal = vec(sum((as_scalar(c) * b[i] for c, b in zip(null[0], basis)), Scalar()) for i in range(self.n))
            h = dot(normal, base)
            vals = [dot(normal, x) for x in self.vertices]
            if all(y <= h for y in vals):
                pass
            elif all(y >= h for y in vals):
                normal, h = _scale(normal, -1), -h
            else:
                continue
            c = canonical_direction(normal)
            out.setdefault(c, dot(c, base))
        return sorted(out.items(), key=lambda kv: [float(x) for x in kv[0]])

    def in_affine_hull(self, x: Sequence[Number]) -> bool:
        p, basis = self._hull
        diff = _sub(x, p)
        if not basis:
            return all(d.is_zero() for d in diff)
        return linalg.solve(linalg.transpose([list(b) for b in basis]), list(diff)) is not None

    def contains(self, x: Sequence[Number]) -> bool:
        if not self.in_affine_hull(x):
            return False
        return all(dot(a, x) <= b for a, b in self.facets)

    def on_relative_boundary(self, x: Sequence[Number]) -> Vector | None:
        for a, b in self.facets:
            if dot(a, x) == b:
                return a
        return None

    def separating_direction(self, x: Sequence[Number]) -> Vector:
        if not self.in_affine_hull(x):
            raise ValueError("point is outside the affine hull")
        for a, b in self.facets:
            if dot(a, x) > b:
                return a
        raise ValueError("point lies in the body")

    def translate(self, t: Sequence[Number]) -> VPolytope:
        return VPolytope([_add(v, t) for v in self.vertices])

    def linear_image(self, T: Sequence[Sequence[int]]) -> VPolytope:
        return VPolytope([linalg.matvec(T, v) for v in self.vertices])

    def radius_bound(self) -> Fraction:
        return max(sqrt_upper(norm2(v)) for v in self.vertices)

    def boundary_distance_lower(self, x: Sequence[Number]) -> Fraction:
        best = None
        for a, b in self.facets:
            gap = (b - dot(a, x)).lower_bound() / sqrt_upper(norm2(a))
            best = gap if best is None or gap < best else best
        if best is None:
            raise ValueError("a point has no relative boundary")
        return best


def _enumerate_points(constraints: list[tuple[list, Scalar]], d: int) -> list[list]:
    """Brute-force vertices of ``{y in F^d : G y <= h}`` (bounded)."""
    pts = []
    for sub in itertools.combinations(range(len(constraints)), d):
        y = linalg.solve_unique([constraints[i][0] for i in sub], [constraints[i][1] for i in sub])
        if y is None:
            continue
        if all(dot(g, y) <= h for g, h in constraints):
            pts.append(vec(y))
    return pts


class SlicedPolytope(VPolytope):
    """``conv(base vertices)`` intersected with rational halfspaces; stored by its vertices."""

    def __init__(self, base: VPolytope, halfspaces: Sequence[tuple[Sequence[int], Fraction]]) -> None:
        self.base = base
        self.halfspaces = tuple((tuple(int(x) for x in a), Fraction(b)) for a, b in halfspaces)
        p, basis = base.affine_hull()
        d = len(basis)
        if d == 0:
            pts = [p] if all(dot(a, p) <= b for a, b in self.halfspaces) else []
        else:
            cons = []
            for a, b in list(base.facets) + [(vec(a), as_scalar(b)) for a, b in self.halfspaces]:
                g = [dot(a, bv) for bv in basis]
                rhs = as_scalar(b) - dot(a, p)
                if all(x.is_zero() for x in g):
                    if rhs.sign() < 0:
                        cons = None
                        break
                    continue
                cons.append((g, rhs))
            ys = _enumerate_points(cons, d) if cons is not None else []
            pts = [_add(p, [sum((y[i] * bv[j] for i, bv in enumerate(basis)), Scalar()) for j in range(base.n)]) for y in ys]
        if not pts:
            raise EmptyBody("sliced polytope is empty")
        super().__init__(pts)

    def __repr__(self) -> str:
        return f"Sliced({self.base!r}, {self.halfspaces})"


class Ball(Body):
    """Euclidean ball with rational center and positive rational radius."""

    def __init__(self, center: Sequence[Fraction | int], radius: Fraction | int) -> None:
        self.center = tuple(Fraction(x) for x in center)
        self.radius = Fraction(radius)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        self.n = len(self.center)

    def __repr__(self) -> str:
        return f"Ball({[str(x) for x in self.center]}, {self.radius})"

    def key(self) -> tuple:
        return ("B", self.center, self.radius)

    def _direction(self, a: Sequence[Number]) -> tuple[Fraction, ...]:
        q = _rational_vector(a)
        if q is None:
            raise UnsupportedDirection("ball support needs a rational direction")
        return q

    def support(self, a: Sequence[Number]) -> Scalar:
        q = self._direction(a)
        return dot(q, self.center) + self.radius * sqrt_rational(sum(x * x for x in q))

    def exposed_face(self, v: Sequence[Number]) -> FaceResult:
        q = _rational_vector(v)
        if q is None:
            raise IrrationalFacePoint("tangent point of an irrational direction is outside the field")
        nn = sum(x * x for x in q)
        if nn == 0:
            raise ValueError("zero direction exposes the whole ball")
        scale = sqrt_rational(self.radius**2 / nn)
        pt = tuple(as_scalar(c) + scale * x for c, x in zip(self.center, q))
        return FaceResult(VPolytope([pt]), self.support(q), vec(v))

    def contains(self, x: Sequence[Number]) -> bool:
        return norm2(_sub(x, self.center)) <= self.radius**2

    def on_relative_boundary(self, x: Sequence[Number]) -> Vector | None:
        d = _sub(x, self.center)
        return d if norm2(d) == self.radius**2 else None

    def affine_hull(self) -> tuple[Vector, list[Vector]]:
        return vec(self.center), [vec(int(i == j) for j in range(self.n)) for i in range(self.n)]

    def separating_direction(self, x: Sequence[Number]) -> Vector:
        if self.contains(x):
            raise ValueError("point lies in the body")
        return _sub(x, self.center)

    def translate(self, t: Sequence[Number]) -> Ball:
        q = _rational_vector(t)
        if q is None:
            raise ValueError("balls translate by rational vectors only")
        return Ball([c + s for c, s in zip(self.center, q)], self.radius)

    def radius_bound(self) -> Fraction:
        return sqrt_upper(norm2(self.center)) + self.radius

    def boundary_distance_lower(self, x: Sequence[Number]) -> Fraction:
        return self.radius - sqrt_upper(norm2(_sub(x, self.center)))


class SlicedBall(Body):
    """A full-dimensional ball intersected with rational halfspaces (``n <= 3``).

    Support values come from an exact candidate set: for every independent
    set ``J`` of tight halfspaces the section of the ball by their
    hyperplanes is a lower-dimensional ball; its maximizer, its center and
    (for segments) its endpoints are the candidates.
    """

    def __init__(self, ball: Ball, halfspaces: Sequence[tuple[Sequence[int], Fraction]]) -> None:
        if ball.n > 3:
            raise UnsupportedDirection("sliced balls are supported in dimension <= 3")
        self.ball = ball
        self.halfspaces = tuple((tuple(int(x) for x in a), Fraction(b)) for a, b in halfspaces)
        self.n = ball.n
        pts = [x for x in self._sections()]
        if not any(self._feasible(s[0]) for s in pts):
            raise EmptyBody("sliced ball is empty")
        probe = []
        for i in range(self.n):
            for sgn in (1, -1):
                e = [0] * self.n
                e[i] = sgn
                probe.append(self._argmax(e)[0][0])
        mid = _scale(sum_vectors(probe), Fraction(1, len(probe)))
        strict = norm2(_sub(mid, ball.center)) < ball.radius**2 and all(
            dot(a, mid) < b for a, b in self.halfspaces
        )
        if not strict:
            raise ValueError("sliced ball must have nonempty interior")

    def __repr__(self) -> str:
        return f"Sliced({self.ball!r}, {self.halfspaces})"

    def key(self) -> tuple:
        return ("SB", self.ball.key(), self.halfspaces)

    def _feasible(self, x: Vector) -> bool:
        return self.ball.contains(x) and all(dot(a, x) <= b for a, b in self.halfspaces)

    def _sections(self):
        """Yield ``(center, radius2, N, rhs)`` for independent tight sets."""
        c = self.ball.center
        for size in range(0, min(self.n, len(self.halfspaces)) + 1):
            for J in itertools.combinations(self.halfspaces, size):
                N = [[Fraction(x) for x in a] for a, _ in J]
                if size and linalg.rank(N) < size:
                    continue
                if size:
                    gram = linalg.matmul(N, linalg.transpose(N))
                    resid = [dot(a, c) - b for a, b in J]
                    mu = linalg.solve_unique(gram, [r.rational_part() for r in resid])
                    shift = [sum(m * N[i][j] for i, m in enumerate(mu)) for j in range(self.n)]
                    cc = tuple(x - s for x, s in zip(c, shift))
                else:
                    cc = c
                rho2 = self.ball.radius**2 - sum((x - y) ** 2 for x, y in zip(c, cc))
                if rho2 < 0:
                    continue
                yield vec(cc), rho2, N

    def _argmax(self, a: Sequence[Number]) -> tuple[list[Vector], Scalar, bool]:
        """Maximizers among the candidates, the max, and whether a 2-d flat section attains it."""
        q = _rational_vector(a)
        if q is None:
            raise UnsupportedDirection("sliced ball support needs a rational direction")
        cands: list[Vector] = []
        flat: list[Scalar] = []
        for cc, rho2, N in self._sections():
            local = [cc]
            if N:
                gram = linalg.matmul(N, linalg.transpose(N))
                mu = linalg.solve_unique(gram, linalg.matvec(N, q))
                pa = tuple(x - sum(m * N[i][j] for i, m in enumerate(mu)) for j, x in enumerate(q))
            else:
                pa = q
            sdim = self.n - len(N)
            if any(pa):
                t = sqrt_rational(rho2 / sum(x * x for x in pa))
                local.append(_add(cc, _scale(pa, t)))
            elif sdim >= 1 and rho2 > 0:
                if sdim >= 2:
                    flat.append(dot(q, cc))
                if sdim == 1:
                    u = linalg.nullspace(N, self.n)[0]
                    t = sqrt_rational(rho2 / sum(x * x for x in u))
                    local += [_add(cc, _scale(u, t)), _sub(cc, _scale(u, t))]
            cands += [x for x in local if self._feasible(x)]
        if not cands:
            raise EmptyBody("sliced ball is empty")
        vals = [dot(q, x) for x in cands]
        h = max(vals)
        best = [x for x, v in zip(cands, vals) if v == h]
        return best, h, any(f == h for f in flat)

    def support(self, a: Sequence[Number]) -> Scalar:
        return self._argmax(a)[1]

    def exposed_face(self, v: Sequence[Number]) -> FaceResult:
        best, h, flat = self._argmax(v)
        if flat:
            raise UnsupportedDirection("exposed face is a curved disk section")
        return FaceResult(VPolytope(best), h, vec(v))

    def contains(self, x: Sequence[Number]) -> bool:
        return self._feasible(vec(x))

    def on_relative_boundary(self, x: Sequence[Number]) -> Vector | None:
        for a, b in self.halfspaces:
            if dot(a, x) == b:
                return vec(a)
        return self.ball.on_relative_boundary(x)

    def affine_hull(self) -> tuple[Vector, list[Vector]]:
        return self.ball.affine_hull()

    def separating_direction(self, x: Sequence[Number]) -> Vector:
        for a, b in self.halfspaces:
            if dot(a, x) > b:
                return vec(a)
        return self.ball.separating_direction(x)

    def translate(self, t: Sequence[Number]) -> SlicedBall:
        q = _rational_vector(t)
        if q is None:
            raise ValueError("balls translate by rational vectors only")
        return SlicedBall(
            self.ball.translate(q),
            [(a, b + sum(x * y for x, y in zip(a, q))) for a, b in self.halfspaces],
        )

    def radius_bound(self) -> Fraction:
        return self.ball.radius_bound()

    def boundary_distance_lower(self, x: Sequence[Number]) -> Fraction:
        best = self.ball.boundary_distance_lower(x)
        for a, b in self.halfspaces:
            gap = (b - dot(a, x)).lower_bound() / sqrt_upper(sum(y * y for y in a))
            best = min(best, gap)
        return best


def sum_vectors(vs: Sequence[Vector]) -> Vector:
    out = vs[0]
    for v in vs[1:]:
        out = _add(out, v)
    return out


def Sliced(base: Body, halfspaces: Sequence[tuple[Sequence[int], Fraction | int]]) -> Body:
    """Intersect a body with rational halfspaces ``<a, x> <= b``."""
    hs = [(tuple(int(x) for x in a), Fraction(b)) for a, b in halfspaces]
    if isinstance(base, SlicedPolytope):
        return SlicedPolytope(base.base, list(base.halfspaces) + hs)
    if isinstance(base, SlicedBall):
        return SlicedBall(base.ball, list(base.halfspaces) + hs)
    if isinstance(base, VPolytope):
        return SlicedPolytope(base, hs)
    if isinstance(base, Ball):
        return SlicedBall(base, hs)
    raise TypeError(f"cannot slice {type(base).__name__}")


class Image(Body):
    """Image ``T K`` of a body under an integer unimodular matrix."""

    def __init__(self, base: Body, T: Sequence[Sequence[int]]) -> None:
        from .lattice import UnimodularMatrix

        self.base = base
        self.T = UnimodularMatrix(T)
        self.n = base.n

    def __repr__(self) -> str:
        return f"Image({self.base!r}, {self.T.matrix})"

    def key(self) -> tuple:
        return ("I", self.base.key(), self.T.matrix)

    def _pull(self, x: Sequence[Number]) -> Vector:
        return vec(self.T.apply_inverse(x))

    def _push(self, x: Sequence[Number]) -> Vector:
        return vec(self.T.apply(x))

    def _dual_pull(self, a: Sequence[Number]) -> Vector:
        # h_{TK}(a) = h_K(T^t a)
        return vec(linalg.matvec(linalg.transpose(self.T.matrix), a))

    def _dual_push(self, a: Sequence[Number]) -> Vector:
        return vec(linalg.matvec(linalg.transpose(self.T.inverse), a))

    def support(self, a: Sequence[Number]) -> Scalar:
        return self.base.support(self._dual_pull(a))

    def exposed_face(self, v: Sequence[Number]) -> FaceResult:
        f = self.base.exposed_face(self._dual_pull(v))
        return FaceResult(VPolytope([self._push(x) for x in f.face.vertices]), f.support_value, vec(v))

    def contains(self, x: Sequence[Number]) -> bool:
        return self.base.contains(self._pull(x))

    def on_relative_boundary(self, x: Sequence[Number]) -> Vector | None:
        v = self.base.on_relative_boundary(self._pull(x))
        return None if v is None else self._dual_push(v)

    def affine_hull(self) -> tuple[Vector, list[Vector]]:
        p, basis = self.base.affine_hull()
        return self._push(p), [self._push(b) for b in basis]

    def separating_direction(self, x: Sequence[Number]) -> Vector:
        return self._dual_push(self.base.separating_direction(self._pull(x)))

    def translate(self, t: Sequence[Number]) -> Image:
        return Image(self.base.translate(self._pull(t)), self.T.matrix)

    def linear_image(self, T: Sequence[Sequence[int]]) -> Image:
        return Image(self.base, linalg.matmul(T, self.T.matrix))

    def _op_bound(self, m) -> Fraction:
        return sqrt_upper(sum(Fraction(x) ** 2 for r in m for x in r))

    def radius_bound(self) -> Fraction:
        return self._op_bound(self.T.matrix) * self.base.radius_bound()

    def boundary_distance_lower(self, x: Sequence[Number]) -> Fraction:
        return self.base.boundary_distance_lower(self._pull(x)) / self._op_bound(self.T.inverse)
