"""Exact rational polyhedra: CG cut sets and double-description conversion."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import linalg
from .bodies import Body, VPolytope
from .errors import Unbounded
from .exact import Number, as_scalar, dot, format_scalar

QVector = tuple[Fraction, ...]
HRow = tuple[QVector, Fraction]


@dataclass(frozen=True)
class Cut:
    """The CG inequality ``<a, x> <= rhs``."""

    a: tuple[int, ...]
    rhs: int


def cut_for(K: Body, a: Sequence[int]) -> Cut:
    a = tuple(int(x) for x in a)
    if not any(a):
        return Cut(a, 0)
    return Cut(a, math.floor(K.support(a)))


class CutSet:
    """Cuts keyed by direction; a repeated direction keeps the smaller rhs."""

    def __init__(self, cuts: Iterable[Cut] = ()) -> None:
        self._cuts: dict[tuple[int, ...], int] = {}
        for c in cuts:
            self.add(c)

    def add(self, cut: Cut) -> bool:
        """Insert; return True if the set changed."""
        old = self._cuts.get(cut.a)
        if old is None or cut.rhs < old:
            self._cuts[cut.a] = cut.rhs
            return True
        return False

    def update(self, cuts: Iterable[Cut]) -> None:
        for c in cuts:
            self.add(c)

    def __or__(self, other: CutSet) -> CutSet:
        out = CutSet(self)
        out.update(other)
        return out

    def __iter__(self) -> Iterator[Cut]:
        for a in sorted(self._cuts):
            yield Cut(a, self._cuts[a])

    def __len__(self) -> int:
        return len(self._cuts)

    def __contains__(self, a: object) -> bool:
        return a in self._cuts

    def rhs(self, a: Sequence[int]) -> int:
        return self._cuts[tuple(a)]

    def directions(self) -> list[tuple[int, ...]]:
        return sorted(self._cuts)

    def __repr__(self) -> str:
        return f"CutSet({len(self)} cuts)"


def box_directions(n: int) -> list[tuple[int, ...]]:
    out = []
    for i in range(n):
        for s in (1, -1):
            e = [0] * n
            e[i] = s
            out.append(tuple(e))
    return out


# -- double description -------------------------------------------------------


def _primitive(v: Sequence[Fraction]) -> QVector:
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    g = g or 1
    return tuple(Fraction(x // g) for x in ints)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _dd_pointed(hrep: Sequence[HRow], n: int) -> tuple[list[QVector], list[QVector]]:
    """Vertices and extreme recession rays of ``{x : a x <= b}`` when ``rank(A) = n``.

    Works on the homogenized cone ``{(x0, x) : x0 >= 0, b x0 - a x >= 0}``
    inserting constraints in index order; two rays are adjacent when their
    common tight constraints have rank ``d - 2``.
    """
    d = n + 1
    rows: list[QVector] = [tuple([Fraction(1)] + [Fraction(0)] * n)]
    rows += [tuple([b] + [-x for x in a]) for a, b in hrep]
    init: list[int] = []
    for i, r in enumerate(rows):
        if linalg.rank([list(rows[j]) for j in init + [i]]) == len(init) + 1:
            init.append(i)
            if len(init) == d:
                break
    inv = linalg.inverse([list(rows[i]) for i in init])
    rays: list[QVector] = [_primitive([inv[r][c] for r in range(d)]) for c in range(d)]
    processed = list(init)
    zsets = [frozenset(i for i in processed if _dot(rows[i], ray) == 0) for ray in rays]
    for i in range(len(rows)):
        if i in init:
            continue
        g = rows[i]
        vals = [_dot(g, r) for r in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        zero = [j for j, v in enumerate(vals) if v == 0]
        new_rays = [rays[j] for j in pos + zero]
        new_z = [zsets[j] | ({i} if vals[j] == 0 else frozenset()) for j in pos + zero]
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                if len(common) < d - 2:
                    continue
                if any(k != p and k != q and common <= zsets[k] for k in range(len(rays))):
                    continue
                if linalg.rank([list(rows[k]) for k in common]) != d - 2:
                    continue
                vp, vq = vals[p], vals[q]
                r = _primitive([vp * y - vq * x for x, y in zip(rays[p], rays[q])])
                new_rays.append(r)
                new_z.append(common | {i})
        rays, zsets = new_rays, new_z
        processed.append(i)
    verts, rec = [], []
    for r in rays:
        if r[0] > 0:
            verts.append(tuple(x / r[0] for x in r[1:]))
        elif any(r):
            rec.append(r[1:])
    return sorted(set(verts)), rec


def dd_convert(hrep: Sequence[HRow], n: int) -> list[QVector]:
    """Vertex list of a bounded polyhedron (empty list when infeasible)."""
    hrep = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in hrep]
    A = [list(a) for a, _ in hrep]
    rk = linalg.rank(A) if A else 0
    if rk < n:
        # a nonempty polyhedron with lineality is unbounded
        if rk == 0:
            feasible = all(b >= 0 for _, b in hrep)
        else:
            basis, _ = linalg.rref(A)
            proj = [(tuple(_dot(a, bv) for bv in basis), b) for a, b in hrep]
            feasible = bool(_dd_pointed(proj, rk)[0])
        if feasible:
            raise Unbounded("cut system does not bound its region")
        return []
    verts, rec = _dd_pointed(hrep, n)
    if verts and rec:
        raise Unbounded("cut system does not bound its region")
    return verts


def enumerate_vertices_bruteforce(hrep: Sequence[HRow], n: int) -> list[QVector]:
    """Independent check: solve every ``n``-subset of constraints."""
    hrep = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in hrep]
    out = set()
    for sub in itertools.combinations(hrep, n):
        x = linalg.solve_unique([list(a) for a, _ in sub], [b for _, b in sub])
        if x is not None and all(_dot(a, x) <= b for a, b in hrep):
            out.add(tuple(x))
    return sorted(out)


# -- polyhedra ----------------------------------------------------------------


@dataclass(frozen=True)
class RationalPolyhedron:
    """A bounded rational polyhedron with both representations."""

    n: int
    hrep: tuple[HRow, ...]
    vertices: tuple[QVector, ...] = field(default=())

    @classmethod
    def from_hrep(cls, hrep: Iterable[tuple[Sequence[Number], Number]], n: int) -> RationalPolyhedron:
        rows = tuple((tuple(Fraction(x) for x in a), Fraction(b)) for a, b in hrep)
        return cls(n, rows, tuple(dd_convert(rows, n)))

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence[Number]]) -> RationalPolyhedron:
        pts = [tuple(as_scalar(x).to_fraction() for x in p) for p in points]
        if not pts:
            raise ValueError("use RationalPolyhedron.empty for the empty set")
        V = VPolytope(pts)
        rows = []
        for a, b in V.facets + [(a, b) for a0, b0 in V.affine_equations() for a, b in ((a0, b0), (tuple(-x for x in a0), -b0))]:
            rows.append((tuple(as_scalar(x).to_fraction() for x in a), as_scalar(b).to_fraction()))
        return cls.from_hrep(rows, V.n)

    @classmethod
    def empty(cls, n: int) -> RationalPolyhedron:
        e = tuple(Fraction(int(i == 0)) for i in range(n))
        return cls(n, ((e, Fraction(-1)), (tuple(-x for x in e), Fraction(0))), ())

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def contains_point(self, x: Sequence[Number]) -> bool:
        """Exact membership; ``x`` may have irrational coordinates."""
        if self.is_empty:
            return False
        return all(dot(a, x) <= b for a, b in self.hrep)

    def subset_of(self, other: RationalPolyhedron) -> bool:
        return all(other.contains_point(v) for v in self.vertices)

    def __le__(self, other: RationalPolyhedron) -> bool:
        return self.subset_of(other)

    def equals(self, other: RationalPolyhedron) -> bool:
        return self.subset_of(other) and other.subset_of(self)

    def intersect(self, other: RationalPolyhedron) -> RationalPolyhedron:
        return RationalPolyhedron.from_hrep(self.hrep + other.hrep, self.n)

    def translate(self, t: Sequence[int]) -> RationalPolyhedron:
        rows = tuple((a, b + _dot(a, t)) for a, b in self.hrep)
        verts = tuple(sorted(tuple(x + s for x, s in zip(v, t)) for v in self.vertices))
        return RationalPolyhedron(self.n, rows, verts)

    def linear_image(self, T: Sequence[Sequence[int]]) -> RationalPolyhedron:
        """Image under a unimodular integer matrix."""
        Tinv = linalg.inverse([[Fraction(x) for x in r] for r in T])
        TinvT = linalg.transpose(Tinv)
        rows = tuple((tuple(linalg.matvec(TinvT, a)), b) for a, b in self.hrep)
        verts = tuple(sorted(tuple(Fraction(x) for x in linalg.matvec(T, v)) for v in self.vertices))
        return RationalPolyhedron(self.n, rows, verts)

    def tight(self, x: Sequence[Number]) -> frozenset[int]:
        return frozenset(i for i, (a, b) in enumerate(self.hrep) if dot(a, x) == b)

    def faces(self) -> list[tuple[QVector, ...]]:
        """All nonempty faces as vertex tuples (the polytope itself included)."""
        if self.is_empty:
            return []
        inc = [self.tight(v) for v in self.vertices]
        found: set[frozenset[int]] = {frozenset(range(len(self.vertices)))}
        frontier = []
        for i in range(len(self.hrep)):
            f = frozenset(j for j, z in enumerate(inc) if i in z)
            if f and f not in found:
                found.add(f)
                frontier.append(f)
        facets = list(frontier)
        while frontier:
            nxt = []
            for f in frontier:
                for g in facets:
                    h = f & g
                    if h and h not in found:
                        found.add(h)
                        nxt.append(h)
            frontier = nxt
        return [tuple(self.vertices[j] for j in sorted(f)) for f in sorted(found, key=lambda s: (len(s), sorted(s)))]

    def to_json(self) -> dict:
        return {
            "hrep": [{"a": [format_scalar(x) for x in a], "b": format_scalar(b)} for a, b in self.hrep],
            "vrep": [[format_scalar(x) for x in v] for v in self.vertices],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(self.n)])
        for v in self.vertices:
            w.writerow([format_scalar(x) for x in v])
        return buf.getvalue()


def cc_polyhedron(cuts: CutSet, n: int) -> RationalPolyhedron:
    """``CC(K, S)`` for the cut set ``S``; raises :class:`Unbounded`."""
    return RationalPolyhedron.from_hrep([(c.a, c.rhs) for c in cuts], n)


def intersect(P: RationalPolyhedron, Q: RationalPolyhedron) -> RationalPolyhedron:
    return P.intersect(Q)


def equal(P: RationalPolyhedron, Q: RationalPolyhedron) -> bool:
    return P.equals(Q)


def contains_polyhedron(K: Body, P: RationalPolyhedron) -> bool:
    return all(K.contains(v) for v in P.vertices)


def closure_for_directions(K: Body, directions: Iterable[Sequence[int]]) -> tuple[RationalPolyhedron, CutSet]:
    cuts = CutSet(cut_for(K, a) for a in directions)
    return cc_polyhedron(cuts, K.n), cuts
