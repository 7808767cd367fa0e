"""Constructive CG closure of a compact convex body.

Every non-constructive step (Kronecker indices, Dirichlet bounds, finite
subcovers, fiber minimizers) is a budgeted search whose output is checked
exactly before it is returned.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .bodies import Body, Sliced, VPolytope, canonical_direction, sqrt_upper, vec
from .errors import BudgetExhausted, CertificateError, CGError, EmptyBody
from .exact import ONE, ZERO, Number, Scalar, as_scalar, dot
from .lattice import (
    AffineLattice,
    dirichlet_approx,
    hnf,
    integer_affine_hull,
    normalize_direction,
)
from .polyhedra import (
    Cut,
    CutSet,
    RationalPolyhedron,
    box_directions,
    cc_polyhedron,
    closure_for_directions,
    cut_for,
    dd_convert,
)

DEFAULT_BUDGET = 20_000
ORBIT_FACTOR = 64


@dataclass(frozen=True)
class LiftWitness:
    """``w_prime = w + s`` for a Dirichlet pair ``(s, t)``; ``t = 0`` means ``w`` was already valid."""

    w_prime: tuple[int, ...]
    n_dirichlet: int
    epsilon: Scalar
    vacuous: bool = False


@dataclass(frozen=True)
class SeparationTrace:
    simplex_directions: tuple[tuple[Fraction, ...], ...]
    a: Fraction
    b: Fraction
    indices: tuple[int, ...]
    case: int


@dataclass(frozen=True)
class SeparationCertificate:
    """Cuts ``a_i`` and weights with ``sum lambda_i a_i = multiple * v``."""

    direction: tuple[Scalar, ...]
    support: Scalar
    cut_vectors: tuple[tuple[int, ...], ...]
    lambdas: tuple[Scalar, ...]
    multiple: Scalar
    strict: bool
    trace: SeparationTrace

    def cuts(self, K: Body) -> CutSet:
        return CutSet(cut_for(K, a) for a in self.cut_vectors)


@dataclass
class ClosureTrace:
    delta: Fraction = Fraction(0)
    R: Fraction = Fraction(0)
    enumerated_w_count: int = 0
    fiber_minimizers: list[tuple[tuple[Fraction, ...], tuple[int, ...]]] = field(default_factory=list)
    recursion_depth: int = 0


@dataclass
class ClosureResult:
    polyhedron: RationalPolyhedron
    generating_cuts: CutSet
    trace: ClosureTrace

    @property
    def empty(self) -> bool:
        return self.polyhedron.is_empty


# -- helpers ------------------------------------------------------------------


def _box(K: Body) -> CutSet:
    return CutSet(cut_for(K, e) for e in box_directions(K.n))


def _scaled(K: Body, v: Sequence[Number]) -> tuple[tuple[Scalar, ...], Scalar]:
    """Rescale ``v`` positively so that ``h_K(v)`` is 0, 1 or -1."""
    v = vec(v)
    h = K.support(v)
    if h.is_zero():
        return v, ZERO
    k = abs(h).inverse()
    return tuple(x * k for x in v), as_scalar(h.sign())


def _ints(v: Sequence[Number]) -> tuple[int, ...]:
    out = []
    for x in v:
        q = as_scalar(x).to_fraction()
        if q.denominator != 1:
            raise CertificateError(f"expected an integer vector, got {v}")
        out.append(int(q))
    return tuple(out)


def _primitive_int(q: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in q:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in q]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints)


def _positive_ratio(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar | None:
    """``c > 0`` with ``u = c v`` or ``None``."""
    i = next(i for i, x in enumerate(v) if not x.is_zero())
    c = u[i] / v[i]
    if c.sign() <= 0 or any(a != c * b for a, b in zip(u, v)):
        return None
    return c


def _halfspace_contained(gp: Sequence[int], cp: int, g: Sequence[int], c: int) -> bool:
    """Whether ``{y : gp.y <= cp}`` lies inside ``{y : g.y <= c}`` (Farkas in one row)."""
    if not any(gp):
        return cp < 0 or (not any(g) and c >= 0)
    i = next(j for j, x in enumerate(gp) if x)
    kappa = Fraction(g[i], gp[i])
    if kappa < 0 or any(g[j] * gp[i] != gp[j] * g[i] for j in range(len(g))):
        return False
    return kappa * cp <= c


def _fresh_primes(count: int, avoid: set[int]) -> list[int]:
    out, p = [], 1
    while len(out) < count:
        p += 1
        if all(p % q for q in range(2, math.isqrt(p) + 1)) and not any(k % p == 0 for k in avoid):
            out.append(p)
    return out


def collapse_equations(eqs: Sequence[tuple[Sequence[Number], Number]]) -> tuple[tuple[Scalar, ...], Scalar]:
    """One equation with the same integer solutions as the whole system.

    ``sum_j sqrt(p_j) (<c_j, x> - b_j) = 0`` with primes ``p_j`` coprime to every
    key already present: for integer ``x`` the summands live on disjoint keys.
    """
    if len(eqs) == 1:
        return vec(eqs[0][0]), as_scalar(eqs[0][1])
    keys: set[int] = set()
    for c, b in eqs:
        for x in list(c) + [b]:
            keys |= set(as_scalar(x).keys())
    primes = _fresh_primes(len(eqs), keys)
    n = len(eqs[0][0])
    c_out = [ZERO] * n
    b_out = ZERO
    for p, (c, b) in zip(primes, eqs):
        r = Scalar.sqrt(p)
        c_out = [x + r * y for x, y in zip(c_out, vec(c))]
        b_out = b_out + r * b
    return tuple(c_out), b_out


# -- irrational separation ----------------------------------------------------


def _saturated_rows(A: Sequence[Sequence[Fraction]], n: int) -> list[tuple[int, ...]]:
    """A basis of ``rowspace(A) ∩ Z^n``: the integer vectors orthogonal to ``ker A``."""
    N = linalg.nullspace(A, n)
    if not N:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    cols = []
    for row in N:
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        cols.append([int(x * den) for x in row])
    H, U = hnf(linalg.transpose(cols))
    return [tuple(u) for h, u in zip(H, U.matrix) if not any(h)]


def _simplex(r: int) -> list[tuple[Fraction, ...]]:
    out = [tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r)]
    out.append(tuple(Fraction(-1, r) for _ in range(r)))
    return out


def separate_irrational(K: Body, v: Sequence[Number], budget: int = DEFAULT_BUDGET) -> SeparationCertificate:
    """At most ``D(v) + 1`` cuts whose closure meets ``H_v(K)`` only inside ``aff_I(H_v(K))``."""
    v0 = vec(v)
    h0 = K.support(v0)
    if all(x.is_rational() for x in v0) and not h0.is_rational():
        # rational normal, irrational offset: the primitive cut alone misses H_v
        a = _primitive_int([x.to_fraction() for x in v0])
        cert = SeparationCertificate(
            v0, h0, (a,), (ONE,), _positive_ratio(vec(a), v0), True,
            SeparationTrace((), Fraction(0), Fraction(0), (1,), 2),
        )
        _verify_separation(K, cert)
        return cert
    vs, hs = _scaled(K, v0)
    nd = normalize_direction(vs)
    bp = nd.lam * hs.to_fraction()
    t, s, r = nd.t, nd.s, nd.r
    k = t + s

    # coefficient c with u = c v' and the admissible residues of the multiples m
    if s == 1:
        c = Fraction(1)
        if bp.denominator == 1:
            case, stride, offset = 1, 1, 0
        else:
            case, stride = 2, bp.denominator
            offset = next(m for m in range(1, stride + 1) if Fraction(1, 3) <= (m * bp) % 1 <= Fraction(2, 3))
    elif bp == 0:
        c, case, stride, offset = Fraction(1), 1, 1, 0
    else:
        c, case, stride, offset = 1 / (2 * abs(bp)), 2, 2, 1
    u = tuple(as_scalar(x) * c for x in nd.canonical)
    u_rat = [int(x.to_fraction()) for x in u[:k]]
    u_alpha = u[k:]

    if r == 0:
        ws: list[tuple[Fraction, ...]] = []
        a_par = b_par = Fraction(0)
        ms = [1]
        lifted = [tuple(u_rat)]
        lambdas = [ONE]
    else:
        Tinv = nd.T.inv().matrix
        # offsets live in the irrational coordinates, so only those columns of T^{-1} scale them
        Rp = max(sqrt_upper(sum(x * x for row in Tinv for x in row[k:])) * K.radius_bound(), Fraction(1))
        eps = Fraction(1) if r == 1 else Fraction(1, 3 * r)
        b_u = c * bp
        ws = _simplex(r)

        uf = [float(x) for x in u_alpha]

        def accept(m: int):
            rounded = [(x * m).round() for x in u_alpha]
            a_y = tuple([m * x for x in u_rat] + rounded)
            if math.floor(K.support(_ints(nd.T.apply_inverse(a_y)))) > math.floor(m * b_u):
                return None
            return m, a_y, [x * m - q for x, q in zip(u_alpha, rounded)]

        def spanning(found):
            null = linalg.nullspace([[found[i][2][j] for i in range(r + 1)] for j in range(r)], r + 1)
            if len(null) != 1:
                return None
            mu = [as_scalar(x) for x in null[0]]
            if mu[0].sign() < 0:
                mu = [-x for x in mu]
            return mu if all(x.sign() > 0 for x in mu) else None

        # walk the orbit of m*u mod 1; each simplex direction keeps the admissible
        # offset best aligned with it until the offsets positively span
        best: list[tuple[float, tuple] | None] = [None] * (r + 1)
        mu = None
        # the float scan is cheap, so it runs well past the exact-work budget
        for m in range(offset or stride, ORBIT_FACTOR * budget + 1, stride):
            d = [m * x - round(m * x) for x in uf]
            norm = math.sqrt(sum(x * x for x in d))
            if norm == 0 or norm * float(Rp) > 1:
                continue
            cos = [sum(x * y for x, y in zip(d, w)) / (norm * math.sqrt(sum(y * y for y in w))) for w in ws]
            i = max(range(r + 1), key=cos.__getitem__)
            if best[i] is not None and best[i][0] >= cos[i]:
                continue
            got = accept(m)
            if got is None:
                continue
            best[i] = (cos[i], got)
            if all(b is not None for b in best):
                found = [b[1] for b in best]
                mu = spanning(found)
                if mu is not None:
                    break
        if mu is None:
            raise BudgetExhausted("no admissible Kronecker indices within budget")
        ms = [m for m, _, _ in found]
        lifted = [a for _, a, _ in found]
        deltas = [d for _, _, d in found]
        a_par = max(abs(x) for d in deltas for x in d).bounds()[1]
        b_par = eps * a_par / 2
        total = sum((x * m for x, m in zip(mu, ms)), ZERO)
        lambdas = [x / total for x in mu]

    cut_vectors = tuple(_ints(nd.T.apply_inverse(a)) for a in lifted)
    combo = [sum((lam * a[i] for lam, a in zip(lambdas, cut_vectors)), ZERO) for i in range(K.n)]
    multiple = _positive_ratio(combo, v0)
    if multiple is None:
        raise CertificateError("cut combination is not a positive multiple of v")
    floors = sum((lam * math.floor(K.support(a)) for lam, a in zip(lambdas, cut_vectors)), ZERO)
    bound = multiple * h0
    if floors > bound or (case == 2 and floors == bound):
        raise CertificateError("floored support combination exceeds the target")
    cert = SeparationCertificate(
        v0, h0, cut_vectors, tuple(lambdas), multiple, case == 2,
        SeparationTrace(tuple(ws), a_par, b_par, tuple(ms), case),
    )
    _verify_separation(K, cert)
    return cert


def _verify_separation(K: Body, cert: SeparationCertificate) -> None:
    P = cc_polyhedron(cert.cuts(K) | _box(K), K.n)
    v, h = cert.direction, cert.support
    lat = integer_affine_hull([(v, h)], K.n)
    for x in P.vertices:
        side = dot(v, x)
        if side > h:
            raise CertificateError("separation cuts leave points beyond H_v")
        if side == h and not lat.contains(x):
            raise CertificateError("separation cuts leave points of H_v outside aff_I")


# -- cut lifting ----------------------------------------------------------------


def _lift_valid(K: Body, lat: AffineLattice, wp: Sequence[int], w: Sequence[int], beta: int) -> bool:
    """Containment of the two cuts restricted to ``lat``'s affine hull, in lattice coordinates."""
    p = lat.basepoint
    ip = lambda a, b: sum(x * y for x, y in zip(a, b))  # noqa: E731
    gp = [ip(wp, d) for d in lat.basis]
    g = [ip(w, d) for d in lat.basis]
    cp = math.floor(K.support(wp)) - ip(wp, p)
    return _halfspace_contained(gp, cp, g, beta - ip(w, p))


def _dirichlet_pairs(v: Sequence[Scalar], budget: int):
    q = [x.to_fraction() if x.is_rational() else None for x in v]
    if all(x is not None for x in q):
        den = 1
        for x in q:
            den = den * x.denominator // math.gcd(den, x.denominator)
        t = den
        for _ in range(64):
            yield t, tuple(int(x * t) for x in q)
            t *= 2
        return
    seen = set()
    N = 2
    while N <= budget:
        pair = dirichlet_approx(v, N)
        if pair not in seen:
            seen.add(pair)
            yield pair
        N *= 2


def lift_cut(K: Body, v: Sequence[Number], w: Sequence[int], budget: int = DEFAULT_BUDGET) -> LiftWitness:
    """Integer ``w'`` whose CG cut for ``K`` implies the CG cut of ``F_v(K)`` in direction
    ``w`` on ``aff_I(H_v(K))``."""
    w = tuple(int(x) for x in w)
    vs, hs = _scaled(K, v)
    F = K.exposed_face(vec(v)).face
    hF = F.support(w)
    beta = math.floor(hF)
    eps = (ONE - hF.frac()) / 2
    lat = integer_affine_hull([(vs, hs)], K.n)
    if lat.empty:
        return LiftWitness(w, 0, eps, vacuous=True)
    if _lift_valid(K, lat, w, w, beta):
        return LiftWitness(w, 0, eps)
    for t, s in _dirichlet_pairs(vs, budget):
        wp = tuple(a + b for a, b in zip(w, s))
        if not _lift_valid(K, lat, wp, w, beta):
            continue
        if abs(K.support(wp) - hs * t - hF) <= eps:
            return LiftWitness(wp, t, eps)
    raise BudgetExhausted("no Dirichlet lift found within budget")


# -- lifting a face closure ---------------------------------------------------


def _face_polyhedron(F: Body, face_cuts: CutSet) -> RationalPolyhedron:
    return cc_polyhedron(face_cuts | _box(F), F.n)


def lift_face_closure(K: Body, v: Sequence[Number], face_cuts: CutSet, budget: int = DEFAULT_BUDGET) -> CutSet:
    """Cuts ``S`` for ``K`` with ``CC(K,S)`` on ``H_v`` equal to ``CC(F_v)`` and behind ``H_v``."""
    v = vec(v)
    F = K.exposed_face(v).face
    S = separate_irrational(K, v, budget).cuts(K)
    for cut in face_cuts:
        if any(cut.a):
            S.add(cut_for(K, lift_cut(K, v, cut.a, budget).w_prime))
    S.update(_box(K))

    h = K.support(v)
    P = cc_polyhedron(S, K.n)
    CF = _face_polyhedron(F, face_cuts)
    on_h = [x for x in P.vertices if dot(v, x) == h]
    if any(dot(v, x) > h for x in P.vertices):
        raise CertificateError("lifted cuts leave points beyond H_v")
    if not all(CF.contains_point(x) for x in on_h):
        raise CertificateError("lifted cuts leave points of H_v outside CC(F_v)")
    if not all(P.contains_point(y) and dot(v, y) == h for y in CF.vertices):
        raise CertificateError("CC(F_v) is not contained in the lifted closure")
    return S


# -- the recursive closure ----------------------------------------------------


def _cut_near_direction(K: Body, d: Sequence[Scalar], x: Sequence[Number], max_n: int = 4096) -> Cut | None:
    """A CG cut removing ``x`` whose normal is a Dirichlet approximation of ``d``."""
    top = max(abs(c) for c in d)
    dn = [c / top for c in d]
    N = 2
    while N <= max_n:
        _, s = dirichlet_approx(dn, N)
        if any(s):
            try:
                cut = cut_for(K, s)
            except CGError:
                return None
            if dot(cut.a, x) > cut.rhs:
                return cut
        N *= 2
    return None


class _Solver:
    """Shares the budget and memoizes face closures across the recursion."""

    def __init__(self, budget: int) -> None:
        if budget < 1:
            raise ValueError("budget must be positive")
        self.budget = budget
        self.cache: dict[tuple, ClosureResult] = {}
        self.short_cuts: dict[tuple, list[Cut]] = {}

    # inside approximation
    def inside(self, K: Body, depth: int = 0) -> CutSet:
        n = K.n
        S = _box(K)
        eqs = K.affine_equations()
        if eqs and all(as_scalar(x).is_rational() for c, _ in eqs for x in c):
            for a in _saturated_rows([[as_scalar(x).to_fraction() for x in c] for c, _ in eqs], n):
                S.update([cut_for(K, a), cut_for(K, tuple(-x for x in a))])
        elif eqs:
            c, _ = collapse_equations(eqs)
            for d in (c, tuple(-x for x in c)):
                S.update(separate_irrational(K, d, self.budget).cuts(K))
        lat = integer_affine_hull(eqs, n) if eqs else None
        for _ in range(self.budget):
            P = cc_polyhedron(S, n)
            if lat is not None and not all(lat.contains(x) for x in P.vertices):
                raise CertificateError("affine-hull cuts leave points outside aff_I(K)")
            bad = [x for x in P.vertices if not K.contains(x)]
            if not bad:
                return S
            short = self._short_cut(K, bad)
            if short is not None:
                S.add(short)
                continue
            d = canonical_direction(K.separating_direction(bad[0]))
            near = _cut_near_direction(K, d, bad[0])
            if near is not None:
                S.add(near)
                continue
            F = K.exposed_face(d).face
            S.update(lift_face_closure(K, d, self.closure(F, depth + 1).generating_cuts, self.budget))
        raise BudgetExhausted("inside approximation did not converge within budget")

    def _short_cut(self, K: Body, points) -> Cut | None:
        """The most violated cut with ``|a|_inf <= 2`` over ``points``, if any."""
        key = K.key()
        if key not in self.short_cuts:
            dirs = [a for a in itertools.product(range(-2, 3), repeat=K.n) if any(a)]
            try:
                self.short_cuts[key] = [cut_for(K, a) for a in dirs]
            except CGError:
                self.short_cuts[key] = []
        best, score = None, Fraction(0)
        for cut in self.short_cuts[key]:
            norm = sqrt_upper(sum(x * x for x in cut.a))
            for x in points:
                gap = dot(cut.a, x) - cut.rhs
                if gap.sign() > 0:
                    val = gap.lower_bound() / norm
                    if best is None or val > score:
                        best, score = cut, val
        return best

    # boundary approximation
    def boundary(self, K: Body, inside_cuts: CutSet, depth: int = 0) -> CutSet:
        P = cc_polyhedron(inside_cuts, K.n)
        out = CutSet()
        seen: set[tuple] = set()
        for G in P.faces():
            centroid = tuple(sum(col, Fraction(0)) / len(G) for col in zip(*G))
            d = K.on_relative_boundary(centroid)
            if d is None:
                continue
            d = canonical_direction(d)
            if d in seen:
                continue
            seen.add(d)
            F = K.exposed_face(d).face
            out.update(lift_face_closure(K, d, self.closure(F, depth + 1).generating_cuts, self.budget))
        return out

    def closure(self, K: Body, depth: int = 0) -> ClosureResult:
        key = K.key()
        if key in self.cache:
            return self.cache[key]
        trace = ClosureTrace(recursion_depth=depth)
        if K.dim == 0:
            S = _box(K)
        else:
            S = self.inside(K, depth)
            S.update(self.boundary(K, S, depth))
            self._interior(K, S, trace)
        P = cc_polyhedron(S, K.n)
        if not all(K.contains(x) for x in P.vertices):
            raise CertificateError("closure polyhedron is not inside K")
        result = ClosureResult(P, S, trace)
        self.cache[key] = result
        return result

    def _interior(self, K: Body, S: CutSet, trace: ClosureTrace) -> None:
        """Add the cuts that can still separate points of the relative interior."""
        P = cc_polyhedron(S, K.n)
        if P.is_empty:
            return
        lat = integer_affine_hull(K.affine_equations(), K.n) if K.dim < K.n else None
        if lat is None:
            tvec = (0,) * K.n
            dirs = [tuple(int(i == j) for j in range(K.n)) for i in range(K.n)]
        else:
            tvec, dirs = lat.basepoint, list(lat.basis)
        if not dirs:
            return
        lstar = _ProjectedLattice(dirs, K.n)
        Kt = K.translate(tuple(-x for x in tvec))
        KW = Kt if K.dim == len(dirs) else Sliced(Kt, lstar.subspace_halfspaces())
        # points of K bound the directions that can cut a vertex; only usable when K spans W
        pts = _inner_points(K) if KW is Kt else []
        processed: set[tuple[int, ...]] = set()
        certified: set[tuple] = set()
        for _ in range(self.budget):
            interior = [x for x in P.vertices if x not in certified and K.on_relative_boundary(x) is None]
            if not interior:
                return
            changed = False
            for x in interior:
                delta = K.boundary_distance_lower(x)
                if delta <= 0:
                    raise CertificateError("relative-interior vertex with nonpositive distance bound")
                if trace.delta == 0 or delta < trace.delta:
                    trace.delta, trace.R = delta, 1 / delta
                removed, added = self._refine_vertex(K, Kt, KW, lstar, pts, S, P, x, 1 / delta, processed, trace)
                changed |= added
                if not removed:
                    certified.add(x)
            if changed:
                P = cc_polyhedron(S, K.n)
                if P.is_empty:
                    return
        raise BudgetExhausted("interior refinement did not converge within budget")

    def _refine_vertex(self, K, Kt, KW, lstar, pts, S, P, x, R, processed, trace) -> tuple[bool, bool]:
        """Process the directions that could cut ``x``, shortest first, with radii
        doubling up to ``R``; stop as soon as a new cut removes ``x``.

        Returns ``(x removed, S changed)``.
        """
        changed = False
        radius = min(Fraction(2), R)
        while True:
            cands = [cs for cs in lstar.candidates(x, radius, pts) if cs not in processed]
            cands.sort(key=lambda cs: (sum(t * t for t in lstar.vector(cs)[0]), cs))
            for cs in cands:
                processed.add(cs)
                w, z0 = lstar.vector(cs)
                trace.enumerated_w_count += 1
                z = self._fiber_min(Kt, KW, w, z0, lstar.kernel)
                trace.fiber_minimizers.append((w, z))
                cut = cut_for(K, z)
                if any(dot(cut.a, y) > cut.rhs for y in P.vertices):
                    changed |= S.add(cut)
                    if dot(cut.a, x) > cut.rhs:
                        return True, True
            if radius == R:
                return False, changed
            radius = min(2 * radius, R)

    def _fiber_min(self, Kt: Body, KW: Body, w, z0, kernel) -> tuple[int, ...]:
        best = z0
        best_val = math.floor(Kt.support(z0))
        if not kernel or KW is Kt:
            return best
        lb = math.floor(KW.support(w))
        evaluated = 1
        rho = 0
        while best_val > lb:
            rho += 1
            for ys in itertools.product(range(-rho, rho + 1), repeat=len(kernel)):
                if max(abs(y) for y in ys) != rho:
                    continue
                z = tuple(a + sum(y * k[i] for y, k in zip(ys, kernel)) for i, a in enumerate(z0))
                val = math.floor(Kt.support(z))
                evaluated += 1
                if val < best_val or (val == best_val and z < best):
                    best, best_val = z, val
                if evaluated > self.budget:
                    raise BudgetExhausted("fiber search did not reach its lower bound")
        return best


class _ProjectedLattice:
    """``L* = pi_W(Z^n)`` for ``W`` spanned by integer vectors, with integer preimages."""

    def __init__(self, dirs: Sequence[Sequence[int]], n: int) -> None:
        self.n = n
        D = [[Fraction(x) for x in d] for d in dirs]
        self.D = D
        k = len(D)
        G = linalg.matmul(D, linalg.transpose(D))
        Ginv = linalg.inverse(G)
        # coordinates of pi_W(e_i) in the basis D
        coords = [linalg.matvec(Ginv, [d[i] for d in D]) for i in range(n)]
        den = 1
        for row in coords:
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
        M = [[int(x * den) for x in row] for row in coords]
        H, U = hnf(M)
        self.basis: list[tuple[Fraction, ...]] = []
        self.preimages: list[tuple[int, ...]] = []
        self.kernel: list[tuple[int, ...]] = []
        for row, urow in zip(H, U.matrix):
            if any(row):
                cvec = [Fraction(x, den) for x in row]
                self.basis.append(tuple(sum((cj * d[i] for cj, d in zip(cvec, D)), Fraction(0)) for i in range(n)))
                self.preimages.append(tuple(urow))
            else:
                self.kernel.append(tuple(urow))
        if len(self.basis) != k:
            raise CertificateError("projected lattice has the wrong rank")
        B = [list(b) for b in self.basis]
        Gb = linalg.inverse(linalg.matmul(B, linalg.transpose(B)))
        self.coef_rows = linalg.matmul(Gb, B)

    def subspace_halfspaces(self) -> list[tuple[tuple[int, ...], int]]:
        """``W`` as integer halfspace pairs."""
        comp = linalg.nullspace(self.D, self.n)
        out = []
        for row in comp:
            den = 1
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
            a = tuple(int(x * den) for x in row)
            out += [(a, 0), (tuple(-x for x in a), 0)]
        return out

    def vector(self, cs: Sequence[int]) -> tuple[tuple[Fraction, ...], tuple[int, ...]]:
        """``w = sum c_j b_j`` and its integer preimage."""
        w = tuple(sum((c * b[i] for c, b in zip(cs, self.basis)), Fraction(0)) for i in range(self.n))
        z = tuple(sum(c * p[i] for c, p in zip(cs, self.preimages)) for i in range(self.n))
        return w, z

    def candidates(self, x: Sequence[Number], R: Fraction, points: Sequence[Sequence[Number]]) -> list[tuple[int, ...]]:
        """Coefficients of every nonzero ``w`` with ``|w| <= R`` and ``<w, y - x> <= 1`` for all ``points``.

        Each point constraint is relaxed to rational data with an error term
        bounded on the ``|w| <= R`` box, so the result is a superset.
        """
        k = len(self.basis)
        bounds = [math.floor(R * sqrt_upper(sum(c * c for c in row))) for row in self.coef_rows]
        rows: list[tuple[tuple[Fraction, ...], Fraction]] = []
        for j, b in enumerate(bounds):
            e = tuple(Fraction(int(i == j)) for i in range(k))
            rows += [(e, Fraction(b)), (tuple(-c for c in e), Fraction(b))]
        for y in points:
            d = [as_scalar(a) - as_scalar(b) for a, b in zip(y, x)]
            g, slack = [], Fraction(0)
            for bvec, bd in zip(self.basis, bounds):
                lo, hi = as_scalar(dot(bvec, d)).bounds()
                g.append(lo)
                slack += (hi - lo) * bd
            rows.append((tuple(g), 1 + slack))
        lo_c, hi_c = list(bounds), [-b for b in bounds]
        for v in dd_convert(rows, k):
            for j, c in enumerate(v):
                lo_c[j] = min(lo_c[j], math.floor(c))
                hi_c[j] = max(hi_c[j], math.ceil(c))
        R2 = R * R
        out = []
        # the last coefficient's range is solved per prefix rather than scanned
        for head in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lo_c[:-1], hi_c[:-1]))):
            lo, hi = lo_c[-1], hi_c[-1]
            for g, rhs in rows:
                rest = rhs - sum((c * gj for c, gj in zip(head, g)), Fraction(0))
                if g[-1] > 0:
                    hi = min(hi, math.floor(rest / g[-1]))
                elif g[-1] < 0:
                    lo = max(lo, math.ceil(rest / g[-1]))
                elif rest < 0:
                    hi = lo - 1
                    break
            for last in range(lo, hi + 1):
                cs = head + (last,)
                if any(cs) and sum(t * t for t in self.vector(cs)[0]) <= R2:
                    out.append(cs)
        return out


def _inner_points(K: Body) -> list[tuple[Scalar, ...]]:
    """Finitely many points of ``K``."""
    if isinstance(K, VPolytope):
        return list(K.vertices)
    n = K.n
    dirs = set()
    for i in range(n):
        for j in range(n):
            for si in (1, -1):
                for sj in (1, -1):
                    d = [0] * n
                    d[i] += si
                    d[j] += sj
                    if any(d):
                        dirs.add(tuple(d))
    out = set()
    for d in sorted(dirs):
        try:
            out.update(K.exposed_face(d).face.vertices)
        except CGError:
            continue
    return sorted(out, key=lambda p: tuple(float(c) for c in p))


def approx_inside(K: Body, budget: int = DEFAULT_BUDGET) -> CutSet:
    """Cuts whose closure is a polytope inside ``K`` and ``aff_I(K)``."""
    return _Solver(budget).inside(K)


def approx_boundary(K: Body, inside_cuts: CutSet, budget: int = DEFAULT_BUDGET) -> CutSet:
    """Cuts making the closure agree with ``CC(K)`` on the relative boundary of ``K``."""
    return _Solver(budget).boundary(K, inside_cuts)


def cg_closure(K: Body, budget: int = DEFAULT_BUDGET) -> ClosureResult:
    """``CC(K)`` with a finite generating cut set."""
    return _Solver(budget).closure(K)


def brute_force_closure(K: Body, B: int) -> ClosureResult:
    """``CC(K, {a : |a|_inf <= B, a != 0})``."""
    if B < 1:
        raise ValueError("B must be positive")
    dirs = [a for a in itertools.product(range(-B, B + 1), repeat=K.n) if any(a)]
    P, cuts = closure_for_directions(K, dirs)
    return ClosureResult(P, cuts, ClosureTrace(enumerated_w_count=len(dirs)))


def restrict_to_body(P: RationalPolyhedron, F: VPolytope) -> list[tuple[Scalar, ...]]:
    """Vertices of ``P`` intersected with the polytope ``F``."""
    if P.is_empty:
        return []
    hs = [(a, b) for a, b in P.hrep]
    try:
        return list(Sliced(F, hs).vertices)
    except EmptyBody:
        return []


def face_closure_equals_restriction_check(K: Body, v: Sequence[Number], B: int) -> bool:
    """``brute_force_closure(F_v, B)`` contains ``brute_force_closure(K, B)`` restricted to ``F_v``."""
    F = K.exposed_face(vec(v)).face
    outer = brute_force_closure(F, B).polyhedron
    inner = restrict_to_body(brute_force_closure(K, B).polyhedron, F)
    return all(outer.contains_point(x) for x in inner)
