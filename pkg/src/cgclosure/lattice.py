"""Integer linear algebra and diophantine approximation.

Hermite normal forms, Euclidean reductions, the unimodular normalization of
a real direction into ``(0,...,0, 1?, alpha_1, ..., alpha_r)`` with
``1, alpha_1, ..., alpha_r`` rationally independent, Dirichlet and
Kronecker searches, and integer points of affine subspaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import BudgetExhausted, CertificateError, ZeroVector
from .exact import Number, Scalar, as_scalar, dot

IntMatrix = tuple[tuple[int, ...], ...]


def _as_int_matrix(m: Iterable[Iterable[int]]) -> IntMatrix:
    out = tuple(tuple(int(x) for x in row) for row in m)
    if not out or not out[0] or any(len(r) != len(out[0]) for r in out):
        raise ValueError("matrix dimensions must be positive and consistent")
    return out


@dataclass(frozen=True)
class UnimodularMatrix:
    matrix: IntMatrix
    inverse: IntMatrix = field(default=(), compare=False)

    def __post_init__(self) -> None:
        m = _as_int_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != len(m[0]):
            raise ValueError("unimodular matrix must be square")
        if not self.inverse:
            inv = linalg.inverse([[Fraction(x) for x in r] for r in m])
            if any(x.denominator != 1 for r in inv for x in r):
                raise ValueError("matrix is not unimodular")
            object.__setattr__(self, "inverse", _as_int_matrix(inv))
        else:
            object.__setattr__(self, "inverse", _as_int_matrix(self.inverse))
        prod = linalg.matmul(self.matrix, self.inverse)
        if prod != linalg.identity(len(m)):
            raise ValueError("inverse does not match matrix")

    @classmethod
    def identity(cls, n: int) -> UnimodularMatrix:
        eye = linalg.identity(n)
        return cls(eye, eye)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def det(self) -> int:
        return int(linalg.det(self.matrix))

    def __matmul__(self, other: UnimodularMatrix) -> UnimodularMatrix:
        return UnimodularMatrix(
            linalg.matmul(self.matrix, other.matrix),
            linalg.matmul(other.inverse, self.inverse),
        )

    def transpose(self) -> UnimodularMatrix:
        return UnimodularMatrix(linalg.transpose(self.matrix), linalg.transpose(self.inverse))

    def inv(self) -> UnimodularMatrix:
        return UnimodularMatrix(self.inverse, self.matrix)

    def apply(self, v: Sequence[Number]) -> tuple:
        return tuple(linalg.matvec(self.matrix, v))

    def apply_inverse(self, v: Sequence[Number]) -> tuple:
        return tuple(linalg.matvec(self.inverse, v))


def _embed(block: Sequence[Sequence[int]], offset: int, n: int) -> list[list[int]]:
    m = linalg.identity(n)
    for i, row in enumerate(block):
        for j, x in enumerate(row):
            m[offset + i][offset + j] = x
    return m


def _block_unimodular(E: UnimodularMatrix, offset: int, n: int) -> UnimodularMatrix:
    return UnimodularMatrix(_embed(E.matrix, offset, n), _embed(E.inverse, offset, n))


# -- Hermite normal form -------------------------------------------------------


def hnf(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, UnimodularMatrix]:
    """Row-style Hermite normal form: ``H = U M`` with ``U`` unimodular.

    ``H`` is in echelon form with positive pivots and entries above each
    pivot reduced into ``[0, pivot)``.  A column vector ``(2, 3)`` given as
    the 2x1 matrix ``[[2], [3]]`` reduces to ``[[1], [0]]``.
    """
    A = [list(r) for r in _as_int_matrix(M)]
    m, n = len(A), len(A[0])
    U = linalg.identity(m)

    def sub(i: int, j: int, q: int) -> None:
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(A[i][c]), i))
            A[r], A[p] = A[p], A[r]
            U[r], U[p] = U[p], U[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    sub(i, r, A[i][c] // A[r][c])
                    clean = clean and not A[i][c]
            if clean:
                break
        if not A[r][c]:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                sub(i, r, q)
        r += 1
    return _as_int_matrix(A), UnimodularMatrix(U)


def euclid_reduce(v: Sequence[int]) -> tuple[int, UnimodularMatrix]:
    """``E`` unimodular with ``E v = (0, ..., 0, g)``, ``g = gcd(v) > 0``."""
    v = [int(x) for x in v]
    if not any(v):
        raise ZeroVector("euclid_reduce of the zero vector")
    k = len(v)
    H, U = hnf([[x] for x in v])
    g = H[0][0]
    # cyclic shift sends the first row to the last position
    shift = [[int(j == (i + 1) % k) for j in range(k)] for i in range(k)]
    E = UnimodularMatrix(shift, linalg.transpose(shift)) @ U
    return g, E


# -- rational structure of real vectors ---------------------------------------


def _key_matrix(values: Sequence[Scalar]) -> list[list[Fraction]]:
    """Rows indexed by sqrt keys, columns by entries of ``values``."""
    keys = sorted(set().union(*(as_scalar(x).keys() for x in values)) or {1})
    coords = [as_scalar(x).basis_coords() for x in values]
    return [[c.get(d, Fraction(0)) for c in coords] for d in keys]


def rational_rank(values: Sequence[Number]) -> int:
    """Dimension of the Q-span of ``values`` inside the reals."""
    if not values:
        return 0
    return linalg.rank(_key_matrix([as_scalar(x) for x in values]))


def rational_dimension(v: Sequence[Number]) -> int:
    """Smallest dimension of a rational subspace containing ``v``.

    ``v = sum_d sqrt(d) * q_d`` with rational vectors ``q_d``; a rational
    matrix annihilates ``v`` iff it annihilates every ``q_d``, so the answer
    is the rank of ``{q_d}``.
    """
    vs = [as_scalar(x) for x in v]
    if all(x.is_zero() for x in vs):
        raise ZeroVector("rational_dimension of the zero vector")
    keys = sorted(set().union(*(x.keys() for x in vs)))
    cols = [[x.basis_coords().get(d, Fraction(0)) for x in vs] for d in keys]
    return linalg.rank(cols)


def _primitive(q: Sequence[Fraction]) -> tuple[list[int], Fraction]:
    """Integer vector with gcd 1 and the positive factor taking ``q`` to it."""
    den = 1
    for x in q:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in q]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [x // g for x in ints], Fraction(den, g)


@dataclass(frozen=True)
class NormalizedDirection:
    T: UnimodularMatrix
    lam: Fraction
    canonical: tuple[Scalar, ...]
    t: int
    s: int
    r: int

    @property
    def rational_dim(self) -> int:
        return self.s + self.r

    @property
    def alphas(self) -> tuple[Scalar, ...]:
        return self.canonical[self.t + self.s :]

    @property
    def k(self) -> int:
        return self.t + self.s


def normalize_direction(v: Sequence[Number]) -> NormalizedDirection:
    """Unimodular ``T`` and rational ``lam > 0`` with ``lam*T*v`` canonical.

    Repeatedly removes a rational dependency among ``(1, irrational block)``
    by the inverse-transpose of a Euclidean reduction of the dependency,
    then clears the rational block down to a single unit entry.
    """
    a = [as_scalar(x) for x in v]
    n = len(a)
    if all(x.is_zero() for x in a):
        raise ZeroVector("normalize_direction of the zero vector")
    T = UnimodularMatrix.identity(n)
    lam = Fraction(1)

    def rational_first(a: list[Scalar], T: UnimodularMatrix) -> tuple[list[Scalar], UnimodularMatrix, int]:
        order = sorted(range(n), key=lambda i: (not a[i].is_rational(), i))
        P = [[int(j == order[i]) for j in range(n)] for i in range(n)]
        Pu = UnimodularMatrix(P, linalg.transpose(P))
        return [a[i] for i in order], Pu @ T, sum(x.is_rational() for x in a)

    a, T, k = rational_first(a, T)
    while k < n:
        block = a[k:]
        null = linalg.nullspace(_key_matrix([Scalar.rational(1)] + block))
        if not null:
            break
        c, _ = _primitive(null[0][1:])
        _, E = euclid_reduce(c)
        Eit = E.inv().transpose()
        Tp = _block_unimodular(Eit, k, n)
        a = a[:k] + list(Eit.apply(block))
        T = Tp @ T
        if not a[n - 1].is_rational():
            raise CertificateError("dependency elimination left an irrational entry")
        a, T, k = rational_first(a, T)

    s = 0
    t = k
    if k and any(not x.is_zero() for x in a[:k]):
        ints, lam2 = _primitive([x.rational_part() for x in a[:k]])
        lam *= lam2
        a = [x * lam2 for x in a]
        _, E = euclid_reduce(ints)
        T = _block_unimodular(E, 0, n) @ T
        a = list(E.apply(a[:k])) + a[k:]
        t, s = k - 1, 1
    canonical = tuple(a)
    if tuple(x * lam for x in T.apply(v)) != canonical:
        raise CertificateError("lam*T*v does not reproduce the canonical vector")
    nd = NormalizedDirection(T, lam, canonical, t, s, n - k)
    if rational_rank([Scalar.rational(1)] + list(nd.alphas)) != nd.r + 1:
        raise CertificateError("canonical irrational block is rationally dependent")
    return nd


# -- approximation ---------------------------------------------------------------


def dirichlet_approx(v: Sequence[Number], N: int) -> tuple[int, tuple[int, ...]]:
    """Smallest ``1 <= n <= N`` with ``max_i |n v_i - s_i| <= N**(-1/l)``."""
    if N < 1 or not v:
        raise ValueError("need N >= 1 and a non-empty vector")
    vs = [as_scalar(x) for x in v]
    l = len(vs)
    for n in range(1, N + 1):
        s = tuple((x * n).round() for x in vs)
        if all(N * abs(x * n - si) ** l <= 1 for x, si in zip(vs, s)):
            return n, s
    raise CertificateError("Dirichlet scan found no approximation")


def torus_distance_ok(x: Scalar, center: Number, radius: Number) -> bool:
    """Whether ``x mod 1`` lies within ``radius`` of ``center mod 1`` on the circle."""
    d = (x - as_scalar(center)).frac()
    return d <= radius or d >= 1 - as_scalar(radius)


def kronecker_hit(
    v: Sequence[Number],
    center: Sequence[Number],
    radius: Number,
    coset_stride: int = 1,
    coset_offset: int = 0,
    budget: int = 10_000,
    start: int = 1,
) -> int:
    """Smallest ``start <= n <= budget`` with ``n = offset (mod stride)`` and
    ``n v mod 1`` inside the box of half-width ``radius`` around ``center``."""
    if coset_stride < 1 or as_scalar(radius).sign() <= 0:
        raise ValueError("stride must be positive and radius > 0")
    vs = [as_scalar(x) for x in v]
    start = max(start, 1)
    n = start + (coset_offset - start) % coset_stride
    while n <= budget:
        if all(torus_distance_ok(x * n, c, radius) for x, c in zip(vs, center)):
            return n
        n += coset_stride
    raise BudgetExhausted(f"no orbit point in the target box for n <= {budget}")


# -- integer points of affine subspaces --------------------------------------


@dataclass(frozen=True)
class AffineLattice:
    """``basepoint + Z-span(basis)``; ``basepoint is None`` means empty."""

    basepoint: tuple[int, ...] | None
    basis: tuple[tuple[int, ...], ...]
    n: int

    @property
    def empty(self) -> bool:
        return self.basepoint is None

    @property
    def dim(self) -> int:
        return -1 if self.empty else len(self.basis)

    def generators(self) -> list[tuple[int, ...]]:
        """Integer points whose affine hull is the lattice's affine hull."""
        if self.empty:
            return []
        p = self.basepoint
        return [p] + [tuple(a + b for a, b in zip(p, u)) for u in self.basis]

    def contains(self, x: Sequence[Number]) -> bool:
        """Whether ``x`` lies in the real affine hull of the lattice."""
        if self.empty:
            return False
        diff = [as_scalar(a) - b for a, b in zip(x, self.basepoint)]
        if not self.basis:
            return all(d.is_zero() for d in diff)
        rows = [[Fraction(u[i]) for u in self.basis] for i in range(self.n)]
        return linalg.solve(rows, diff) is not None

    def equations(self) -> list[tuple[tuple[int, ...], int]]:
        """Integer equations ``<a, x> = b`` cutting out the affine hull."""
        if self.empty:
            raise ValueError("empty lattice has no affine hull")
        if not self.basis:
            comp = linalg.identity(self.n)
        else:
            comp = linalg.nullspace([[Fraction(x) for x in u] for u in self.basis], self.n)
        out = []
        for row in comp:
            a, _ = _primitive([Fraction(x) for x in row])
            out.append((tuple(a), sum(x * y for x, y in zip(a, self.basepoint))))
        return out


def solve_integer_system(
    rows: Sequence[Sequence[Fraction | int]], rhs: Sequence[Fraction | int], n: int
) -> AffineLattice:
    """All integer solutions of a rational system ``A x = b``."""
    int_rows: list[list[int]] = []
    int_rhs: list[int] = []
    for row, b in zip(rows, rhs):
        q = [Fraction(x) for x in row] + [Fraction(b)]
        if not any(q[:-1]):
            if q[-1]:
                return AffineLattice(None, (), n)
            continue
        den = 1
        for x in q:
            den = den * x.denominator // math.gcd(den, x.denominator)
        int_rows.append([int(x * den) for x in q[:-1]])
        int_rhs.append(int(q[-1] * den))
    if not int_rows:
        return AffineLattice(tuple([0] * n), tuple(tuple(r) for r in linalg.identity(n)), n)
    # V A^T = H  =>  A V^T = H^T; substitute x = V^T y
    H, V = hnf(linalg.transpose(int_rows))
    m = len(int_rows)
    pivots = []
    for row in H:
        p = next((j for j, x in enumerate(row) if x), None)
        if p is None:
            break
        pivots.append(p)
    rk = len(pivots)
    y = []
    for i, p in enumerate(pivots):
        rem = int_rhs[p] - sum(y[j] * H[j][p] for j in range(i))
        if rem % H[i][p]:
            return AffineLattice(None, (), n)
        y.append(rem // H[i][p])
    if any(sum(y[i] * H[i][j] for i in range(rk)) != int_rhs[j] for j in range(m)):
        return AffineLattice(None, (), n)
    x0 = [sum(y[i] * V.matrix[i][c] for i in range(rk)) for c in range(n)]
    kernel = tuple(tuple(V.matrix[i]) for i in range(rk, n))
    return AffineLattice(tuple(x0), kernel, n)


def integer_affine_hull(
    equations: Sequence[tuple[Sequence[Number], Number]], n: int | None = None
) -> AffineLattice:
    """Integer points of ``{x : <a_j, x> = b_j}`` with real (multiquadratic) data.

    Each equation splits into one rational equation per sqrt key: for integer
    ``x`` the key coordinates of ``<a, x> - b`` vanish independently.
    """
    if n is None:
        if not equations:
            raise ValueError("dimension needed for an empty equation list")
        n = len(equations[0][0])
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for a, b in equations:
        a = [as_scalar(x) for x in a]
        b = as_scalar(b)
        keys = sorted(set().union(b.keys(), *(x.keys() for x in a)))
        for d in keys:
            rows.append([x.basis_coords().get(d, Fraction(0)) for x in a])
            rhs.append(b.basis_coords().get(d, Fraction(0)))
    return solve_integer_system(rows, rhs, n)


def check_affine_lattice(lat: AffineLattice, equations: Sequence[tuple[Sequence[Number], Number]]) -> bool:
    """Every generator of ``lat`` satisfies every equation exactly."""
    return all(dot(a, p) == as_scalar(b) for p in lat.generators() for a, b in equations)
