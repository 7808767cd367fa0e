"""Dense exact linear algebra over a field (Fraction or Scalar entries).

Matrices are lists of row lists.  Nothing here inspects the element type
beyond ``==``, ``+``, ``-``, ``*``, ``/``, so the same routines serve the
rationals and the multiquadratic fields.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

Matrix = list[list[Any]]


def _is_zero(x: Any) -> bool:
    return x == 0


def rref(rows: Sequence[Sequence[Any]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if not _is_zero(m[i][c])), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Any]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Any]], ncols: int | None = None) -> Matrix:
    """Basis of ``{x : A x = 0}`` (one basis vector per free column)."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x: list[Any] = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, pc in enumerate(piv):
            x[pc] = -red[i][f]
        basis.append(x)
    return basis


def solve(rows: Sequence[Sequence[Any]], rhs: Sequence[Any]) -> list[Any] | None:
    """One solution of ``A x = b`` or ``None`` when inconsistent."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug)
    if ncols in piv:
        return None
    x: list[Any] = [Fraction(0)] * ncols
    for i, pc in enumerate(piv):
        x[pc] = red[i][ncols]
    return x


def solve_unique(rows: Sequence[Sequence[Any]], rhs: Sequence[Any]) -> list[Any] | None:
    """The solution of a square-rank system, or ``None`` if singular/inconsistent."""
    ncols = len(rows[0])
    red, piv = rref([list(r) + [b] for r, b in zip(rows, rhs)])
    if ncols in piv or len(piv) != ncols:
        return None
    return [red[i][ncols] for i in range(ncols)]


def transpose(m: Sequence[Sequence[Any]]) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), 0) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[Any]], v: Sequence[Any]) -> list[Any]:
    out = []
    for row in a:
        s: Any = 0
        for x, y in zip(row, v):
            if x and y:
                s = s + x * y
        out.append(s)
    return out


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(m: Sequence[Sequence[Any]]) -> Any:
    """Determinant by fraction-exact elimination."""
    a = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in m]
    n = len(a)
    d: Any = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if not _is_zero(a[i][c])), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d = d * a[c][c]
        for i in range(c + 1, n):
            if not _is_zero(a[i][c]):
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def inverse(m: Sequence[Sequence[Any]]) -> Matrix:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]
