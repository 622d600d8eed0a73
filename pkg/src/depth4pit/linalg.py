"""Dense exact linear algebra over the active field.

Elimination is fraction-free (Bareiss): the update
``a[i][j] <- (p * a[i][j] - a[i][c] * a[r][j]) / prev_pivot`` divides exactly,
so integral inputs stay integral.  The same routine runs on matrices of
polynomials, where the division is exact polynomial division; that gives the
rank over the field of rational functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

from .field import ONE, ZERO, FieldElem, Scalar
from .poly import Poly


@dataclass(frozen=True)
class Matrix:
    """Rectangular dense matrix of field elements (rows of equal length)."""

    rows: tuple

    def __init__(self, rows: Sequence[Sequence[Scalar]], ncols: int | None = None):
        conv = tuple(tuple(FieldElem.coerce(v) for v in r) for r in rows)
        widths = {len(r) for r in conv}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", conv)
        object.__setattr__(self, "_ncols", widths.pop() if widths else (ncols or 0))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls([[ZERO] * c for _ in range(r)], ncols=c)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix([list(col) for col in zip(*self.rows)], ncols=self.nrows) if self.rows else Matrix([], 0)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in matrix product")
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for r in self.rows:
            row = []
            for col in cols:
                s = ZERO
                for a, b in zip(r, col):
                    if a and b:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return Matrix(out, ncols=other.ncols)

    def apply(self, v: Sequence[Scalar]) -> list[FieldElem]:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        vv = [FieldElem.coerce(x) for x in v]
        out = []
        for r in self.rows:
            s = ZERO
            for a, b in zip(r, vv):
                if a and b:
                    s = s + a * b
            out.append(s)
        return out

    def to_lists(self) -> list[list[FieldElem]]:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(v) for v in r) for r in self.rows) + "]"


def _field_div(a: FieldElem, b: FieldElem) -> FieldElem:
    return a / b


def bareiss_echelon(rows: List[list], ncols: int, div: Callable = _field_div, zero=ZERO):
    """In-place fraction-free row echelon form with row pivoting only.

    Returns the list of pivot columns; row ``r`` of the result has its pivot at
    ``pivots[r]`` and rows beyond ``len(pivots)`` are zero.
    """
    nrows = len(rows)
    pivots: list[int] = []
    prev = None
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        p = prow[c]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    v = p * row[j] - f * prow[j] if prow[j] else p * row[j]
                    row[j] = div(v, prev) if prev is not None and v else v
            elif prev is not None:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = div(p * row[j], prev)
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = p * row[j]
            row[c] = zero
        prev = p
        pivots.append(c)
        r += 1
    return pivots


def rank(M: Matrix) -> int:
    rows = [list(r) for r in M.rows]
    return len(bareiss_echelon(rows, M.ncols))


def row_basis(M: Matrix) -> Matrix:
    """Echelon basis of the row space (nonzero rows after elimination)."""
    rows = [list(r) for r in M.rows]
    piv = bareiss_echelon(rows, M.ncols)
    return Matrix(rows[: len(piv)], ncols=M.ncols)


def echelon_pivots(M: Matrix) -> list[int]:
    rows = [list(r) for r in M.rows]
    return bareiss_echelon(rows, M.ncols)


def solve_linear(M: Matrix, rhs: Sequence[Scalar]) -> Optional[list[FieldElem]]:
    """One exact solution of ``M x = rhs``, or ``None`` when inconsistent.

    Free variables are set to zero.
    """
    if len(rhs) != M.nrows:
        raise ValueError("right-hand side length must equal the number of rows")
    n = M.ncols
    rows = [list(r) + [FieldElem.coerce(b)] for r, b in zip(M.rows, rhs)]
    pivots = bareiss_echelon(rows, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [ZERO] * n
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = rows[r]
        s = row[n]
        for j in range(c + 1, n):
            if row[j] and x[j]:
                s = s - row[j] * x[j]
        x[c] = s / row[c]
    return x


def nullspace(M: Matrix) -> list[list[FieldElem]]:
    """Basis of ``{x : M x = 0}``, one vector per free column (that entry set to 1)."""
    n = M.ncols
    rows = [list(r) for r in M.rows]
    pivots = bareiss_echelon(rows, n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fcol in free:
        x = [ZERO] * n
        x[fcol] = ONE
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = rows[r]
            s = ZERO
            for j in range(c + 1, n):
                if row[j] and x[j]:
                    s = s - row[j] * x[j]
            x[c] = s / row[c]
        basis.append(x)
    return basis


def inverse(M: Matrix) -> Matrix:
    n = M.nrows
    if M.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    cols = []
    for j in range(n):
        e = [ONE if i == j else ZERO for i in range(n)]
        x = solve_linear(M, e)
        if x is None:
            raise ZeroDivisionError("matrix is singular")
        cols.append(x)
    if rank(M) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix([[cols[j][i] for j in range(n)] for i in range(n)])


# -- matrices of polynomials ---------------------------------------------------


def _poly_div(a: Poly, b: Poly) -> Poly:
    return a.exact_div(b)


def _pivot_cost(p: Poly) -> tuple:
    return (p.degree(), len(p.terms))


def symbolic_rank(M: Sequence[Sequence[Poly]], *, sample_points: int = 3) -> int:
    """Rank of a matrix of polynomials over the rational function field.

    Evaluating at a point can only lower the rank, so when some deterministic
    sample point already reaches ``min(rows, cols)`` that is the answer.
    Otherwise full-pivoting Bareiss elimination on the polynomial entries
    decides it exactly.
    """
    rows = [list(r) for r in M]
    m = len(rows)
    if m == 0:
        return 0
    ncols = len(rows[0])
    if ncols == 0:
        return 0
    n = next((e.n for r in rows for e in r), 0)
    bound = min(m, ncols)
    best = 0
    for k in range(sample_points):
        pt = [FieldElem(_sample_coord(k, i)) for i in range(n)]
        num = Matrix([[e.evaluate(pt) for e in r] for r in rows])
        best = max(best, rank(num))
        if best == bound:
            return best
    return _bareiss_full_pivot(rows, ncols)


def _sample_coord(k: int, i: int) -> int:
    # distinct small primes-ish per (point, variable); deterministic
    return (i + 2) ** (k + 1) + 3 * k + 1


def _bareiss_full_pivot(rows: List[List[Poly]], ncols: int) -> int:
    m = len(rows)
    prev = None
    r = 0
    cols = list(range(ncols))
    while r < min(m, ncols):
        best = None
        for i in range(r, m):
            for jj in range(r, ncols):
                e = rows[i][cols[jj]]
                if e.terms:
                    cost = _pivot_cost(e)
                    if best is None or cost < best[0]:
                        best = (cost, i, jj)
        if best is None:
            break
        _, pi, pj = best
        rows[r], rows[pi] = rows[pi], rows[r]
        cols[r], cols[pj] = cols[pj], cols[r]
        prow = rows[r]
        p = prow[cols[r]]
        for i in range(r + 1, m):
            row = rows[i]
            f = row[cols[r]]
            for jj in range(r + 1, ncols):
                j = cols[jj]
                v = p * row[j]
                if f.terms and prow[j].terms:
                    v = v - f * prow[j]
                if prev is not None and v.terms:
                    v = v.exact_div(prev)
                row[j] = v
            row[cols[r]] = Poly.zero(p.n)
        prev = p
        r += 1
    return r


def jacobian(polys: Sequence[Poly]) -> list[list[Poly]]:
    """Entry ``(i, j)`` is the partial derivative of ``polys[i]`` by ``x_j``."""
    return [[f.diff(j) for j in range(f.n)] for f in polys]
