"""Gram matrices of homogeneous quadratics and their rank.

Over an algebraically closed field of characteristic 0 a quadratic form
factors into linear forms exactly when its Gram rank is at most 2, so rank is
the only invariant the pipelines need.  Rank does not change under field
extension, so computing it over Q(sqrt(d)) answers the question over C.
"""

from __future__ import annotations

from .field import ZERO, FieldElem
from .linalg import Matrix, rank
from .poly import Poly, substitute_linear


def _require_quadratic(q: Poly) -> None:
    if q.is_zero():
        return
    if q.degree() != 2 or not q.is_homogeneous():
        raise ValueError(f"expected a homogeneous quadratic, got degree {q.degree()}: {q}")


def gram(q: Poly) -> Matrix:
    """Symmetric ``M`` with ``q(x) = x^T M x``; off-diagonals carry half the cross coefficient.

    The zero polynomial is accepted and gives the zero matrix.
    """
    _require_quadratic(q)
    n = q.n
    M = [[ZERO] * n for _ in range(n)]
    for e, c in q.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            M[i][i] = c
        else:
            h = c / 2
            M[i][j] = h
            M[j][i] = h
    return Matrix(M)


def quad_rank(q: Poly) -> int:
    return rank(gram(q))


def is_irreducible_quadratic(q: Poly) -> bool:
    return quad_rank(q) >= 3


def hyperplane_pivot(l: Poly) -> int:
    """Index of the first variable with a nonzero coefficient in ``l``."""
    coeffs = l.linear_coeffs()
    for i, c in enumerate(coeffs):
        if c:
            return i
    raise ValueError("hyperplane form is zero")


def hyperplane_substitution(l: Poly, pivot: int | None = None) -> list[list[FieldElem]]:
    """Substitution rows that solve ``l = 0`` for ``x_pivot`` and keep the other variables."""
    if l.is_zero():
        raise ValueError("hyperplane form is zero")
    coeffs = l.linear_coeffs()
    p = hyperplane_pivot(l) if pivot is None else pivot
    if not coeffs[p]:
        raise ValueError(f"variable {p} does not occur in the hyperplane form")
    n = l.n
    A = [[FieldElem(1) if i == j else ZERO for j in range(n)] for i in range(n)]
    inv = coeffs[p].inverse()
    A[p] = [ZERO if j == p else -(coeffs[j] * inv) for j in range(n)]
    return A


def restrict_to_hyperplane(q: Poly, l: Poly, pivot: int | None = None) -> Poly:
    """``q`` on the hyperplane ``l = 0``, written without the pivot variable.

    The pivot defaults to the first variable occurring in ``l``.
    """
    if q.n != l.n:
        raise ValueError("variable count mismatch")
    return substitute_linear(q, hyperplane_substitution(l, pivot))
