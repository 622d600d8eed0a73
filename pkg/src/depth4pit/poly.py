"""Sparse multivariate polynomials over the active field.

A polynomial is a map from exponent tuples (one entry per variable) to nonzero
``FieldElem`` coefficients.  The zero polynomial has no terms.  Monomials are
ordered graded-lexicographically everywhere an order matters (printing,
serialization, leading terms, exact division).
"""

from __future__ import annotations

import heapq
from itertools import combinations_with_replacement
from typing import Dict, Iterable, Iterator, Sequence, Tuple

from .field import ONE, ZERO, FieldElem, Scalar

Exponent = Tuple[int, ...]

_NAMES = "xyzw"


def grlex_key(e: Exponent) -> tuple:
    """Sort key: larger key = larger monomial in graded-lex order."""
    return (sum(e), e)


def monomials_of_degree(n: int, deg: int) -> list[Exponent]:
    """All exponent vectors of total degree ``deg`` in ``n`` variables, grlex-descending."""
    if deg < 0:
        return []
    if n == 0:
        return [()] if deg == 0 else []
    out = []
    for combo in combinations_with_replacement(range(n), deg):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grlex_key, reverse=True)
    return out


def var_name(i: int, n: int) -> str:
    return _NAMES[i] if n <= len(_NAMES) else f"x{i + 1}"


class Poly:
    """Immutable sparse polynomial in ``n`` variables."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Dict[Exponent, FieldElem] | None = None, *, _clean: bool = False):
        self.n = n
        if terms is None:
            self.terms: Dict[Exponent, FieldElem] = {}
        elif _clean:
            self.terms = terms
        else:
            clean = {}
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for {n} variables")
                c = FieldElem.coerce(c)
                if c:
                    clean[tuple(e)] = c
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n, {}, _clean=True)

    @classmethod
    def const(cls, n: int, c: Scalar) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        if not 0 <= i < n:
            raise ValueError(f"variable index {i} out of range for {n} variables")
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): ONE}, _clean=True)

    @classmethod
    def linear(cls, coeffs: Sequence[Scalar]) -> "Poly":
        """The linear form ``sum c_i x_i``."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms)

    @classmethod
    def quadratic_upper(cls, n: int, coeffs: Sequence[Scalar]) -> "Poly":
        """``sum_{i<=j} c_ij x_i x_j`` from the row-major upper triangle."""
        if len(coeffs) != n * (n + 1) // 2:
            raise ValueError(f"expected {n * (n + 1) // 2} upper-triangle coefficients, got {len(coeffs)}")
        terms = {}
        it = iter(coeffs)
        for i in range(n):
            for j in range(i, n):
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = next(it)
        return cls(n, terms)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def sorted_terms(self) -> list[tuple[Exponent, FieldElem]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exponent, FieldElem]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def coeff(self, e: Exponent) -> FieldElem:
        return self.terms.get(tuple(e), ZERO)

    def linear_coeffs(self) -> list[FieldElem]:
        """Coefficient vector of a linear form (degree-1 part)."""
        out = [ZERO] * self.n
        for e, c in self.terms.items():
            if sum(e) != 1:
                raise ValueError("not a linear form")
            out[e.index(1)] = c
        return out

    def support_vars(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly(self.n, out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.n, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly":
        c = FieldElem.coerce(c)
        if not c:
            return Poly.zero(self.n)
        return Poly(self.n, {e: v * c for e, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (FieldElem, int)) or hasattr(other, "denominator"):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: Dict[Exponent, FieldElem] = {}
        get = out.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                prev = get(e)
                out[e] = c1 * c2 if prev is None else prev + c1 * c2
        return Poly(self.n, {e: c for e, c in out.items() if c}, _clean=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, FieldElem)):
            return self == Poly.const(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and evaluation ----------------------------------------------

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * k
        return Poly(self.n, out, _clean=True)

    def evaluate(self, point: Sequence[Scalar]) -> FieldElem:
        if len(point) != self.n:
            raise ValueError("point has wrong dimension")
        pts = [FieldElem.coerce(p) for p in point]
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for p, k in zip(pts, e):
                if k:
                    v = v * (p ** k)
            total = total + v
        return total

    def exact_div(self, q: "Poly") -> "Poly":
        """Quotient ``self / q``; raises ``ValueError`` if ``q`` does not divide."""
        self._check(q)
        if not q.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lm_q, lc_q = q.leading_term()
        inv = lc_q.inverse()
        rem = dict(self.terms)
        heap = [_neg_key(e) for e in rem]
        heapq.heapify(heap)
        quot: Dict[Exponent, FieldElem] = {}
        while heap:
            key = heapq.heappop(heap)
            e = _from_neg_key(key)
            c = rem.get(e)
            if c is None:
                continue
            m = tuple(a - b for a, b in zip(e, lm_q))
            if any(x < 0 for x in m):
                raise ValueError("polynomial division is not exact")
            t = c * inv
            quot[m] = t
            for eq, cq in q.terms.items():
                ee = tuple(a + b for a, b in zip(m, eq))
                prev = rem.get(ee)
                if prev is None:
                    rem[ee] = -(t * cq)
                    heapq.heappush(heap, _neg_key(ee))
                else:
                    s = prev - t * cq
                    if s:
                        rem[ee] = s
                    else:
                        del rem[ee]
        return Poly(self.n, quot, _clean=True)

    # -- printing -----------------------------------------------------------

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                var_name(i, self.n) + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            cs = str(c)
            if not mono:
                parts.append(cs if c.b == 0 or c.a == 0 else f"({cs})")
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            elif c.b != 0:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _neg_key(e: Exponent) -> tuple:
    return (-sum(e), tuple(-x for x in e))


def _from_neg_key(k: tuple) -> Exponent:
    return tuple(-x for x in k[1])


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def product(polys: Iterable[Poly], n: int) -> Poly:
    out = Poly.const(n, 1)
    for p in polys:
        out = out * p
    return out


def substitute_linear(p: Poly, A) -> Poly:
    """Replace each old variable ``x_i`` by the linear form ``sum_j A[i][j] y_j``.

    ``A`` has one row per old variable and one column per new variable; it may
    be a ``Matrix`` or a nested sequence of scalars.
    """
    rows = A.rows if hasattr(A, "rows") and not isinstance(A, (list, tuple)) else A
    rows = [[FieldElem.coerce(v) for v in row] for row in rows]
    if len(rows) != p.n:
        raise ValueError(f"substitution has {len(rows)} rows, polynomial has {p.n} variables")
    m = len(rows[0]) if rows else 0
    if any(len(r) != m for r in rows):
        raise ValueError("ragged substitution matrix")
    images = [Poly(m, {_unit(m, j): c for j, c in enumerate(row) if c}, _clean=True) for row in rows]
    powers: dict[tuple[int, int], Poly] = {}

    def power(i: int, k: int) -> Poly:
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] if k == 1 else power(i, k - 1) * images[i]
        return powers[key]

    acc: Dict[Exponent, FieldElem] = {}
    for e, c in p.terms.items():
        t = Poly(m, {(0,) * m: c}, _clean=True)
        for i, k in enumerate(e):
            if k:
                t = t * power(i, k)
                if not t.terms:
                    break
        for ee, cc in t.terms.items():
            prev = acc.get(ee)
            acc[ee] = cc if prev is None else prev + cc
    return Poly(m, {e: c for e, c in acc.items() if c}, _clean=True)


def _unit(m: int, j: int) -> Exponent:
    e = [0] * m
    e[j] = 1
    return tuple(e)
