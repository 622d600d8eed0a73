"""Membership of homogeneous polynomials in ideals of homogeneous generators.

For homogeneous ``A`` of degree ``a`` and generators ``B_i`` of degree
``b_i``, ``A`` lies in the ideal iff ``A = sum B_i D_i`` with each ``D_i``
homogeneous of degree ``a - b_i``.  Taking the coefficients of the ``D_i`` as
unknowns gives one linear equation per monomial of degree ``a``.

``method="system"`` solves that system directly.  ``method="auto"`` (the
default) reaches the same answer faster:

* a linear generator ``l`` is eliminated by solving ``l = 0`` for one
  variable, since ``K[x]/<l>`` is again a polynomial ring; the certificate is
  lifted back through the substitution;
* a single remaining generator is handled by exact division;
* before solving a large system, the problem is pushed through a linear map
  into a few variables.  A ring map sends ideal members to members, so a
  non-member image proves non-membership.
"""

from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

from .field import ZERO, FieldElem
from .linalg import Matrix, rank, solve_linear
from .poly import Exponent, Poly, monomials_of_degree, product, substitute_linear
from .quadratic import hyperplane_substitution


@dataclass(frozen=True)
class MembershipCertificate:
    generators: tuple[Poly, ...]
    multipliers: tuple[Poly, ...]
    target: Poly

    def verify(self) -> bool:
        if len(self.generators) != len(self.multipliers):
            return False
        total = Poly.zero(self.target.n)
        a = self.target.degree()
        for g, d in zip(self.generators, self.multipliers):
            if d.is_zero():
                continue
            if not d.is_homogeneous() or (not self.target.is_zero() and d.degree() != a - g.degree()):
                return False
            total = total + g * d
        return total == self.target


class _Audit:
    check = os.environ.get("DEPTH4PIT_CHECK_CERTS", "") not in ("", "0")
    sinks: list[list] = []


def set_certificate_checking(flag: bool) -> None:
    """Re-multiply every certificate as it is produced (raises on a bad one)."""
    _Audit.check = flag


@contextlib.contextmanager
def collect_certificates() -> Iterator[list[MembershipCertificate]]:
    """Collect every certificate produced inside the block."""
    sink: list[MembershipCertificate] = []
    _Audit.sinks.append(sink)
    try:
        yield sink
    finally:
        _Audit.sinks.remove(sink)


def _emit(cert: MembershipCertificate) -> MembershipCertificate:
    if _Audit.check and not cert.verify():
        raise AssertionError(f"membership certificate does not re-multiply to {cert.target}")
    for sink in _Audit.sinks:
        sink.append(cert)
    return cert


def _require_homogeneous(p: Poly, what: str) -> None:
    if not p.is_homogeneous():
        raise ValueError(f"{what} is not homogeneous: {p}")


def member_homogeneous(A: Poly, gens: Sequence[Poly], method: str = "auto") -> Optional[MembershipCertificate]:
    """Certificate that ``A`` lies in ``<gens>``, or ``None`` when it does not."""
    _require_homogeneous(A, "target")
    for g in gens:
        if g.n != A.n:
            raise ValueError("variable count mismatch")
        _require_homogeneous(g, "generator")
    gens = tuple(gens)
    if method == "system":
        mults = _solve_system(A, list(gens))
    elif method == "auto":
        mults = _member_auto(A, list(gens))
    else:
        raise ValueError(f"unknown membership method {method!r}")
    if mults is None:
        return None
    return _emit(MembershipCertificate(gens, tuple(mults), A))


def _solve_system(A: Poly, gens: list[Poly]) -> Optional[list[Poly]]:
    """Multipliers from the explicit linear system in the unknown coefficients."""
    n = A.n
    zero = Poly.zero(n)
    if A.is_zero():
        return [zero] * len(gens)
    a = A.degree()
    columns: list[tuple[int, Exponent]] = []
    col_entries: list[dict[Exponent, FieldElem]] = []
    for gi, g in enumerate(gens):
        if g.is_zero() or g.degree() > a:
            continue
        for m in monomials_of_degree(n, a - g.degree()):
            entries = {tuple(x + y for x, y in zip(m, e)): c for e, c in g.terms.items()}
            columns.append((gi, m))
            col_entries.append(entries)
    row_set = {e for entries in col_entries for e in entries}
    if any(e not in row_set for e in A.terms):
        return None
    row_index = {e: i for i, e in enumerate(sorted(row_set, reverse=True))}
    M = [[ZERO] * len(columns) for _ in row_index]
    for j, entries in enumerate(col_entries):
        for e, c in entries.items():
            M[row_index[e]][j] = c
    rhs = [ZERO] * len(row_index)
    for e, c in A.terms.items():
        rhs[row_index[e]] = c
    if not columns:
        return None
    x = solve_linear(Matrix(M, ncols=len(columns)), rhs)
    if x is None:
        return None
    mults: list[dict] = [dict() for _ in gens]
    for (gi, m), v in zip(columns, x):
        if v:
            mults[gi][m] = v
    return [Poly(n, t) for t in mults]


def _projection_rows(n: int, m: int, shift: int) -> list[list[int]]:
    # Vandermonde-style rows; distinct nodes keep the image generic enough to be a useful filter
    return [[(i + 2 + shift) ** j for j in range(m)] for i in range(n)]


def _member_auto(A: Poly, gens: list[Poly]) -> Optional[list[Poly]]:
    n = A.n
    zero = Poly.zero(n)
    if A.is_zero():
        return [zero] * len(gens)
    live = [i for i, g in enumerate(gens) if not g.is_zero() and g.degree() <= A.degree()]
    if not live:
        return None

    lin = next((i for i in live if gens[i].degree() == 1), None)
    if lin is not None:
        l = gens[lin]
        sigma = hyperplane_substitution(l)
        A_red = substitute_linear(A, sigma)
        others = [i for i in live if i != lin]
        reduced = [substitute_linear(gens[i], sigma) for i in others]
        sub = _member_auto(A_red, reduced)
        if sub is None:
            return None
        mults = [zero] * len(gens)
        l_mult = (A - A_red).exact_div(l)
        for i, g_red, E in zip(others, reduced, sub):
            if E.is_zero():
                continue
            mults[i] = E
            h = (gens[i] - g_red).exact_div(l)
            l_mult = l_mult - h * E
        mults[lin] = l_mult
        return mults

    if len(live) == 1:
        g = gens[live[0]]
        try:
            q = A.exact_div(g)
        except ValueError:
            return None
        mults = [zero] * len(gens)
        mults[live[0]] = q
        return mults

    m = len(live) + 1
    if n > m:
        for shift in (0, 5):
            rows = _projection_rows(n, m, shift)
            A_p = substitute_linear(A, rows)
            if A_p.is_zero():
                continue
            gens_p = [substitute_linear(gens[i], rows) for i in live]
            if _solve_system(A_p, gens_p) is None:
                return None
    sub = _solve_system(A, [gens[i] for i in live])
    if sub is None:
        return None
    mults = [zero] * len(gens)
    for i, E in zip(live, sub):
        mults[i] = E
    return mults


def linear_factor_member(l: Poly, l1: Poly, l2: Poly) -> bool:
    """Whether the linear form ``l`` lies in ``span{l1, l2}``."""
    for p in (l, l1, l2):
        if not p.is_zero() and (p.degree() != 1 or not p.is_homogeneous()):
            raise ValueError(f"expected a linear form, got {p}")
    base = [p.linear_coeffs() for p in (l1, l2) if not p.is_zero()]
    if l.is_zero():
        return True
    if not base:
        return False
    return rank(Matrix(base + [l.linear_coeffs()])) == rank(Matrix(base))


@dataclass(frozen=True)
class ProductMembership:
    member: bool
    certificate: Optional[MembershipCertificate] = None
    witness: Optional[tuple[int, ...]] = None  # 0-based factor indices (subset mode)

    def __bool__(self) -> bool:
        return self.member


def product_member(
    factors: Sequence[Poly],
    gens: Sequence[Poly],
    mode: str = "direct",
    f_max: Optional[int] = None,
    method: str = "auto",
) -> ProductMembership:
    """Decide ``prod(factors) in <gens>``.

    ``mode="direct"`` tests the full product.  ``mode="subset"`` searches
    subsets of at most ``f_max`` factors (default: all of them) by increasing
    size and lexicographic index order, returning the first member subset.
    Subset mode is sound, and complete once ``f_max`` reaches the number of
    factors.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("empty factor list")
    n = factors[0].n
    for f in factors:
        _require_homogeneous(f, "factor")
    if mode == "direct":
        cert = member_homogeneous(product(factors, n), gens, method)
        return ProductMembership(cert is not None, cert, tuple(range(len(factors))) if cert else None)
    if mode != "subset":
        raise ValueError(f"unknown mode {mode!r}")
    d = len(factors)
    if f_max is None:
        f_max = d
    if f_max < 1:
        raise ValueError("f_max must be at least 1")
    # membership is inherited by supersets, so a non-member full product rules out every subset
    if f_max >= d and member_homogeneous(product(factors, n), gens, method) is None:
        return ProductMembership(False)
    seen: set = set()
    for size in range(1, min(f_max, d) + 1):
        for idx in combinations(range(d), size):
            key = frozenset(_multiset(factors[i] for i in idx).items())
            if key in seen:
                continue
            seen.add(key)
            cert = member_homogeneous(product([factors[i] for i in idx], n), gens, method)
            if cert is not None:
                return ProductMembership(True, cert, idx)
    return ProductMembership(False)


def _multiset(polys) -> dict:
    out: dict = {}
    for p in polys:
        out[p] = out.get(p, 0) + 1
    return out
