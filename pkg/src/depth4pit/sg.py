"""SG-circuit checks, transcendence degree via the Jacobian, and rank-preserving variable reduction."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as iproduct
from typing import Iterator, Optional, Sequence

from .circuit import Circuit
from .field import FieldElem
from .ideal import ProductMembership, member_homogeneous, product_member
from .linalg import Matrix, jacobian, nullspace, symbolic_rank
from .poly import Poly, grlex_key, substitute_linear


@dataclass(frozen=True)
class SgWitness:
    term: int  # 0-based index of the term that fails
    choice: tuple[int, ...]  # 0-based factor index chosen from each other term, in term order
    others: tuple[int, ...]  # the other term indices, aligned with ``choice``
    generators: tuple[Poly, ...]
    target_factors: tuple[Poly, ...]

    def display(self) -> str:
        return f"({self.term + 1}; {','.join(str(j + 1) for j in self.choice)})"


@dataclass(frozen=True)
class SgReport:
    is_sg: bool
    witness: Optional[SgWitness] = None
    checks: int = 0


def term_order(k: int) -> list[int]:
    """Visit order for term indices: the last term first, then the rest in order."""
    return [k - 1] + list(range(k - 1)) if k > 0 else []


def sg_check(
    c: Circuit,
    mode: str = "subset",
    f_max: Optional[int] = None,
    method: str = "auto",
) -> SgReport:
    """Test ``F_i in <chosen factors of the other terms>`` for every ``i`` and every choice.

    Stops at the first failure.  Terms are visited last-first, choices in
    lexicographic order.
    """
    cache: dict = {}
    checks = 0
    for i in term_order(c.k):
        target = c.terms[i]
        others = tuple(t for t in range(c.k) if t != i)
        ranges = [range(len(c.terms[t].factors)) for t in others]
        for choice in iproduct(*ranges):
            gens = tuple(c.terms[t].factors[j] for t, j in zip(others, choice))
            key = (i, gens)
            hit = cache.get(key)
            if hit is None:
                checks += 1
                hit = _term_member(target.factors, gens, c.n, mode, f_max, method)
                cache[key] = hit
            if not hit:
                return SgReport(False, SgWitness(i, tuple(choice), others, gens, tuple(target.factors)), checks)
    return SgReport(True, None, checks)


def _term_member(factors, gens, n, mode, f_max, method) -> bool:
    if not factors:
        # a nonzero constant never lies in an ideal of forms of positive degree
        return member_homogeneous(Poly.const(n, 1), gens, method) is not None
    return product_member(factors, gens, mode, f_max, method).member


def recheck_witness(w: SgWitness, mode: str = "direct") -> ProductMembership:
    if not w.target_factors:
        n = w.generators[0].n if w.generators else 0
        return ProductMembership(member_homogeneous(Poly.const(n, 1), w.generators) is not None)
    return product_member(w.target_factors, w.generators, mode)


# -- transcendence degree ---------------------------------------------------------


@dataclass(frozen=True)
class TrdegReport:
    value: int
    basis: tuple[int, ...]
    jacobian_rank: int


def trdeg(polys: Sequence[Poly]) -> TrdegReport:
    """Transcendence degree as the rank of the Jacobian (characteristic 0)."""
    polys = list(polys)
    if not polys:
        raise ValueError("trdeg of an empty list")
    if len({p.n for p in polys}) != 1:
        raise ValueError("polynomials have different variable counts")
    J = jacobian(polys)
    r = symbolic_rank(J)
    basis: list[int] = []
    for i in range(len(polys)):
        if len(basis) == r:
            break
        if symbolic_rank([J[j] for j in basis + [i]]) == len(basis) + 1:
            basis.append(i)
    return TrdegReport(r, tuple(basis), r)


def _symbol_monomials(m: int, max_degree: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(max_degree + 1):
        for combo in _compositions(m, deg):
            out.append(combo)
    return out


def _compositions(m: int, deg: int) -> Iterator[tuple[int, ...]]:
    if m == 0:
        if deg == 0:
            yield ()
        return
    for first in range(deg, -1, -1):
        for rest in _compositions(m - 1, deg - first):
            yield (first,) + rest


def dependence_oracle(polys: Sequence[Poly], max_degree: int) -> Optional[Poly]:
    """A nonzero ``F`` of degree ``<= max_degree`` with ``F(f_1, ..., f_m) = 0``, if one exists.

    Brute force: expand every monomial in the ``f_i`` and look for a linear
    dependence.  The lowest degree that admits one is returned, scaled so its
    graded-lex leading coefficient is 1.  ``F`` is a polynomial in ``m``
    variables.
    """
    polys = list(polys)
    m = len(polys)
    n = polys[0].n
    cache: dict[tuple[int, ...], Poly] = {(0,) * m: Poly.const(n, 1)}

    def value(e: tuple[int, ...]) -> Poly:
        if e not in cache:
            i = next(j for j, k in enumerate(e) if k)
            prev = list(e)
            prev[i] -= 1
            cache[e] = value(tuple(prev)) * polys[i]
        return cache[e]

    for D in range(1, max_degree + 1):
        monos = _symbol_monomials(m, D)
        vals = [value(e) for e in monos]
        rows = sorted({x for v in vals for x in v.terms}, key=grlex_key, reverse=True)
        M = Matrix([[v.coeff(x) for v in vals] for x in rows], ncols=len(monos))
        ker = nullspace(M)
        if ker:
            F = Poly(m, {e: c for e, c in zip(monos, ker[0]) if c})
            _, lc = F.leading_term()
            return F.scale(lc.inverse())
    return None


# -- faithful reduction -------------------------------------------------------------


class ReductionBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class FaithfulMap:
    matrix: Matrix  # n rows (old variables) x tau columns (new variables)
    grid: int
    stage: str

    @property
    def tau(self) -> int:
        return self.matrix.ncols


def _candidates(n: int, tau: int, grid_bound: int) -> Iterator[tuple[str, int, list[list[int]]]]:
    for keep in combinations(range(n), tau):
        yield "coordinate", 1, [[1 if i == keep[j] else 0 for j in range(tau)] for i in range(n)]
    N = 1
    while N <= grid_bound:
        for s in range(-N, N + 1):
            for t in range(1, N + 1):
                betas = [s + t * i for i in range(n)]
                yield "vandermonde", N, [[b ** (j + 1) for j in range(tau)] for b in betas]
        N *= 2
    N = 1
    while N <= grid_bound:
        for flat in iproduct(range(-N, N + 1), repeat=n * tau):
            yield "grid", N, [list(flat[i * tau:(i + 1) * tau]) for i in range(n)]
        N *= 2


def faithful_reduce(
    polys: Sequence[Poly],
    tau: int,
    grid_bound: int = 16,
    check: bool = True,
    max_candidates: int = 20_000,
) -> FaithfulMap:
    """First linear map into ``tau`` variables that keeps the Jacobian rank at ``tau``.

    Candidates are tried in a fixed order: coordinate projections, then
    Vandermonde-patterned matrices ``A[i][j] = beta_i^(j+1)`` on a growing
    integer grid, then the whole grid.  Gives up after ``max_candidates``
    candidates or once the grid bound is exhausted.
    """
    polys = list(polys)
    if check:
        actual = trdeg(polys).value
        if actual != tau:
            raise ValueError(f"tau={tau} but the transcendence degree is {actual}")
    n = polys[0].n
    if tau == 0:
        return FaithfulMap(Matrix([[] for _ in range(n)], ncols=0), 1, "coordinate")
    for tried, (stage, N, rows) in enumerate(_candidates(n, tau, grid_bound)):
        if tried >= max_candidates:
            break
        images = [substitute_linear(p, rows) for p in polys]
        if symbolic_rank(jacobian(images)) == tau:
            return FaithfulMap(Matrix(rows), N, stage)
    raise ReductionBudgetExceeded(f"no rank-preserving map found with grid bound {grid_bound}")


def substitute_all(polys: Sequence[Poly], fmap: FaithfulMap) -> list[Poly]:
    return [substitute_linear(p, fmap.matrix) for p in polys]
