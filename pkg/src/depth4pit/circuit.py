"""Depth-4 circuits ``C = sum_i scale_i * prod_j f_ij`` stored in factored form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .field import FieldElem
from .poly import Poly, product
from .quadratic import quad_rank
from .verdict import EARLY_NORMALIZATION, Certificate, Status, Verdict


@dataclass(frozen=True)
class Term:
    scale: FieldElem
    factors: tuple[Poly, ...]

    def __init__(self, scale, factors: Sequence[Poly]):
        object.__setattr__(self, "scale", FieldElem.coerce(scale))
        object.__setattr__(self, "factors", tuple(factors))

    def degree(self) -> int:
        return sum(f.degree() for f in self.factors)

    def value(self, n: int) -> Poly:
        return product(self.factors, n).scale(self.scale)


@dataclass(frozen=True)
class Circuit:
    n: int
    terms: tuple[Term, ...]
    homogeneous: bool = False
    ext: Optional[int] = None
    r_bound: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            for f in t.factors:
                if f.n != self.n:
                    raise ValueError(f"factor in {f.n} variables inside a circuit on {self.n}")

    @property
    def k(self) -> int:
        return len(self.terms)

    @property
    def r(self) -> int:
        if self.r_bound is not None:
            return self.r_bound
        return self.max_factor_degree()

    def max_factor_degree(self) -> int:
        return max((f.degree() for t in self.terms for f in t.factors), default=0)

    def factors(self) -> list[Poly]:
        return [f for t in self.terms for f in t.factors]

    def is_homogeneous(self) -> bool:
        """Every factor homogeneous and every term of the same total degree."""
        if not all(f.is_homogeneous() for f in self.factors()):
            return False
        return len({t.degree() for t in self.terms}) <= 1

    def degree(self) -> int:
        return max((t.degree() for t in self.terms), default=0)

    def replace_terms(self, terms: Sequence[Term], n: int | None = None) -> "Circuit":
        return Circuit(self.n if n is None else n, tuple(terms), self.homogeneous, self.ext, self.r_bound)

    def substitute(self, A) -> "Circuit":
        """Apply a linear change of variables to every factor.

        Factors that become constant are folded into the scale; a factor that
        vanishes kills its term.
        """
        from .poly import substitute_linear

        rows = A.rows if hasattr(A, "rows") else A
        m = len(rows[0]) if rows else 0
        terms = []
        for t in self.terms:
            scale = t.scale
            fs = []
            dead = False
            for f in t.factors:
                g = substitute_linear(f, rows)
                if g.is_zero():
                    dead = True
                    break
                if g.is_constant():
                    scale = scale * g.coeff((0,) * m)
                else:
                    fs.append(g)
            if not dead:
                terms.append(Term(scale, fs))
        return Circuit(m, tuple(terms), self.homogeneous, self.ext, self.r_bound)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    term: Optional[int] = None
    factor: Optional[int] = None
    severity: str = "error"

    def __str__(self) -> str:
        loc = ""
        if self.term is not None:
            loc = f"term {self.term + 1}"
            if self.factor is not None:
                loc += f" factor {self.factor + 1}"
            loc += ": "
        return f"{self.severity}: {loc}{self.message} [{self.code}]"


def validate(c: Circuit) -> list[Diagnostic]:
    """Every violation of the model constraints; ``info`` entries are not violations."""
    out: list[Diagnostic] = []
    if c.k < 1:
        out.append(Diagnostic("empty-circuit", "circuit has no terms"))
    r = c.r_bound
    for ti, t in enumerate(c.terms):
        if not t.scale:
            out.append(Diagnostic("zero-scale", "term scale is zero", ti))
        for fi, f in enumerate(t.factors):
            deg = f.degree()
            if f.is_zero():
                out.append(Diagnostic("zero-factor", "factor is zero", ti, fi))
                continue
            if deg < 1:
                out.append(Diagnostic("constant-factor", "factor has degree 0", ti, fi))
                continue
            if r is not None and deg > r:
                out.append(Diagnostic("degree-exceeds-r", f"degree {deg} exceeds r={r}", ti, fi))
            if not f.is_homogeneous():
                out.append(Diagnostic("non-homogeneous-factor", "factor is not homogeneous", ti, fi))
            elif deg == 2:
                rk = quad_rank(f)
                if rk < 3:
                    out.append(Diagnostic("reducible-quadratic", f"reducible quadratic (rank {rk})", ti, fi))
            elif deg >= 3:
                out.append(
                    Diagnostic("irreducibility-unverified", f"irreducibility of degree-{deg} factor unverified",
                               ti, fi, severity="info")
                )
    degs = [t.degree() for t in c.terms]
    if c.homogeneous and len(set(degs)) > 1:
        base = degs[0]
        for ti, dg in enumerate(degs):
            if dg != base:
                out.append(Diagnostic("term-degree-mismatch",
                                      f"term degree {dg} differs from {base} in a homogeneous circuit", ti))
    return out


def errors(diags: Sequence[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diags if d.severity == "error"]


def associate_ratio(p: Poly, q: Poly) -> Optional[FieldElem]:
    """``c`` with ``p = c * q``, or ``None`` when ``p`` and ``q`` are not associates."""
    if p.n != q.n or p.is_zero() or q.is_zero() or len(p.terms) != len(q.terms):
        return None
    e, cp = next(iter(p.terms.items()))
    cq = q.terms.get(e)
    if cq is None:
        return None
    ratio = cp / cq
    for e, v in q.terms.items():
        w = p.terms.get(e)
        if w is None or w != v * ratio:
            return None
    return ratio


def associates(p: Poly, q: Poly) -> bool:
    if p.is_zero() or q.is_zero():
        raise ValueError("associates() needs nonzero polynomials")
    return associate_ratio(p, q) is not None


def _find_associate(f: Poly, factors: Sequence[Poly]) -> Optional[tuple[int, FieldElem]]:
    for idx, g in enumerate(factors):
        ratio = associate_ratio(g, f)
        if ratio is not None:
            return idx, ratio
    return None


@dataclass(frozen=True)
class NormalizationReport:
    circuit: Circuit
    removed_gcd_factors: tuple[Poly, ...] = ()
    early_verdict: Optional[Verdict] = None


def normalize(c: Circuit) -> NormalizationReport:
    """Strip the common factors of all terms; for k = 3 also detect pairwise common factors.

    When two of three terms share an (irreducible) factor ``g`` that the
    third lacks, the circuit reduced modulo ``g`` is a single nonzero product,
    so it is not identically zero.
    """
    scales = [t.scale for t in c.terms]
    facs = [list(t.factors) for t in c.terms]
    removed: list[Poly] = []
    progress = True
    while progress and facs:
        progress = False
        for fi, f in enumerate(facs[0]):
            hits = []
            for other in facs[1:]:
                hit = _find_associate(f, other)
                if hit is None:
                    break
                hits.append(hit)
            else:
                del facs[0][fi]
                for ti, (idx, ratio) in enumerate(hits, start=1):
                    del facs[ti][idx]
                    scales[ti] = scales[ti] * ratio
                removed.append(f)
                progress = True
                break
    out = c.replace_terms([Term(s, fs) for s, fs in zip(scales, facs)])
    early = None
    if c.k == 3:
        early = _pairwise_shortcut(out)
    return NormalizationReport(out, tuple(removed), early)


def _pairwise_shortcut(c: Circuit) -> Optional[Verdict]:
    for a, b in ((0, 1), (0, 2), (1, 2)):
        third = 3 - a - b
        for fi, g in enumerate(c.terms[a].factors):
            if _find_associate(g, c.terms[b].factors) is None:
                continue
            if _find_associate(g, c.terms[third].factors) is None:
                cert = Certificate(
                    EARLY_NORMALIZATION,
                    {
                        "reason": "restriction mod g leaves a single nonzero product",
                        "g": g,
                        "terms": (a + 1, b + 1),
                        "surviving_term": third + 1,
                    },
                )
                return Verdict(Status.NONZERO, cert)
    return None


def terms_share_factor(c: Circuit, a: int, b: int) -> bool:
    return any(_find_associate(g, c.terms[b].factors) is not None for g in c.terms[a].factors)
